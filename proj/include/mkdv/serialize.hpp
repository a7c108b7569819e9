// serialize.hpp -- canonical JSON forms and LaTeX rendering.  All exports
// are deterministic: ordered keys, canonical monomial order, exact rational
// strings.
#ifndef MKDV_SERIALIZE_HPP
#define MKDV_SERIALIZE_HPP

#include <nlohmann/json.hpp>

#include "mkdv/conserved.hpp"
#include "mkdv/hierarchy.hpp"
#include "mkdv/numeval.hpp"

namespace mkdv {

using Json = nlohmann::ordered_json;

// [{"coeff": "p/q", "monomial": [[i, n, exp], ...]}, ...], leading first.
Json diffpoly_to_json(const DiffPoly& p);
DiffPoly diffpoly_from_json(const Json& j, int rank);

// {"trunc": t|null, "entries": [[row, col, [[k, poly], ...]], ...]}
Json loopelement_to_json(const LoopElement& x);

// {"algebra": "A_r^1", "n": n, "rhs": [poly, ...]}
Json flow_to_json(const AlgebraCtx& ctx, const FlowSpec& f);

Json density_to_json(const Density& d);
Json dressing_to_json(const AlgebraCtx& ctx, const DressingData& d);
Json conservation_to_json(const ConservationReport& r);

std::string trajectory_to_csv(const Trajectory& t);

std::string diffpoly_to_latex(const DiffPoly& p, const std::string& symbol = "u");
std::string loopelement_to_latex(const LoopElement& x);
std::string flow_to_latex(const AlgebraCtx& ctx, const FlowSpec& f);

std::string algebra_name(const AlgebraCtx& ctx);

} // namespace mkdv

#endif
