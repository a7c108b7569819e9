#include "mkdv/serialize.hpp"

#include <sstream>

namespace mkdv {

std::string algebra_name(const AlgebraCtx& ctx) {
    return "A_" + std::to_string(ctx.rank) + "^1";
}

Json diffpoly_to_json(const DiffPoly& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json mono = Json::array();
        for (const auto& f : m.factors())
            mono.push_back(Json::array({f.var.field, f.var.order, f.exp}));
        terms.push_back(Json{{"coeff", rat_str(c)}, {"monomial", mono}});
    }
    return terms;
}

DiffPoly diffpoly_from_json(const Json& j, int rank) {
    DiffPoly::TermMap terms;
    for (const auto& t : j) {
        Rat c(t.at("coeff").get<std::string>());
        c.canonicalize();
        Monomial m;
        for (const auto& f : t.at("monomial"))
            m = m.times_var({f.at(0).get<int>(), f.at(1).get<int>()},
                            f.at(2).get<int>());
        terms.emplace(std::move(m), std::move(c));
    }
    return DiffPoly::from_terms(rank, std::move(terms));
}

Json loopelement_to_json(const LoopElement& x) {
    Json entries = Json::array();
    for (int a = 1; a <= x.size(); ++a)
        for (int b = 1; b <= x.size(); ++b) {
            const Laurent& l = x.laurent(a, b);
            if (l.empty()) continue;
            Json powers = Json::array();
            for (const auto& [k, p] : l)
                powers.push_back(Json::array({k, diffpoly_to_json(p)}));
            entries.push_back(Json::array({a, b, powers}));
        }
    Json out;
    out["trunc"] = x.trunc() >= kTruncInf ? Json(nullptr) : Json(x.trunc());
    out["entries"] = entries;
    return out;
}

Json flow_to_json(const AlgebraCtx& ctx, const FlowSpec& f) {
    Json rhs = Json::array();
    for (const auto& p : f.rhs) rhs.push_back(diffpoly_to_json(p));
    Json out;
    out["algebra"] = algebra_name(ctx);
    out["n"] = f.n;
    out["rhs"] = rhs;
    return out;
}

Json density_to_json(const Density& d) {
    Json out;
    out["n"] = d.n;
    if (d.m != 0) out["m"] = d.m;
    out["weight"] = d.weight;
    out["value"] = diffpoly_to_json(d.value);
    return out;
}

Json dressing_to_json(const AlgebraCtx& ctx, const DressingData& d) {
    Json out;
    out["algebra"] = algebra_name(ctx);
    out["trunc"] = d.trunc;
    Json hs = Json::object();
    for (const auto& [j, hj] : d.h) hs[std::to_string(j)] = diffpoly_to_json(hj);
    out["h"] = hs;
    Json ys = Json::array();
    for (const auto& yj : d.y) ys.push_back(loopelement_to_json(yj));
    out["log_m"] = ys;
    return out;
}

Json conservation_to_json(const ConservationReport& r) {
    Json ds = Json::array();
    for (const auto& d : r.densities) {
        Json e;
        e["density"] = d.label;
        e["initial"] = d.initial;
        e["final"] = d.final_value;
        e["max_rel_drift"] = d.max_rel_drift;
        e["relative"] = d.relative;
        ds.push_back(e);
    }
    Json out;
    out["densities"] = ds;
    out["max_rel_drift"] = r.max_rel_drift;
    return out;
}

std::string trajectory_to_csv(const Trajectory& t) {
    std::ostringstream os;
    os << "t,z";
    if (!t.samples.empty())
        for (int f = 1; f <= t.samples.front().nfields; ++f) os << ",u" << f;
    os << "\n";
    os.precision(17);
    for (const auto& s : t.samples)
        for (int j = 0; j < s.npoints; ++j) {
            os << s.time << "," << s.point(j);
            for (int f = 0; f < s.nfields; ++f) os << "," << s.u[f][j];
            os << "\n";
        }
    return os.str();
}

// ------------------------------------------------------------------- LaTeX

static std::string latex_rat(const Rat& q, bool leading) {
    std::ostringstream os;
    Rat a = q;
    bool neg = a < 0;
    if (neg) a = -a;
    if (leading)
        os << (neg ? "-" : "");
    else
        os << (neg ? " - " : " + ");
    if (a.get_den() == 1)
        os << a.get_num().get_str();
    else
        os << "\\frac{" << a.get_num().get_str() << "}{" << a.get_den().get_str()
           << "}";
    return os.str();
}

static std::string latex_var(const JetVar& v, const std::string& symbol,
                             bool with_index) {
    std::ostringstream os;
    os << symbol;
    if (with_index) os << "_{" << v.field << "}";
    if (v.order > 0 && v.order <= 3)
        os << std::string(v.order, '\'');
    else if (v.order > 3)
        os << "^{(" << v.order << ")}";
    return os.str();
}

std::string diffpoly_to_latex(const DiffPoly& p, const std::string& symbol) {
    if (p.is_zero()) return "0";
    bool with_index = p.rank() > 1;
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p.terms()) {
        bool unit = (c == 1 || c == -1) && !m.is_one();
        if (unit) {
            if (first)
                os << (c < 0 ? "-" : "");
            else
                os << (c < 0 ? " - " : " + ");
        } else {
            os << latex_rat(c, first);
        }
        first = false;
        for (const auto& f : m.factors()) {
            os << (m.factors().front().var == f.var && unit ? "" : " ");
            os << latex_var(f.var, symbol, with_index);
            if (f.exp > 1) os << "^{" << f.exp << "}";
        }
    }
    return os.str();
}

std::string loopelement_to_latex(const LoopElement& x) {
    std::ostringstream os;
    os << "\\begin{pmatrix}";
    for (int a = 1; a <= x.size(); ++a) {
        for (int b = 1; b <= x.size(); ++b) {
            const Laurent& l = x.laurent(a, b);
            bool first = true;
            if (l.empty()) os << "0";
            for (const auto& [k, p] : l) {
                if (!first) os << " + ";
                first = false;
                bool wrap = p.term_count() > 1;
                if (wrap) os << "\\left(";
                os << diffpoly_to_latex(p);
                if (wrap) os << "\\right)";
                if (k != 0) os << "\\lambda^{" << k << "}";
            }
            if (b < x.size()) os << " & ";
        }
        if (a < x.size()) os << " \\\\ ";
    }
    os << "\\end{pmatrix}";
    return os.str();
}

std::string flow_to_latex(const AlgebraCtx& ctx, const FlowSpec& f) {
    std::ostringstream os;
    for (int i = 1; i <= ctx.rank; ++i) {
        os << "\\partial_{" << f.n << "} u";
        if (ctx.rank > 1) os << "_{" << i << "}";
        os << " = " << diffpoly_to_latex(f.rhs[i - 1]) << "\n";
    }
    return os.str();
}

} // namespace mkdv
