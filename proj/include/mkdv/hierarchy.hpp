// hierarchy.hpp -- the graded recursion producing V^(n) = K p_{-n} K^{-1},
// the flows of the hierarchy in zero-curvature form, the dressing operator
// and the symbolic equivalence check between the two constructions.
#ifndef MKDV_HIERARCHY_HPP
#define MKDV_HIERARCHY_HPP

#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "mkdv/loopalg.hpp"

namespace mkdv {

// The n-th flow: d_n u_i as differential polynomials, together with the
// matrices it was extracted from.
struct FlowSpec {
    int n = 1;
    std::vector<DiffPoly> rhs;   // one per field, homogeneous of weight n+1
    LoopElement V;               // full V^(n) mod trunc
    LoopElement Vminus;          // (V^(n))_-, exact

    FlowSpec() : V(AlgebraCtx(1), 0), Vminus(AlgebraCtx(1), 0) {}
    FlowSpec(int n_, std::vector<DiffPoly> rhs_, LoopElement V_, LoopElement Vm)
        : n(n_), rhs(std::move(rhs_)), V(std::move(V_)), Vminus(std::move(Vm)) {}
};

// Graded data of the dressing operator M = exp(sum_j y_j): homogeneous
// components of log M (gauge: zero a-coefficient) and the scalar functions
// h_j appearing in the dressed connection d/dz + p_{-1} + sum h_j p_j.
// The conjugation identity holds modulo principal degree > trunc-1.
struct DressingData {
    int trunc = 0;
    std::vector<LoopElement> y;  // y[j-1] homogeneous of degree j, j = 1..trunc
    std::map<int, DiffPoly> h;   // j in I, j <= trunc
};

// Per-context engine with a memoised V^(n) table (concurrent readers,
// single-writer insertion).
class Engine {
public:
    explicit Engine(AlgebraCtx ctx) : ctx_(ctx) {}
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    const AlgebraCtx& ctx() const { return ctx_; }

    // V = sum_{j=-n}^{D} V_j with V_{-n} = p_{-n}, each V_j homogeneous of
    // degree j with entries of weight n+j, solving the graded components of
    // [d/dz + p_{-1} + u, V] = 0 below degree D.
    std::shared_ptr<const LoopElement> compute_V(int n, int D);

    // Flow extraction; requires D >= n+2 so the degree-0 and degree-1 data
    // of V are settled.
    std::shared_ptr<const FlowSpec> flow(int n, int D);

    // Evolutionary prolongation: d_n p = sum_{i,k} d^k(rhs_i) dp/du_i^(k).
    DiffPoly prolong(const FlowSpec& f, const DiffPoly& p) const;

    // prolong(m, prolong(n, probe)) - prolong(n, prolong(m, probe)).
    DiffPoly commutator_check(int m, int n, int D, const DiffPoly& probe);

    // d_m (V_n)_- - d_n (V_m)_- + [(V_m)_-, (V_n)_-]; identically zero.
    LoopElement zero_curvature_residual(int m, int n, int D);

    DressingData compute_dressing(int D);

    // M p_{-n} M^{-1} - V^(n); zero modulo degree > D - n - 1.
    LoopElement equivalence_check(int n, int D);
    LoopElement dressed_orbit(const DressingData& d, int n) const;

    // u embedded as a traceless diagonal matrix (cached convenience).
    LoopElement u_matrix() const;

private:
    LoopElement compute_V_impl(int n, int D) const;

    AlgebraCtx ctx_;
    mutable std::shared_mutex mu_;
    std::map<std::pair<int, int>, std::shared_ptr<const LoopElement>> vcache_;
    std::map<std::pair<int, int>, std::shared_ptr<const FlowSpec>> fcache_;
};

} // namespace mkdv

#endif
