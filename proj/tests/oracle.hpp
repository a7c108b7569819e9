// Independent flow oracle: determines the n-th flow by brute-force
// undetermined coefficients, never touching the production recursion
// (no antiderivative, no ad-inversion, no Kac projection).
//
// Ansatz:  A = p_{-n} + sum_{d=-n+1..0} (generic slice-d element with
//          homogeneous weight-(n+d) coefficients),
//          dt u_i = generic weight-(n+1) polynomial,
// subject to the zero-curvature equation with the known operator
// B = p_{-1} + u:   dt(B) - dz(A) + [A, B] = 0.
// The linear system has a unique solution; its dt-part is the flow.
#ifndef MKDV_TESTS_ORACLE_HPP
#define MKDV_TESTS_ORACLE_HPP

#include <map>
#include <tuple>
#include <vector>

#include "mkdv/loopalg.hpp"

namespace mkdv::testing {

// All monomials of the given weight over rank fields (weight of u^{(k)} is
// k+1); canonical non-increasing variable sequences avoid duplicates.
inline void enum_weight_monomials(int rank, int weight, JetVar bound,
                                  const Monomial& acc,
                                  std::vector<Monomial>& out) {
    if (weight == 0) {
        out.push_back(acc);
        return;
    }
    for (int w = std::min(weight, bound.weight()); w >= 1; --w) {
        int max_field = (w == bound.weight()) ? bound.field : rank;
        for (int f = std::min(rank, max_field); f >= 1; --f) {
            JetVar v{f, w - 1};
            enum_weight_monomials(rank, weight - w, v, acc.times_var(v), out);
        }
    }
}

inline std::vector<Monomial> weight_monomials(int rank, int weight) {
    std::vector<Monomial> out;
    enum_weight_monomials(rank, weight, JetVar{rank, weight - 1},
                          Monomial::one(), out);
    return out;
}

struct OracleFlow {
    std::vector<DiffPoly> rhs; // dt u_i
};

// Plain Gaussian elimination over Q, local to the oracle.
inline std::vector<Rat> oracle_solve(std::vector<std::vector<Rat>> A,
                                     std::vector<Rat> b) {
    const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    std::vector<std::size_t> piv(cols, SIZE_MAX);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = SIZE_MAX;
        for (std::size_t r = rank; r < rows; ++r)
            if (A[r][c] != 0) { p = r; break; }
        if (p == SIZE_MAX) continue;
        std::swap(A[p], A[rank]);
        std::swap(b[p], b[rank]);
        Rat inv = 1 / A[rank][c];
        for (auto& v : A[rank]) v *= inv;
        b[rank] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || A[r][c] == 0) continue;
            Rat f = A[r][c];
            for (std::size_t cc = c; cc < cols; ++cc) A[r][cc] -= f * A[rank][cc];
            b[r] -= f * b[rank];
        }
        piv[c] = rank++;
    }
    for (std::size_t r = rank; r < rows; ++r)
        if (b[r] != 0) throw Error("oracle: inconsistent system");
    for (std::size_t c = 0; c < cols; ++c)
        if (piv[c] == SIZE_MAX) throw Error("oracle: non-unique solution");
    std::vector<Rat> x(cols, Rat(0));
    for (std::size_t c = 0; c < cols; ++c) x[c] = b[piv[c]];
    return x;
}

inline OracleFlow oracle_flow(const AlgebraCtx& ctx, int n) {
    const int rank = ctx.rank;
    std::vector<DiffPoly> ucoords;
    for (int i = 1; i <= rank; ++i)
        ucoords.push_back(DiffPoly::var(rank, i, 0));
    LoopElement umat = cartan_embed(ctx, ucoords).matrix;
    LoopElement B = generator_p(ctx, -1) + umat;

    // Unknown table: contributions R_s to the residual, linear in x_s.
    struct Unknown {
        LoopElement residual;   // d(residual)/d(x_s)
        bool is_flow = false;
        int field = 0;
        Monomial mono;
    };
    std::vector<Unknown> unknowns;

    auto residual_of_A_term = [&](const LoopElement& basis_elt,
                                  const Monomial& m) {
        LoopElement term =
            basis_elt.scale(DiffPoly::from_terms(rank, {{m, Rat(1)}}));
        return -term.dz() + term.bracket(B);
    };

    for (int d = -n + 1; d <= 0; ++d) {
        int w = n + d;
        for (const auto& b : slice_basis(ctx, d))
            for (const auto& m : weight_monomials(rank, w))
                unknowns.push_back({residual_of_A_term(b, m), false, 0, m});
    }
    for (int i = 1; i <= rank; ++i)
        for (const auto& m : weight_monomials(rank, n + 1)) {
            std::vector<DiffPoly> coords(rank, DiffPoly::zero(rank));
            coords[i - 1] = DiffPoly::from_terms(rank, {{m, Rat(1)}});
            unknowns.push_back(
                {cartan_embed(ctx, coords).matrix, true, i, m});
        }

    LoopElement A0 = generator_p(ctx, -n);
    LoopElement R0 = -A0.dz() + A0.bracket(B);

    // Flatten over (entry, lambda power, monomial).
    using RowKey = std::tuple<int, int, int, Monomial>;
    struct RowKeyLess {
        bool operator()(const RowKey& x, const RowKey& y) const {
            if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) < std::get<0>(y);
            if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
            if (std::get<2>(x) != std::get<2>(y)) return std::get<2>(x) < std::get<2>(y);
            return Monomial::compare(std::get<3>(x), std::get<3>(y)) < 0;
        }
    };
    std::map<RowKey, std::size_t, RowKeyLess> rows;
    auto note = [&](const LoopElement& x) {
        for (int a = 1; a <= ctx.size(); ++a)
            for (int b = 1; b <= ctx.size(); ++b)
                for (const auto& [k, p] : x.laurent(a, b))
                    for (const auto& [m, c] : p.terms())
                        rows.emplace(RowKey{a, b, k, m}, 0);
    };
    note(R0);
    for (const auto& uk : unknowns) note(uk.residual);
    std::size_t idx = 0;
    for (auto& [k, v] : rows) v = idx++;

    std::vector<std::vector<Rat>> M(rows.size(),
                                    std::vector<Rat>(unknowns.size(), Rat(0)));
    std::vector<Rat> rhs(rows.size(), Rat(0));
    auto fill = [&](const LoopElement& x, std::size_t col, bool is_rhs) {
        for (int a = 1; a <= ctx.size(); ++a)
            for (int b = 1; b <= ctx.size(); ++b)
                for (const auto& [k, p] : x.laurent(a, b))
                    for (const auto& [m, c] : p.terms()) {
                        std::size_t r = rows.at(RowKey{a, b, k, m});
                        if (is_rhs)
                            rhs[r] = -c; // move R0 to the right hand side
                        else
                            M[r][col] = c;
                    }
    };
    fill(R0, 0, true);
    for (std::size_t s = 0; s < unknowns.size(); ++s)
        fill(unknowns[s].residual, s, false);

    std::vector<Rat> x = oracle_solve(std::move(M), std::move(rhs));

    OracleFlow out;
    out.rhs.assign(rank, DiffPoly::zero(rank));
    for (std::size_t s = 0; s < unknowns.size(); ++s) {
        const auto& uk = unknowns[s];
        if (uk.is_flow && x[s] != 0)
            out.rhs[uk.field - 1] +=
                DiffPoly::from_terms(rank, {{uk.mono, x[s]}});
    }
    return out;
}

} // namespace mkdv::testing

#endif
