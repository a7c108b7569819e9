#include "mkdv/conserved.hpp"

#include <algorithm>

#include "mkdv/linalg_q.hpp"

namespace mkdv {

Density hamiltonian_density(Engine& eng, int n, int D) {
    auto V = eng.compute_V(n, D);
    DiffPoly h = pairing(generator_p(eng.ctx(), -1), *V);
    if (!h.is_homogeneous(n + 1))
        throw InternalInconsistency("hamiltonian_density: weight is not n + 1");
    return Density{n, 0, std::move(h), n + 1};
}

Density second_density(Engine& eng, int n, int m, int D) {
    if (D < std::max(n, m) + 2)
        throw InvalidArgument("second_density: degree bound too small");
    auto Vn = eng.compute_V(n, D);
    auto Vm = eng.compute_V(m, D);
    DiffPoly h = -pairing(Vn->minus_part().grading_derivation(), *Vm);
    if (!h.is_homogeneous(n + m))
        throw InternalInconsistency("second_density: weight is not n + m");
    return Density{n, m, std::move(h), n + m};
}

std::pair<DiffPoly, DiffPoly> involutivity_check(Engine& eng, int n, int m,
                                                 int D) {
    auto fn = eng.flow(n, D);
    auto fm = eng.flow(m, D);
    DiffPoly Hn = hamiltonian_density(eng, n, D).value;
    DiffPoly Hm = hamiltonian_density(eng, m, D).value;
    DiffPoly Hnm = second_density(eng, n, m, D).value;
    DiffPoly dn_Hm = eng.prolong(*fn, Hm);
    DiffPoly r1 = dn_Hm - eng.prolong(*fm, Hn);
    DiffPoly r2 = dn_Hm - Hnm.total_derivative();
    return {std::move(r1), std::move(r2)};
}

DiffPoly flow_potential(Engine& eng, int m, int D) {
    if (eng.ctx().rank != 1)
        throw InvalidArgument("flow_potential: rank 1 only");
    auto f = eng.flow(m, D);
    return f->rhs[0].antiderivative();
}

DiffPoly sl2_involutivity_residual(Engine& eng, int k, int m, int D) {
    if (eng.ctx().rank != 1)
        throw InvalidArgument("sl2_involutivity_residual: rank 1 only");
    DiffPoly qk = flow_potential(eng, k, D);
    DiffPoly Hm1 = second_density(eng, m, 1, D).value;
    DiffPoly Hkm = second_density(eng, k, m, D).value;
    DiffPoly lhs = DiffPoly::zero(1);
    DiffPoly dq = qk.total_derivative(); // d^{j+1} q_k, j = 0, 1, ...
    int top = Hm1.max_order(1);
    for (int j = 0; j <= top; ++j) {
        DiffPoly pp = Hm1.partial({1, j});
        if (!pp.is_zero()) lhs += dq * pp;
        if (j < top) dq = dq.total_derivative();
    }
    return lhs - Hkm.total_derivative();
}

// Smallest-monomial-safe proportionality: returns c with a = c*b when the
// two polynomials are exact rational multiples, nullopt otherwise.
static std::optional<Rat> proportionality(const DiffPoly& a, const DiffPoly& b) {
    if (b.is_zero()) return a.is_zero() ? std::optional<Rat>(Rat(0)) : std::nullopt;
    const auto& [mono, coeff] = *b.terms().begin();
    Rat c = a.coeff(mono) / coeff;
    return (a - b * c).is_zero() ? std::optional<Rat>(c) : std::nullopt;
}

VariationalReport variational_check(Engine& eng, const std::vector<int>& flows,
                                    int D) {
    if (eng.ctx().rank != 1)
        throw InvalidArgument("variational_check: rank 1 only");
    VariationalReport rep;
    rep.flows = flows;
    bool first = true;
    for (int m : flows) {
        DiffPoly lhs = flow_potential(eng, m, D) * Rat(m);
        DiffPoly rhs = second_density(eng, m, 1, D).value.variational_derivative(1);
        if (first) {
            auto c = proportionality(lhs, rhs);
            rep.constant = c ? *c : Rat(0);
            first = false;
        }
        rep.residuals.push_back(lhs - rhs * rep.constant);
    }
    return rep;
}

DiffPoly pschur(int sign, int k) {
    if (sign != 1 && sign != -1) throw InvalidArgument("pschur: sign must be +-1");
    DiffPoly p = DiffPoly::constant(1, 1);
    DiffPoly u = DiffPoly::var(1, 1, 0);
    for (int j = 0; j < k; ++j)
        p = p.total_derivative() + (sign > 0 ? u * p : -(u * p));
    return p;
}

DiffPoly screening_action(int i, const DiffPoly& p) {
    if (p.rank() != 1) throw InvalidArgument("screening_action: rank 1 only");
    if (i != 0 && i != 1) throw InvalidArgument("screening_action: i in {0,1}");
    const int sign = (i == 0) ? 1 : -1; // e_0 uses P^+, e_1 uses P^-
    DiffPoly acc = DiffPoly::zero(1);
    int top = p.max_order(1);
    for (int k = 0; k <= top; ++k) {
        DiffPoly pp = p.partial({1, k});
        if (!pp.is_zero()) acc -= pschur(sign, k) * pp;
    }
    return acc;
}

DiffPoly u_coordinate(const AlgebraCtx& ctx, int i) {
    if (i < 0 || i > ctx.rank) throw InvalidArgument("u_coordinate: bad index");
    if (i >= 1) return DiffPoly::var(ctx.rank, i, 0);
    DiffPoly s = DiffPoly::zero(ctx.rank);
    for (int j = 1; j <= ctx.rank; ++j) s -= DiffPoly::var(ctx.rank, j, 0);
    return s;
}

std::vector<std::vector<DiffPoly>> left_action_coeffs(const AlgebraCtx& ctx,
                                                      int i, int max_order) {
    LoopElement cor = coroot(ctx, i);
    DiffPoly ui = u_coordinate(ctx, i);
    std::vector<std::vector<DiffPoly>> out(ctx.rank);
    for (int j = 1; j <= ctx.rank; ++j) {
        DiffPoly s = pairing(coroot(ctx, j), cor); // (alpha_j, alpha_i^vee)
        out[j - 1].push_back(s);
        for (int k = 0; k < max_order; ++k) {
            s = s.total_derivative() - ui * s;
            out[j - 1].push_back(s);
        }
    }
    return out;
}

DiffPoly left_action_apply(const AlgebraCtx& ctx, int i, const DiffPoly& p) {
    int top = 0;
    for (int j = 1; j <= ctx.rank; ++j) top = std::max(top, p.max_order(j));
    auto coeffs = left_action_coeffs(ctx, i, top < 0 ? 0 : top);
    DiffPoly acc = DiffPoly::zero(ctx.rank);
    for (int j = 1; j <= ctx.rank; ++j)
        for (int k = 0; k <= p.max_order(j); ++k) {
            DiffPoly pp = p.partial({j, k});
            if (!pp.is_zero()) acc += coeffs[j - 1][k] * pp;
        }
    return acc;
}

DiffPoly cocycle_value(Engine& eng, int n, int i, int D) {
    auto V = eng.compute_V(n, D);
    DiffPoly phi = pairing(chevalley_e(eng.ctx(), i), *V);
    if (!phi.is_homogeneous(n - 1))
        throw InternalInconsistency("cocycle_value: weight is not n - 1");
    return phi;
}

DiffPoly coboundary_residual_exact(Engine& eng, int n, int i, int D) {
    DiffPoly Hn = hamiltonian_density(eng, n, D).value;
    DiffPoly phi = cocycle_value(eng, n, i, D);
    DiffPoly ui = u_coordinate(eng.ctx(), i);
    return left_action_apply(eng.ctx(), i, Hn) - phi.total_derivative() +
           ui * phi;
}

CoboundaryCalibration calibrate_coboundary(Engine& eng, int D) {
    if (eng.ctx().rank != 1)
        throw InvalidArgument("calibrate_coboundary: rank 1 only");
    DiffPoly H1 = hamiltonian_density(eng, 1, D).value;
    CoboundaryCalibration cal{Rat(0), Rat(0)};
    for (int i : {0, 1}) {
        DiffPoly phi = cocycle_value(eng, 1, i, D);
        DiffPoly rhs = phi.total_derivative() - u_coordinate(eng.ctx(), i) * phi;
        auto c = proportionality(rhs, screening_action(i, H1));
        if (!c)
            throw InternalInconsistency(
                "calibrate_coboundary: identity fails at n = 1");
        (i == 0 ? cal.kappa0 : cal.kappa1) = *c;
    }
    return cal;
}

DiffPoly coboundary_residual(Engine& eng, int n, int i, int D,
                             const CoboundaryCalibration& cal) {
    DiffPoly Hn = hamiltonian_density(eng, n, D).value;
    DiffPoly phi = cocycle_value(eng, n, i, D);
    DiffPoly rhs = phi.total_derivative() - u_coordinate(eng.ctx(), i) * phi;
    const Rat& kappa = (i == 0) ? cal.kappa0 : cal.kappa1;
    return screening_action(i, Hn) * kappa - rhs;
}

DiffPoly miura_image_of_v() {
    DiffPoly u = DiffPoly::var(1, 1, 0);
    return u * u * Rat(1, 2) + DiffPoly::var(1, 1, 1);
}

DiffPoly miura(const DiffPoly& p_in_v) {
    if (p_in_v.rank() != 1) throw InvalidArgument("miura: rank 1 only");
    return p_in_v.substitute_fields({miura_image_of_v()});
}

// All monomials in v-jets of the given weight; v^(k) has weight k+2.
static void enumerate_v_monomials(int weight, int max_part, Monomial acc,
                                  std::vector<Monomial>& out) {
    if (weight == 0) {
        out.push_back(acc);
        return;
    }
    for (int part = std::min(weight, max_part); part >= 2; --part)
        enumerate_v_monomials(weight - part, part,
                              acc.times_var({1, part - 2}), out);
}

DiffPoly kdv_rewrite(const DiffPoly& p_in_u) {
    if (p_in_u.rank() != 1) throw InvalidArgument("kdv_rewrite: rank 1 only");
    if (!screening_action(1, p_in_u).is_zero())
        throw NotInImage("kdv_rewrite: polynomial is not screening-invariant");
    if (p_in_u.is_zero()) return DiffPoly::zero(1);

    // Graded ansatz over v-monomials matching the weights present in p.
    std::vector<int> weights;
    for (const auto& [m, c] : p_in_u.terms()) {
        int w = m.weight();
        if (std::find(weights.begin(), weights.end(), w) == weights.end())
            weights.push_back(w);
    }
    std::vector<Monomial> vmonos;
    for (int w : weights) enumerate_v_monomials(w, w, Monomial::one(), vmonos);

    std::vector<DiffPoly> images;
    images.reserve(vmonos.size());
    for (const auto& m : vmonos)
        images.push_back(miura(DiffPoly::from_terms(1, {{m, Rat(1)}})));

    // Row space: all u-monomials appearing in p or any image.
    std::map<Monomial, std::size_t, MonomialGreater> row_of;
    auto note_rows = [&](const DiffPoly& q) {
        for (const auto& [m, c] : q.terms()) row_of.emplace(m, 0);
    };
    note_rows(p_in_u);
    for (const auto& img : images) note_rows(img);
    std::size_t idx = 0;
    for (auto& [m, r] : row_of) r = idx++;

    std::vector<std::vector<Rat>> A(row_of.size(),
                                    std::vector<Rat>(images.size(), Rat(0)));
    std::vector<Rat> b(row_of.size(), Rat(0));
    for (std::size_t c = 0; c < images.size(); ++c)
        for (const auto& [m, q] : images[c].terms()) A[row_of[m]][c] = q;
    for (const auto& [m, q] : p_in_u.terms()) b[row_of[m]] = q;

    auto sol = solve_exact<Rat>(std::move(A), std::move(b), Rat(0),
                                [](const Rat& r) { return r == 0; });
    if (!sol) throw NotInImage("kdv_rewrite: inconsistent graded system");

    DiffPoly::TermMap terms;
    for (std::size_t c = 0; c < vmonos.size(); ++c)
        if ((*sol)[c] != 0) terms.emplace(vmonos[c], (*sol)[c]);
    return DiffPoly::from_terms(1, std::move(terms));
}

} // namespace mkdv
