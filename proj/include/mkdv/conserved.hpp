// conserved.hpp -- Hamiltonian densities H_n and H_{n,m}, involutivity and
// coboundary identities, one-cocycle values, screening vector fields, and
// the rank-1 Miura transformation to the KdV variable.
#ifndef MKDV_CONSERVED_HPP
#define MKDV_CONSERVED_HPP

#include <optional>

#include "mkdv/hierarchy.hpp"

namespace mkdv {

struct Density {
    int n = 0;
    int m = 0;          // 0 for H_n; second index for H_{n,m}
    DiffPoly value;
    int weight = 0;     // n+1 for H_n, n+m for H_{n,m}; asserted per term
};

// H_n = (p_{-1}, V^(n)); homogeneous of weight n+1.
Density hamiltonian_density(Engine& eng, int n, int D);

// H_{n,m} = -([rho^vee, (V^(n))_-], V^(m)); homogeneous of weight n+m.
Density second_density(Engine& eng, int n, int m, int D);

// residual1 = d_n H_m - d_m H_n, residual2 = d_n H_m - dz H_{n,m};
// both identically zero.
std::pair<DiffPoly, DiffPoly> involutivity_check(Engine& eng, int n, int m,
                                                 int D);

// Rank-1 coordinate form of involutivity:
//   sum_n d^{n+1}(q_k) dH_{m,1}/du^(n) - dz H_{k,m}.
DiffPoly sl2_involutivity_residual(Engine& eng, int k, int m, int D);

// q_m with d_m u = dz q_m (the flow right side is always a total
// z-derivative); rank 1 only.
DiffPoly flow_potential(Engine& eng, int m, int D);

// Proportionality data for m q_m = c * delta H_{m,1} / delta u: the single
// constant c shared by all flows, plus per-flow residuals after scaling.
struct VariationalReport {
    Rat constant;                      // measured on the first flow
    std::vector<int> flows;
    std::vector<DiffPoly> residuals;   // m q_m - c * dH_{m,1}/du
};
VariationalReport variational_check(Engine& eng, const std::vector<int>& flows,
                                    int D);

// P^+/P^- towers of the rank-1 screening fields:
// P^{s}_0 = 1, P^{s}_{k+1} = dz P^{s}_k + s u P^{s}_k.
DiffPoly pschur(int sign, int k);

// Screening vector fields on the rank-1 jet ring:
// e_0 = -sum P^+_k d/du^(k), e_1 = -sum P^-_k d/du^(k).
DiffPoly screening_action(int i, const DiffPoly& p);

// Coefficients of the genuine left action of the matrix generator e_i on
// the jet ring (any rank): the coefficient of d/du_j^(k) is
// (dz - u_i)^k (alpha_j, alpha_i^vee), with u_0 = -(u_1 + ... + u_r).
// They generalise the P-towers; at rank 1 they are -2 P^- (i=1) resp.
// -2 P^+ (i=0) in this matrix normalisation.
std::vector<std::vector<DiffPoly>> left_action_coeffs(const AlgebraCtx& ctx,
                                                      int i, int max_order);
DiffPoly left_action_apply(const AlgebraCtx& ctx, int i, const DiffPoly& p);

// phi_n(e_i) = (e_i, V^(n)); homogeneous of weight n-1.
DiffPoly cocycle_value(Engine& eng, int n, int i, int D);

// Exact coboundary identity with the genuine left action (no constants):
//   e_i . H_n - dz phi_n(e_i) + u_i phi_n(e_i);  identically zero.
DiffPoly coboundary_residual_exact(Engine& eng, int n, int i, int D);

// Rank-1 calibrated form using the screening fields above:
//   kappa_i * screening(i, H_n) - (dz phi_n(e_i) - u_i phi_n(e_i)).
// kappa_i is measured once (n = 1) and reused; the report records it.
struct CoboundaryCalibration {
    Rat kappa0, kappa1;
};
CoboundaryCalibration calibrate_coboundary(Engine& eng, int D);
DiffPoly coboundary_residual(Engine& eng, int n, int i, int D,
                             const CoboundaryCalibration& cal);

// u_i as a differential polynomial; i = 0 gives -(u_1 + ... + u_r).
DiffPoly u_coordinate(const AlgebraCtx& ctx, int i);

// Rank-1 Miura substitution v^(k) |-> d^k(u^2/2 + u').
DiffPoly miura(const DiffPoly& p_in_v);
DiffPoly miura_image_of_v();

// Inverse on the Miura image: returns q over v-jets with miura(q) == p.
// Pre: p is invariant under the screening e_1; throws NotInImage otherwise
// or when the graded linear system is inconsistent.
DiffPoly kdv_rewrite(const DiffPoly& p_in_u);

} // namespace mkdv

#endif
