// loopalg.hpp -- centerless loop algebra of sl_{r+1} with differential
// polynomial coefficients: principal gradation, Borel splitting, invariant
// pairing and the Kac decomposition g = a (+) Im(ad p_{-1}).
//
// Realization: the cyclic element Lam = sum_a E_{a,a+1} + lambda E_{r+1,1}
// generates the principal Heisenberg directions, p_n = Lam^n for every n not
// divisible by the Coxeter number h = r+1.  The principal degree of
// E_{ab} lambda^k is (b - a) + k h.
#ifndef MKDV_LOOPALG_HPP
#define MKDV_LOOPALG_HPP

#include <map>
#include <vector>

#include "mkdv/diffpoly.hpp"

namespace mkdv {

struct AlgebraCtx {
    int rank = 1; // algebra A_rank^(1); matrices of size rank+1

    explicit AlgebraCtx(int r = 1) : rank(r) {
        if (r < 1) throw InvalidArgument("AlgebraCtx: rank must be >= 1");
    }

    int coxeter() const { return rank + 1; }
    int size() const { return rank + 1; }

    // Exponents of A_r^(1): the positive integers not divisible by h.
    bool is_exponent(int n) const { return n >= 1 && n % coxeter() != 0; }
    std::vector<int> exponents_up_to(int bound) const;

    friend bool operator==(const AlgebraCtx&, const AlgebraCtx&) = default;
};

// Effectively "no truncation": constant elements are exact in every degree.
inline constexpr int kTruncInf = 1 << 28;

// Laurent polynomial in the spectral parameter lambda.
using Laurent = std::map<int, DiffPoly>;

// Square matrix of Laurent polynomials in lambda with DiffPoly entries.
// Identities involving the element hold only modulo principal degree >
// trunc(); content above the truncation is never stored.
class LoopElement {
public:
    LoopElement(AlgebraCtx ctx, int trunc);
    static LoopElement zero(const AlgebraCtx& ctx, int trunc = kTruncInf) {
        return LoopElement(ctx, trunc);
    }

    const AlgebraCtx& ctx() const { return ctx_; }
    int trunc() const { return trunc_; }
    int size() const { return ctx_.size(); }

    // Entries are 1-based; principal degree of (a,b,k) is (b-a)+k*h.
    int degree_of(int a, int b, int k) const {
        return (b - a) + k * ctx_.coxeter();
    }

    const DiffPoly* entry(int a, int b, int k) const;
    void set_entry(int a, int b, int k, DiffPoly p); // drops content above trunc
    void add_entry(int a, int b, int k, const DiffPoly& p);
    const Laurent& laurent(int a, int b) const;

    bool is_zero() const;
    // Min/max principal degree of stored content; for the zero element the
    // min is trunc()+1 (the exactness floor used by product windows).
    int support_min() const;
    int support_max() const;

    LoopElement with_trunc(int t) const; // tightens, drops content above t

    LoopElement operator+(const LoopElement& o) const;
    LoopElement operator-(const LoopElement& o) const;
    LoopElement operator-() const;
    LoopElement scale(const Rat& c) const;
    LoopElement scale(const DiffPoly& c) const;
    LoopElement matmul(const LoopElement& o) const;
    LoopElement bracket(const LoopElement& o) const;

    // Borel splitting: plus = strictly positive principal degrees (n_+),
    // minus = degrees <= 0 (b_-).  plus + minus == *this.
    std::pair<LoopElement, LoopElement> split() const;
    LoopElement plus_part() const { return split().first; }
    LoopElement minus_part() const { return split().second; }

    LoopElement component(int degree) const; // homogeneous slice
    bool is_homogeneous(int degree) const;

    // x |-> sum_j j * x_j  (the grading derivation, i.e. ad of the dual
    // Weyl vector in the centerless algebra).
    LoopElement grading_derivation() const;

    // Entrywise total z-derivative.
    LoopElement dz() const;

    // Entrywise map over DiffPoly values (weight/degree-preserving uses only).
    template <class F>
    LoopElement map_entries(F&& f) const {
        LoopElement out(ctx_, trunc_);
        for (int a = 1; a <= size(); ++a)
            for (int b = 1; b <= size(); ++b)
                for (const auto& [k, p] : laurent(a, b)) {
                    DiffPoly q = f(p);
                    if (!q.is_zero()) out.set_entry(a, b, k, std::move(q));
                }
        return out;
    }

    DiffPoly trace_lambda0() const;

    bool equals_mod_trunc(const LoopElement& o) const; // on the common window
    std::string str() const;

private:
    void require_compatible(const LoopElement& o) const;
    DiffPoly& mutable_entry(int a, int b, int k);

    AlgebraCtx ctx_;
    int trunc_;
    std::vector<Laurent> ent_; // row-major (r+1)^2
};

// p_n = Lam^n, n in I or -I.  Throws when n is divisible by h (the power is
// a scalar matrix, not an element of the loop algebra of sl).
LoopElement generator_p(const AlgebraCtx& ctx, int n);

// e_i as matrix units: E_{i,i+1} for 1 <= i <= r, lambda*E_{r+1,1} for i=0.
LoopElement chevalley_e(const AlgebraCtx& ctx, int i);
// Coroot matrices alpha_i^vee (i=0 gives -theta^vee).
LoopElement coroot(const AlgebraCtx& ctx, int i);

// Invariant pairing: constant-lambda coefficient of trace(x y).
DiffPoly pairing(const LoopElement& x, const LoopElement& y);

// Traceless diagonal matrix with d_a - d_{a+1} = coords[a-1].
struct CartanElement {
    std::vector<DiffPoly> coords;
    LoopElement matrix;
};
CartanElement cartan_embed(const AlgebraCtx& ctx,
                           const std::vector<DiffPoly>& coords);
// Round-trip extraction of the simple-root coordinates of a diagonal,
// lambda-free, traceless element.
std::vector<DiffPoly> cartan_extract(const LoopElement& x);

// Kac decomposition of a homogeneous element of degree j:
// x = a_coeff * p_j + im_part, with im_part in Im(ad p_{-1}) (equivalently
// orthogonal to p_{-j}); a_coeff = (x, p_{-j}) / (p_j, p_{-j}).
struct KacParts {
    DiffPoly a_coeff;
    LoopElement im_part;
};
KacParts kac_project(const LoopElement& x, int degree);
DiffPoly kac_a_coeff(const LoopElement& x, int degree);

// Homogeneous basis of the degree-d slice (traceless combinations when d is
// divisible by h).
std::vector<LoopElement> slice_basis(const AlgebraCtx& ctx, int d);
// Coordinates of the degree-d component of x in slice_basis(ctx, d).
std::vector<DiffPoly> slice_coords(const LoopElement& x, int d);

// Unique homogeneous x of degree j+1 with [p_{-1}, x] = y and zero
// a-coefficient.  Throws Unsolvable when y is not in Im(ad p_{-1}).
LoopElement invert_ad_pminus1(const LoopElement& y, int degree_y);

// sum_k coeffs[k] (ad y)^k (v), truncated; used for group conjugation and
// the dz-term of dressing (the series is finite because y has positive
// degrees only).
LoopElement ad_series(const LoopElement& y, const LoopElement& v,
                      const std::vector<Rat>& coeffs);
std::vector<Rat> exp_series_coeffs(int kmax);      // 1/k!
std::vector<Rat> dz_series_coeffs(int kmax);       // 1/(k+1)!

} // namespace mkdv

#endif
