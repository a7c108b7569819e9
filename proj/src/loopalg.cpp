#include "mkdv/loopalg.hpp"

#include <algorithm>
#include <sstream>

#include "mkdv/linalg_q.hpp"

namespace mkdv {

std::vector<int> AlgebraCtx::exponents_up_to(int bound) const {
    std::vector<int> out;
    for (int n = 1; n <= bound; ++n)
        if (is_exponent(n)) out.push_back(n);
    return out;
}

// -------------------------------------------------------------- LoopElement

LoopElement::LoopElement(AlgebraCtx ctx, int trunc)
    : ctx_(ctx), trunc_(trunc), ent_(ctx.size() * ctx.size()) {}

static const Laurent kEmptyLaurent;

const Laurent& LoopElement::laurent(int a, int b) const {
    return ent_[(a - 1) * size() + (b - 1)];
}

const DiffPoly* LoopElement::entry(int a, int b, int k) const {
    const Laurent& l = laurent(a, b);
    auto it = l.find(k);
    return it == l.end() ? nullptr : &it->second;
}

DiffPoly& LoopElement::mutable_entry(int a, int b, int k) {
    Laurent& l = ent_[(a - 1) * size() + (b - 1)];
    auto it = l.find(k);
    if (it == l.end())
        it = l.emplace(k, DiffPoly::zero(ctx_.rank)).first;
    return it->second;
}

void LoopElement::set_entry(int a, int b, int k, DiffPoly p) {
    if (degree_of(a, b, k) > trunc_ || p.is_zero()) {
        ent_[(a - 1) * size() + (b - 1)].erase(k);
        return;
    }
    ent_[(a - 1) * size() + (b - 1)].insert_or_assign(k, std::move(p));
}

void LoopElement::add_entry(int a, int b, int k, const DiffPoly& p) {
    if (degree_of(a, b, k) > trunc_ || p.is_zero()) return;
    DiffPoly& e = mutable_entry(a, b, k);
    e += p;
    if (e.is_zero()) ent_[(a - 1) * size() + (b - 1)].erase(k);
}

bool LoopElement::is_zero() const {
    for (const auto& l : ent_)
        if (!l.empty()) return false;
    return true;
}

int LoopElement::support_min() const {
    int m = kTruncInf;
    bool any = false;
    for (int a = 1; a <= size(); ++a)
        for (int b = 1; b <= size(); ++b)
            for (const auto& [k, p] : laurent(a, b)) {
                m = std::min(m, degree_of(a, b, k));
                any = true;
            }
    return any ? m : std::min(trunc_, kTruncInf - 1) + 1;
}

int LoopElement::support_max() const {
    int m = -kTruncInf;
    for (int a = 1; a <= size(); ++a)
        for (int b = 1; b <= size(); ++b)
            for (const auto& [k, p] : laurent(a, b))
                m = std::max(m, degree_of(a, b, k));
    return m;
}

LoopElement LoopElement::with_trunc(int t) const {
    LoopElement out(ctx_, t);
    for (int a = 1; a <= size(); ++a)
        for (int b = 1; b <= size(); ++b)
            for (const auto& [k, p] : laurent(a, b))
                out.set_entry(a, b, k, p);
    return out;
}

void LoopElement::require_compatible(const LoopElement& o) const {
    if (!(ctx_ == o.ctx_)) throw RankMismatch("LoopElement: context mismatch");
}

LoopElement LoopElement::operator+(const LoopElement& o) const {
    require_compatible(o);
    LoopElement out = with_trunc(std::min(trunc_, o.trunc_));
    for (int a = 1; a <= size(); ++a)
        for (int b = 1; b <= size(); ++b)
            for (const auto& [k, p] : o.laurent(a, b)) out.add_entry(a, b, k, p);
    return out;
}

LoopElement LoopElement::operator-(const LoopElement& o) const {
    return *this + (-o);
}

LoopElement LoopElement::operator-() const {
    return map_entries([](const DiffPoly& p) { return -p; });
}

LoopElement LoopElement::scale(const Rat& c) const {
    return map_entries([&](const DiffPoly& p) { return p * c; });
}

LoopElement LoopElement::scale(const DiffPoly& c) const {
    return map_entries([&](const DiffPoly& p) { return p * c; });
}

LoopElement LoopElement::matmul(const LoopElement& o) const {
    require_compatible(o);
    // A product is exact at degree d only when every contributing pair of
    // degrees (j, d-j) lies below both truncations.
    int t = std::min({trunc_ + o.support_min(), o.trunc_ + support_min(),
                      kTruncInf});
    LoopElement out(ctx_, t);
    const int n = size();
    for (int a = 1; a <= n; ++a)
        for (int c = 1; c <= n; ++c) {
            const Laurent& l1 = laurent(a, c);
            if (l1.empty()) continue;
            for (int b = 1; b <= n; ++b) {
                const Laurent& l2 = o.laurent(c, b);
                for (const auto& [k1, p1] : l1)
                    for (const auto& [k2, p2] : l2)
                        out.add_entry(a, b, k1 + k2, p1 * p2);
            }
        }
    return out;
}

LoopElement LoopElement::bracket(const LoopElement& o) const {
    return matmul(o) - o.matmul(*this);
}

std::pair<LoopElement, LoopElement> LoopElement::split() const {
    LoopElement plus(ctx_, trunc_), minus(ctx_, trunc_);
    for (int a = 1; a <= size(); ++a)
        for (int b = 1; b <= size(); ++b)
            for (const auto& [k, p] : laurent(a, b)) {
                (degree_of(a, b, k) > 0 ? plus : minus).set_entry(a, b, k, p);
            }
    return {plus, minus};
}

LoopElement LoopElement::component(int degree) const {
    if (degree > trunc_)
        throw InvalidArgument("LoopElement: component beyond truncation");
    LoopElement out(ctx_, trunc_);
    for (int a = 1; a <= size(); ++a)
        for (int b = 1; b <= size(); ++b)
            for (const auto& [k, p] : laurent(a, b))
                if (degree_of(a, b, k) == degree) out.set_entry(a, b, k, p);
    return out;
}

bool LoopElement::is_homogeneous(int degree) const {
    for (int a = 1; a <= size(); ++a)
        for (int b = 1; b <= size(); ++b)
            for (const auto& [k, p] : laurent(a, b))
                if (degree_of(a, b, k) != degree) return false;
    return true;
}

LoopElement LoopElement::grading_derivation() const {
    LoopElement out(ctx_, trunc_);
    for (int a = 1; a <= size(); ++a)
        for (int b = 1; b <= size(); ++b)
            for (const auto& [k, p] : laurent(a, b))
                out.set_entry(a, b, k, p * Rat(degree_of(a, b, k)));
    return out;
}

LoopElement LoopElement::dz() const {
    return map_entries([](const DiffPoly& p) { return p.total_derivative(); });
}

DiffPoly LoopElement::trace_lambda0() const {
    DiffPoly acc = DiffPoly::zero(ctx_.rank);
    for (int a = 1; a <= size(); ++a)
        if (const DiffPoly* p = entry(a, a, 0)) acc += *p;
    return acc;
}

bool LoopElement::equals_mod_trunc(const LoopElement& o) const {
    require_compatible(o);
    return (*this - o).is_zero();
}

std::string LoopElement::str() const {
    std::ostringstream os;
    os << "LoopElement(trunc=" << (trunc_ >= kTruncInf ? -1 : trunc_) << ")";
    for (int a = 1; a <= size(); ++a)
        for (int b = 1; b <= size(); ++b)
            for (const auto& [k, p] : laurent(a, b))
                os << "\n  E[" << a << "," << b << "] lam^" << k << " (deg "
                   << degree_of(a, b, k) << "): " << p.str();
    return os.str();
}

// ------------------------------------------------------------- constructors

LoopElement generator_p(const AlgebraCtx& ctx, int n) {
    if (n == 0 || n % ctx.coxeter() == 0)
        throw InvalidArgument("generator_p: exponent divisible by the Coxeter number");
    const int h = ctx.coxeter();
    LoopElement out(ctx, kTruncInf);
    for (int a = 1; a <= h; ++a) {
        int m = a + n;
        int b = ((m % h) + h) % h;
        if (b == 0) b = h;
        int k = (m - b) / h;
        out.set_entry(a, b, k, DiffPoly::constant(ctx.rank, 1));
    }
    return out;
}

LoopElement chevalley_e(const AlgebraCtx& ctx, int i) {
    if (i < 0 || i > ctx.rank) throw InvalidArgument("chevalley_e: bad index");
    LoopElement out(ctx, kTruncInf);
    if (i == 0)
        out.set_entry(ctx.size(), 1, 1, DiffPoly::constant(ctx.rank, 1));
    else
        out.set_entry(i, i + 1, 0, DiffPoly::constant(ctx.rank, 1));
    return out;
}

LoopElement coroot(const AlgebraCtx& ctx, int i) {
    if (i < 0 || i > ctx.rank) throw InvalidArgument("coroot: bad index");
    LoopElement out(ctx, kTruncInf);
    const Rat one(1);
    if (i == 0) {
        // -theta^vee = E_{r+1,r+1} - E_{11}
        out.set_entry(1, 1, 0, DiffPoly::constant(ctx.rank, -one));
        out.set_entry(ctx.size(), ctx.size(), 0, DiffPoly::constant(ctx.rank, one));
    } else {
        out.set_entry(i, i, 0, DiffPoly::constant(ctx.rank, one));
        out.set_entry(i + 1, i + 1, 0, DiffPoly::constant(ctx.rank, -one));
    }
    return out;
}

DiffPoly pairing(const LoopElement& x, const LoopElement& y) {
    if (!(x.ctx() == y.ctx())) throw RankMismatch("pairing: context mismatch");
    DiffPoly acc = DiffPoly::zero(x.ctx().rank);
    const int n = x.size();
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b)
            for (const auto& [k, p] : x.laurent(a, b))
                if (const DiffPoly* q = y.entry(b, a, -k)) acc += p * (*q);
    return acc;
}

CartanElement cartan_embed(const AlgebraCtx& ctx,
                           const std::vector<DiffPoly>& coords) {
    if (static_cast<int>(coords.size()) != ctx.rank)
        throw InvalidArgument("cartan_embed: rank coordinates required");
    const int n = ctx.size();
    // d_a = s_a - mean(s), where s_a = sum_{b >= a} u_b (s_{r+1} = 0).
    std::vector<DiffPoly> s(n, DiffPoly::zero(ctx.rank));
    for (int a = n - 1; a >= 1; --a) s[a - 1] = s[a] + coords[a - 1];
    DiffPoly mean = DiffPoly::zero(ctx.rank);
    for (const auto& v : s) mean += v;
    mean = mean * Rat(1, n);
    LoopElement m(ctx, kTruncInf);
    for (int a = 1; a <= n; ++a) {
        DiffPoly d = s[a - 1] - mean;
        if (!d.is_zero()) m.set_entry(a, a, 0, d);
    }
    return CartanElement{coords, std::move(m)};
}

std::vector<DiffPoly> cartan_extract(const LoopElement& x) {
    const int n = x.size();
    std::vector<DiffPoly> out;
    out.reserve(n - 1);
    auto diag = [&](int a) {
        const DiffPoly* p = x.entry(a, a, 0);
        return p ? *p : DiffPoly::zero(x.ctx().rank);
    };
    for (int a = 1; a < n; ++a) out.push_back(diag(a) - diag(a + 1));
    return out;
}

// ------------------------------------------------------------ Kac splitting

DiffPoly kac_a_coeff(const LoopElement& x, int degree) {
    const AlgebraCtx& ctx = x.ctx();
    if (degree == 0 || degree % ctx.coxeter() == 0)
        return DiffPoly::zero(ctx.rank); // a has no component in these degrees
    LoopElement pm = generator_p(ctx, -degree);
    // (p_j, p_{-j}) = r + 1 in this realization.
    return pairing(x, pm) * Rat(1, ctx.size());
}

KacParts kac_project(const LoopElement& x, int degree) {
    DiffPoly a = kac_a_coeff(x, degree);
    LoopElement im = x;
    if (!a.is_zero()) im = x - generator_p(x.ctx(), degree).scale(a);
    return {std::move(a), std::move(im)};
}

std::vector<LoopElement> slice_basis(const AlgebraCtx& ctx, int d) {
    const int h = ctx.coxeter();
    std::vector<LoopElement> out;
    if (d % h != 0) {
        for (int a = 1; a <= h; ++a) {
            int m = a + d;
            int b = ((m % h) + h) % h;
            if (b == 0) b = h;
            int k = (m - b) / h;
            LoopElement e(ctx, kTruncInf);
            e.set_entry(a, b, k, DiffPoly::constant(ctx.rank, 1));
            out.push_back(std::move(e));
        }
    } else {
        // Traceless diagonal combinations at lambda^{d/h}.
        int k = d / h;
        for (int a = 1; a <= ctx.rank; ++a) {
            LoopElement e(ctx, kTruncInf);
            e.set_entry(a, a, k, DiffPoly::constant(ctx.rank, 1));
            e.set_entry(a + 1, a + 1, k, DiffPoly::constant(ctx.rank, -1));
            out.push_back(std::move(e));
        }
    }
    return out;
}

std::vector<DiffPoly> slice_coords(const LoopElement& x, int d) {
    const AlgebraCtx& ctx = x.ctx();
    const int h = ctx.coxeter();
    const int rank = ctx.rank;
    LoopElement c = x.component(d);
    std::vector<DiffPoly> out;
    if (d % h != 0) {
        for (int a = 1; a <= h; ++a) {
            int m = a + d;
            int b = ((m % h) + h) % h;
            if (b == 0) b = h;
            int k = (m - b) / h;
            const DiffPoly* p = c.entry(a, b, k);
            out.push_back(p ? *p : DiffPoly::zero(rank));
        }
    } else {
        int k = d / h;
        // x = sum c_a (E_aa - E_{a+1,a+1}) lam^k  =>  c_a = sum_{b<=a} d_b.
        std::vector<DiffPoly> diag;
        DiffPoly total = DiffPoly::zero(rank);
        for (int a = 1; a <= h; ++a) {
            const DiffPoly* p = c.entry(a, a, k);
            diag.push_back(p ? *p : DiffPoly::zero(rank));
            total += diag.back();
        }
        if (!total.is_zero())
            throw InternalInconsistency("slice_coords: trace not zero");
        DiffPoly run = DiffPoly::zero(rank);
        for (int a = 1; a <= rank; ++a) {
            run += diag[a - 1];
            out.push_back(run);
        }
    }
    return out;
}

LoopElement invert_ad_pminus1(const LoopElement& y, int degree_y) {
    const AlgebraCtx& ctx = y.ctx();
    const int d1 = degree_y + 1;
    LoopElement pm1 = generator_p(ctx, -1);
    std::vector<LoopElement> basis = slice_basis(ctx, d1);
    const std::size_t cols = basis.size();

    // Rational system: columns are slice_{d1} basis elements mapped through
    // ad p_{-1} and written in slice_{degree_y} coordinates; one extra row
    // fixes the a-coefficient gauge when the slice meets a.
    std::vector<std::vector<Rat>> cb;
    for (const auto& b : basis) {
        LoopElement img = pm1.bracket(b);
        std::vector<DiffPoly> coords = slice_coords(img, degree_y);
        std::vector<Rat> col;
        for (auto& p : coords) {
            if (!p.is_constant())
                throw InternalInconsistency("invert_ad_pminus1: non-constant map");
            col.push_back(p.constant_term());
        }
        cb.push_back(std::move(col));
    }
    const std::size_t coord_rows = cb.empty() ? 0 : cb[0].size();
    bool gauge = (d1 != 0) && (d1 % ctx.coxeter() != 0);
    std::size_t rows = coord_rows + (gauge ? 1 : 0);
    std::vector<std::vector<Rat>> A(rows, std::vector<Rat>(cols, Rat(0)));
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < coord_rows; ++r) A[r][c] = cb[c][r];
    std::vector<DiffPoly> rhs = slice_coords(y, degree_y);
    if (gauge) {
        LoopElement pneg = generator_p(ctx, -d1);
        for (std::size_t c = 0; c < cols; ++c) {
            DiffPoly pr = pairing(basis[c], pneg);
            A[coord_rows][c] = pr.constant_term();
        }
        rhs.push_back(DiffPoly::zero(ctx.rank));
    }

    auto sol = solve_exact<DiffPoly>(std::move(A), std::move(rhs),
                                     DiffPoly::zero(ctx.rank),
                                     [](const DiffPoly& p) { return p.is_zero(); });
    if (!sol)
        throw Unsolvable("invert_ad_pminus1: right hand side not in Im(ad p_{-1})");
    LoopElement out = LoopElement::zero(ctx, y.trunc());
    for (std::size_t c = 0; c < cols; ++c)
        if (!(*sol)[c].is_zero()) out = out + basis[c].scale((*sol)[c]);
    return out;
}

// ------------------------------------------------------------------- series

LoopElement ad_series(const LoopElement& y, const LoopElement& v,
                      const std::vector<Rat>& coeffs) {
    LoopElement acc = LoopElement::zero(v.ctx(), v.trunc());
    LoopElement term = v;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (k > 0) {
            term = y.bracket(term);
            if (term.is_zero() && term.trunc() >= acc.trunc()) break;
        }
        if (coeffs[k] != 0) acc = acc + term.scale(coeffs[k]);
    }
    return acc;
}

std::vector<Rat> exp_series_coeffs(int kmax) {
    std::vector<Rat> c{Rat(1)};
    for (int k = 1; k <= kmax; ++k) c.push_back(c.back() / k);
    return c;
}

std::vector<Rat> dz_series_coeffs(int kmax) {
    // 1/(k+1)! for k = 0..kmax
    std::vector<Rat> out{Rat(1)};
    for (int k = 1; k <= kmax; ++k) out.push_back(out.back() / (k + 1));
    return out;
}

} // namespace mkdv
