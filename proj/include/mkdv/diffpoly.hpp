// diffpoly.hpp -- exact differential polynomials in jet variables u_i^(n)
// with rational coefficients.  Values are immutable after construction and
// safe to share between threads; every operation is a pure function.
#ifndef MKDV_DIFFPOLY_HPP
#define MKDV_DIFFPOLY_HPP

#include <map>
#include <optional>
#include <vector>

#include "mkdv/errors.hpp"
#include "mkdv/rational.hpp"

namespace mkdv {

// u_{field}^{(order)}; field is 1-based, order >= 0.
// Principal weight of the variable is order + 1, so that the total
// derivative d/dz raises the weight of every term by exactly one.
struct JetVar {
    int field = 1;
    int order = 0;

    int weight() const { return order + 1; }

    friend bool operator==(const JetVar&, const JetVar&) = default;
    // Variable rank: field major, order minor.
    friend auto operator<=>(const JetVar& a, const JetVar& b) {
        if (a.field != b.field) return a.field <=> b.field;
        return a.order <=> b.order;
    }
};

// Product of jet variables with positive integer exponents, kept sorted by
// variable rank (ascending).  The empty monomial is the constant 1.
class Monomial {
public:
    struct Factor {
        JetVar var;
        int exp = 1;
        friend bool operator==(const Factor&, const Factor&) = default;
    };

    Monomial() = default;
    static Monomial one() { return {}; }
    static Monomial var(JetVar v, int exp = 1);

    const std::vector<Factor>& factors() const { return f_; }
    bool is_one() const { return f_.empty(); }
    int weight() const;
    int total_degree() const;
    int exponent_of(JetVar v) const;
    int max_order(int field) const; // -1 if the field is absent

    Monomial times_var(JetVar v, int exp = 1) const;
    // Remove `exp` powers of v; throws if v is not present with enough.
    Monomial divide_var(JetVar v, int exp = 1) const;
    Monomial operator*(const Monomial& o) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;

    // Graded lexicographic: weight first, then lex with the highest
    // variable dominant.  Returns <0, 0, >0.
    static int compare(const Monomial& a, const Monomial& b);

private:
    std::vector<Factor> f_;
};

struct MonomialGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return Monomial::compare(a, b) > 0;
    }
};

// Sparse polynomial over Q in the jet variables of a fixed rank.  The term
// map is ordered leading-term-first; no zero coefficients are stored.
class DiffPoly {
public:
    using TermMap = std::map<Monomial, Rat, MonomialGreater>;

    DiffPoly() : rank_(1) {}
    explicit DiffPoly(int rank) : rank_(check_rank(rank)) {}

    static DiffPoly zero(int rank) { return DiffPoly(rank); }
    static DiffPoly constant(int rank, Rat c);
    static DiffPoly var(int rank, int field, int order = 0);
    static DiffPoly from_terms(int rank, TermMap terms);

    int rank() const { return rank_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_term() const;
    std::size_t term_count() const { return terms_.size(); }

    Rat coeff(const Monomial& m) const;

    DiffPoly operator-() const;
    DiffPoly operator+(const DiffPoly& o) const;
    DiffPoly operator-(const DiffPoly& o) const;
    DiffPoly operator*(const DiffPoly& o) const;
    DiffPoly operator*(const Rat& c) const;
    friend DiffPoly operator*(const Rat& c, const DiffPoly& p) { return p * c; }
    DiffPoly& operator+=(const DiffPoly& o) { return *this = *this + o; }
    DiffPoly& operator-=(const DiffPoly& o) { return *this = *this - o; }

    bool operator==(const DiffPoly& o) const {
        return rank_ == o.rank_ && terms_ == o.terms_;
    }

    // Leibniz extension of u_i^(n) -> u_i^(n+1); raises every term weight by 1.
    DiffPoly total_derivative() const;
    DiffPoly total_derivative(int times) const;

    // Formal partial d/du_{field}^{(order)}.
    DiffPoly partial(JetVar v) const;

    // Euler operator in field i: sum_n (-d/dz)^n d/du_i^(n).  Vanishes
    // identically iff the polynomial is a total derivative plus a constant.
    DiffPoly variational_derivative(int field) const;

    // Inverse of total_derivative on its image, normalised to have zero
    // constant term.  Throws NotExact when no antiderivative exists.
    DiffPoly antiderivative() const;

    // Weight bookkeeping.  min/max over terms; nullopt on the zero poly.
    std::optional<int> min_weight() const;
    std::optional<int> max_weight() const;
    bool is_homogeneous(int weight) const;
    int max_order(int field) const; // -1 if field absent everywhere

    // u_{field}^{(n)} |-> d^n(images[field-1]); the images may live over a
    // different rank (used by the Miura substitution).
    DiffPoly substitute_fields(const std::vector<DiffPoly>& images) const;

    // Pointwise evaluation; values[i][n] carries u_{i+1}^{(n)}.
    double eval(const std::vector<std::vector<double>>& values) const;

    std::string str() const; // plain-text rendering, for diagnostics

private:
    static int check_rank(int r) {
        if (r < 1) throw InvalidArgument("DiffPoly: rank must be positive");
        return r;
    }
    void check_var(JetVar v) const;
    void add_term(const Monomial& m, const Rat& c);
    static void require_same_rank(const DiffPoly& a, const DiffPoly& b);

    int rank_;
    TermMap terms_;
};

} // namespace mkdv

#endif
