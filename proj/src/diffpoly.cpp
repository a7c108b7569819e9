#include "mkdv/diffpoly.hpp"

#include <algorithm>
#include <sstream>

namespace mkdv {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::var(JetVar v, int exp) {
    Monomial m;
    if (exp < 0) throw InvalidArgument("Monomial: negative exponent");
    if (exp > 0) m.f_.push_back({v, exp});
    return m;
}

int Monomial::weight() const {
    int w = 0;
    for (const auto& f : f_) w += f.exp * f.var.weight();
    return w;
}

int Monomial::total_degree() const {
    int d = 0;
    for (const auto& f : f_) d += f.exp;
    return d;
}

int Monomial::exponent_of(JetVar v) const {
    for (const auto& f : f_)
        if (f.var == v) return f.exp;
    return 0;
}

int Monomial::max_order(int field) const {
    int best = -1;
    for (const auto& f : f_)
        if (f.var.field == field) best = std::max(best, f.var.order);
    return best;
}

Monomial Monomial::times_var(JetVar v, int exp) const {
    if (exp == 0) return *this;
    Monomial out;
    out.f_.reserve(f_.size() + 1);
    bool placed = false;
    for (const auto& f : f_) {
        if (!placed && v < f.var) {
            out.f_.push_back({v, exp});
            placed = true;
        }
        if (f.var == v) {
            out.f_.push_back({v, f.exp + exp});
            placed = true;
        } else {
            out.f_.push_back(f);
        }
    }
    if (!placed) out.f_.push_back({v, exp});
    return out;
}

Monomial Monomial::divide_var(JetVar v, int exp) const {
    Monomial out;
    bool found = false;
    for (const auto& f : f_) {
        if (f.var == v) {
            found = true;
            if (f.exp < exp) throw InvalidArgument("Monomial: division underflow");
            if (f.exp > exp) out.f_.push_back({v, f.exp - exp});
        } else {
            out.f_.push_back(f);
        }
    }
    if (!found && exp > 0) throw InvalidArgument("Monomial: variable absent");
    return out;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial out;
    out.f_.reserve(f_.size() + o.f_.size());
    auto a = f_.begin(), b = o.f_.begin();
    while (a != f_.end() && b != o.f_.end()) {
        if (a->var == b->var) {
            out.f_.push_back({a->var, a->exp + b->exp});
            ++a;
            ++b;
        } else if (a->var < b->var) {
            out.f_.push_back(*a++);
        } else {
            out.f_.push_back(*b++);
        }
    }
    out.f_.insert(out.f_.end(), a, f_.end());
    out.f_.insert(out.f_.end(), b, o.f_.end());
    return out;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
    int wa = a.weight(), wb = b.weight();
    if (wa != wb) return wa < wb ? -1 : 1;
    // Lex on exponent vectors, highest variable first.
    auto ia = a.f_.rbegin(), ib = b.f_.rbegin();
    while (ia != a.f_.rend() && ib != b.f_.rend()) {
        if (!(ia->var == ib->var)) return ia->var < ib->var ? -1 : 1;
        if (ia->exp != ib->exp) return ia->exp < ib->exp ? -1 : 1;
        ++ia;
        ++ib;
    }
    if (ia != a.f_.rend()) return 1;
    if (ib != b.f_.rend()) return -1;
    return 0;
}

// ---------------------------------------------------------------- DiffPoly

void DiffPoly::check_var(JetVar v) const {
    if (v.field < 1 || v.field > rank_)
        throw InvalidArgument("DiffPoly: field index out of range");
    if (v.order < 0) throw InvalidArgument("DiffPoly: negative order");
}

void DiffPoly::require_same_rank(const DiffPoly& a, const DiffPoly& b) {
    if (a.rank_ != b.rank_) throw RankMismatch("DiffPoly: rank mismatch");
}

DiffPoly DiffPoly::constant(int rank, Rat c) {
    DiffPoly p(rank);
    c.canonicalize();
    if (c != 0) p.terms_.emplace(Monomial::one(), std::move(c));
    return p;
}

DiffPoly DiffPoly::var(int rank, int field, int order) {
    DiffPoly p(rank);
    JetVar v{field, order};
    p.check_var(v);
    p.terms_.emplace(Monomial::var(v), Rat(1));
    return p;
}

DiffPoly DiffPoly::from_terms(int rank, TermMap terms) {
    DiffPoly p(rank);
    for (auto it = terms.begin(); it != terms.end();) {
        for (const auto& f : it->first.factors()) p.check_var(f.var);
        if (it->second == 0)
            it = terms.erase(it);
        else
            ++it;
    }
    p.terms_ = std::move(terms);
    return p;
}

bool DiffPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rat DiffPoly::constant_term() const {
    auto it = terms_.find(Monomial::one());
    return it == terms_.end() ? Rat(0) : it->second;
}

Rat DiffPoly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

void DiffPoly::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly out(rank_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

DiffPoly DiffPoly::operator+(const DiffPoly& o) const {
    require_same_rank(*this, o);
    DiffPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

DiffPoly DiffPoly::operator-(const DiffPoly& o) const {
    require_same_rank(*this, o);
    DiffPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
    return out;
}

DiffPoly DiffPoly::operator*(const DiffPoly& o) const {
    require_same_rank(*this, o);
    DiffPoly out(rank_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) out.add_term(ma * mb, ca * cb);
    return out;
}

DiffPoly DiffPoly::operator*(const Rat& c) const {
    DiffPoly out(rank_);
    if (c == 0) return out;
    for (const auto& [m, q] : terms_) out.terms_.emplace(m, q * c);
    return out;
}

DiffPoly DiffPoly::total_derivative() const {
    DiffPoly out(rank_);
    for (const auto& [m, c] : terms_) {
        for (const auto& f : m.factors()) {
            JetVar up{f.var.field, f.var.order + 1};
            Monomial bumped = m.divide_var(f.var).times_var(up);
            out.add_term(bumped, c * f.exp);
        }
    }
    return out;
}

DiffPoly DiffPoly::total_derivative(int times) const {
    DiffPoly out = *this;
    for (int i = 0; i < times; ++i) out = out.total_derivative();
    return out;
}

DiffPoly DiffPoly::partial(JetVar v) const {
    check_var(v);
    DiffPoly out(rank_);
    for (const auto& [m, c] : terms_) {
        int e = m.exponent_of(v);
        if (e > 0) out.add_term(m.divide_var(v), c * e);
    }
    return out;
}

DiffPoly DiffPoly::variational_derivative(int field) const {
    if (field < 1 || field > rank_)
        throw InvalidArgument("variational_derivative: bad field");
    DiffPoly acc(rank_);
    int top = max_order(field);
    for (int n = 0; n <= top; ++n) {
        DiffPoly term = partial({field, n}).total_derivative(n);
        if (n % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

// Reverse integration by parts.  The leading term (graded lex) of any exact
// polynomial has its top variable differentiated and appearing linearly;
// strip it, subtract the total derivative of the candidate and repeat.
DiffPoly DiffPoly::antiderivative() const {
    if (constant_term() != 0)
        throw NotExact("antiderivative: nonzero constant term");
    DiffPoly rem = *this;
    DiffPoly out(rank_);
    while (!rem.is_zero()) {
        const auto& [m, c] = *rem.terms_.begin();
        JetVar top = m.factors().back().var;
        if (top.order == 0)
            throw NotExact("antiderivative: input is not a total derivative");
        if (m.exponent_of(top) != 1)
            throw NotExact("antiderivative: input is not a total derivative");
        JetVar down{top.field, top.order - 1};
        Monomial rest = m.divide_var(top);
        Rat scale = c / (1 + rest.exponent_of(down));
        DiffPoly h = DiffPoly::from_terms(rank_, {{rest.times_var(down), scale}});
        out += h;
        rem -= h.total_derivative();
    }
    return out;
}

std::optional<int> DiffPoly::min_weight() const {
    std::optional<int> w;
    for (const auto& [m, c] : terms_) {
        int mw = m.weight();
        if (!w || mw < *w) w = mw;
    }
    return w;
}

std::optional<int> DiffPoly::max_weight() const {
    std::optional<int> w;
    for (const auto& [m, c] : terms_) {
        int mw = m.weight();
        if (!w || mw > *w) w = mw;
    }
    return w;
}

bool DiffPoly::is_homogeneous(int weight) const {
    for (const auto& [m, c] : terms_)
        if (m.weight() != weight) return false;
    return true;
}

int DiffPoly::max_order(int field) const {
    int best = -1;
    for (const auto& [m, c] : terms_) best = std::max(best, m.max_order(field));
    return best;
}

DiffPoly DiffPoly::substitute_fields(const std::vector<DiffPoly>& images) const {
    if (static_cast<int>(images.size()) != rank_)
        throw InvalidArgument("substitute_fields: one image per field required");
    int out_rank = images.empty() ? 1 : images.front().rank();
    // Derivative chains of the images, extended on demand.
    std::vector<std::vector<DiffPoly>> chain(rank_);
    for (int i = 0; i < rank_; ++i) chain[i].push_back(images[i]);
    auto jet_image = [&](JetVar v) -> const DiffPoly& {
        auto& c = chain[v.field - 1];
        while (static_cast<int>(c.size()) <= v.order)
            c.push_back(c.back().total_derivative());
        return c[v.order];
    };
    DiffPoly out(out_rank);
    for (const auto& [m, c] : terms_) {
        DiffPoly term = DiffPoly::constant(out_rank, c);
        for (const auto& f : m.factors()) {
            const DiffPoly& img = jet_image(f.var);
            for (int e = 0; e < f.exp; ++e) term = term * img;
        }
        out += term;
    }
    return out;
}

double DiffPoly::eval(const std::vector<std::vector<double>>& values) const {
    double acc = 0;
    for (const auto& [m, c] : terms_) {
        double t = rat_double(c);
        for (const auto& f : m.factors()) {
            double v = values.at(f.var.field - 1).at(f.var.order);
            for (int e = 0; e < f.exp; ++e) t *= v;
        }
        acc += t;
    }
    return acc;
}

std::string DiffPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat a = c;
        if (!first) {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool coeff_one = (a == 1) && !m.is_one();
        if (!coeff_one) os << rat_str(a);
        for (const auto& f : m.factors()) {
            os << " u" << f.var.field;
            if (f.var.order > 0) os << "^(" << f.var.order << ")";
            if (f.exp > 1) os << "**" << f.exp;
        }
    }
    return os.str();
}

} // namespace mkdv
