#include "mkdv/checks.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace mkdv {

std::vector<std::string> known_checks() {
    return {"first_flow",  "zero_curvature", "commutativity", "involutivity",
            "equivalence", "variational",    "coboundary",    "miura"};
}

std::vector<int> default_flows(const AlgebraCtx& ctx) {
    if (ctx.rank == 1) return {1, 3, 5};
    return {ctx.exponents_up_to(2 * ctx.coxeter())[0],
            ctx.exponents_up_to(2 * ctx.coxeter())[1]};
}

namespace {

std::string poly_residual(const DiffPoly& p) { return p.is_zero() ? "0" : p.str(); }
std::string loop_residual(const LoopElement& x) {
    return x.is_zero() ? "0" : x.str();
}

struct Suite {
    Engine& eng;
    const CheckOptions& opt;
    int D;
    std::vector<int> flows;

    std::shared_ptr<const FlowSpec> get_flow(int n) const {
        auto f = eng.flow(n, D);
        if (opt.perturb_flow != n) return f;
        auto copy = std::make_shared<FlowSpec>(*f);
        copy->rhs[0] += DiffPoly::var(eng.ctx().rank, 1, 0);
        return copy;
    }

    LoopElement zc_residual(const FlowSpec& fm, const FlowSpec& fn) const {
        auto d_by = [&](const FlowSpec& f, const LoopElement& x) {
            return x.map_entries(
                [&](const DiffPoly& p) { return eng.prolong(f, p); });
        };
        return d_by(fm, fn.Vminus) - d_by(fn, fm.Vminus) +
               fm.Vminus.bracket(fn.Vminus);
    }

    CheckItem first_flow() const {
        CheckItem it{"first_flow", "n=1", true, {}, {}};
        auto f = get_flow(1);
        for (int i = 1; i <= eng.ctx().rank; ++i) {
            DiffPoly r = f->rhs[i - 1] - DiffPoly::var(eng.ctx().rank, i, 1);
            it.pass = it.pass && r.is_zero();
            it.residuals.emplace_back("rhs[" + std::to_string(i) + "] - u'",
                                      poly_residual(r));
        }
        return it;
    }

    std::vector<CheckItem> zero_curvature() const {
        std::vector<CheckItem> out;
        for (std::size_t a = 0; a < flows.size(); ++a)
            for (std::size_t b = a + 1; b < flows.size(); ++b) {
                int m = flows[a], n = flows[b];
                CheckItem it{"zero_curvature",
                             "m=" + std::to_string(m) + ",n=" + std::to_string(n),
                             true,
                             {},
                             {}};
                LoopElement r = zc_residual(*get_flow(m), *get_flow(n));
                it.pass = r.is_zero();
                it.residuals.emplace_back("curvature", loop_residual(r));
                out.push_back(std::move(it));
            }
        return out;
    }

    std::vector<CheckItem> commutativity() const {
        std::vector<CheckItem> out;
        for (std::size_t a = 0; a < flows.size(); ++a)
            for (std::size_t b = a; b < flows.size(); ++b) {
                int m = flows[a], n = flows[b];
                CheckItem it{"commutativity",
                             "m=" + std::to_string(m) + ",n=" + std::to_string(n),
                             true,
                             {},
                             {}};
                auto fm = get_flow(m);
                auto fn = get_flow(n);
                for (int i = 1; i <= eng.ctx().rank; ++i) {
                    DiffPoly probe = DiffPoly::var(eng.ctx().rank, i, 0);
                    DiffPoly r = eng.prolong(*fm, eng.prolong(*fn, probe)) -
                                 eng.prolong(*fn, eng.prolong(*fm, probe));
                    it.pass = it.pass && r.is_zero();
                    it.residuals.emplace_back("[d_m,d_n] u" + std::to_string(i),
                                              poly_residual(r));
                }
                out.push_back(std::move(it));
            }
        return out;
    }

    std::vector<CheckItem> involutivity() const {
        std::vector<CheckItem> out;
        for (std::size_t a = 0; a < flows.size(); ++a)
            for (std::size_t b = a; b < flows.size(); ++b) {
                int n = flows[a], m = flows[b];
                CheckItem it{"involutivity",
                             "n=" + std::to_string(n) + ",m=" + std::to_string(m),
                             true,
                             {},
                             {}};
                auto fn = get_flow(n);
                auto fm = get_flow(m);
                DiffPoly Hn = hamiltonian_density(eng, n, D).value;
                DiffPoly Hm = hamiltonian_density(eng, m, D).value;
                DiffPoly Hnm = second_density(eng, n, m, D).value;
                DiffPoly dnHm = eng.prolong(*fn, Hm);
                DiffPoly r1 = dnHm - eng.prolong(*fm, Hn);
                DiffPoly r2 = dnHm - Hnm.total_derivative();
                it.pass = r1.is_zero() && r2.is_zero();
                it.residuals.emplace_back("d_n H_m - d_m H_n", poly_residual(r1));
                it.residuals.emplace_back("d_n H_m - dz H_{n,m}",
                                          poly_residual(r2));
                if (eng.ctx().rank == 1 && opt.perturb_flow == 0) {
                    DiffPoly r3 = sl2_involutivity_residual(eng, n, m, D);
                    it.pass = it.pass && r3.is_zero();
                    it.residuals.emplace_back("sl2 coordinate form",
                                              poly_residual(r3));
                }
                out.push_back(std::move(it));
            }
        return out;
    }

    std::vector<CheckItem> equivalence() const {
        std::vector<CheckItem> out;
        for (int n : flows) {
            CheckItem it{"equivalence", "n=" + std::to_string(n), true, {}, {}};
            LoopElement r = eng.equivalence_check(n, D);
            it.pass = r.is_zero();
            it.residuals.emplace_back("M p_{-n} M^{-1} - V^(n)",
                                      loop_residual(r));
            it.note = "window: degree <= " + std::to_string(D - n - 1);
            out.push_back(std::move(it));
        }
        return out;
    }

    CheckItem variational() const {
        CheckItem it{"variational", "", true, {}, {}};
        auto rep = variational_check(eng, flows, D);
        for (std::size_t i = 0; i < rep.flows.size(); ++i) {
            it.pass = it.pass && rep.residuals[i].is_zero();
            it.residuals.emplace_back(
                "m=" + std::to_string(rep.flows[i]),
                poly_residual(rep.residuals[i]));
        }
        it.note = "m q_m = c dH_{m,1}/du with c = " + rat_str(rep.constant);
        return it;
    }

    std::vector<CheckItem> coboundary() const {
        std::vector<CheckItem> out;
        // Exact identity with the genuine left action (any rank).
        for (int n : flows) {
            CheckItem it{"coboundary",
                         "exact,n=" + std::to_string(n), true, {}, {}};
            for (int i = 0; i <= eng.ctx().rank; ++i) {
                DiffPoly r = coboundary_residual_exact(eng, n, i, D);
                it.pass = it.pass && r.is_zero();
                it.residuals.emplace_back("e_" + std::to_string(i),
                                          poly_residual(r));
            }
            out.push_back(std::move(it));
        }
        if (eng.ctx().rank == 1) {
            auto cal = calibrate_coboundary(eng, D);
            for (int n : flows) {
                CheckItem it{"coboundary",
                             "screening,n=" + std::to_string(n), true, {}, {}};
                for (int i : {0, 1}) {
                    DiffPoly r = coboundary_residual(eng, n, i, D, cal);
                    it.pass = it.pass && r.is_zero();
                    it.residuals.emplace_back("e_" + std::to_string(i),
                                              poly_residual(r));
                }
                it.note = "kappa0 = " + rat_str(cal.kappa0) +
                          ", kappa1 = " + rat_str(cal.kappa1);
                out.push_back(std::move(it));
            }
        }
        return out;
    }

    std::vector<CheckItem> miura_check() const {
        std::vector<CheckItem> out;
        {
            CheckItem it{"miura", "screening invariance of v", true, {}, {}};
            DiffPoly r = screening_action(1, miura_image_of_v());
            it.pass = r.is_zero();
            it.residuals.emplace_back("e_1 (u^2/2 + u')", poly_residual(r));
            out.push_back(std::move(it));
        }
        if (std::find(flows.begin(), flows.end(), 3) != flows.end()) {
            CheckItem it{"miura", "KdV form of the n=3 flow", true, {}, {}};
            auto f3 = get_flow(3);
            DiffPoly dv = eng.prolong(*f3, miura_image_of_v());
            try {
                DiffPoly kdv = kdv_rewrite(dv);
                // expect a v''' + b v v'
                Monomial vzzz = Monomial::var({1, 3});
                Monomial vvz = Monomial::var({1, 0}) * Monomial::var({1, 1});
                DiffPoly rest =
                    kdv -
                    DiffPoly::from_terms(1, {{vzzz, kdv.coeff(vzzz)},
                                             {vvz, kdv.coeff(vvz)}});
                it.pass = rest.is_zero() && kdv.coeff(vzzz) != 0 &&
                          kdv.coeff(vvz) != 0;
                it.residuals.emplace_back("off-form remainder",
                                          poly_residual(rest));
                it.note = "d_3 v = " + kdv.str() + "  (v-jets)";
            } catch (const Error& e) {
                it.pass = false;
                it.note = e.what();
            }
            out.push_back(std::move(it));
        }
        return out;
    }
};

} // namespace

CheckReport run_checks(const AlgebraCtx& ctx, const CheckOptions& opt) {
    CheckReport rep;
    rep.algebra = algebra_name(ctx);
    rep.flows = opt.flows.empty() ? default_flows(ctx) : opt.flows;
    for (int n : rep.flows)
        if (!ctx.is_exponent(n))
            throw InvalidArgument("run_checks: " + std::to_string(n) +
                                  " is not an exponent of " + algebra_name(ctx));
    int maxn = *std::max_element(rep.flows.begin(), rep.flows.end());
    rep.degree = opt.degree > 0 ? opt.degree : maxn + 3;
    if (rep.degree < maxn + 2)
        throw InvalidArgument("run_checks: degree bound must be >= max flow + 2");

    std::vector<std::string> enabled =
        opt.checks.empty() ? known_checks() : opt.checks;
    for (const auto& c : enabled) {
        auto all = known_checks();
        if (std::find(all.begin(), all.end(), c) == all.end())
            throw InvalidArgument("run_checks: unknown check '" + c + "'");
    }
    auto on = [&](const std::string& name) {
        return std::find(enabled.begin(), enabled.end(), name) != enabled.end();
    };

    Engine eng(ctx);
    Suite suite{eng, opt, rep.degree, rep.flows};

    bool rank1 = ctx.rank == 1;
    std::vector<std::pair<std::string, std::future<std::vector<CheckItem>>>>
        futures;
    auto launch = [&](const std::string& name,
                      std::function<std::vector<CheckItem>()> fn) {
        futures.emplace_back(name, std::async(std::launch::async, fn));
    };

    if (on("first_flow"))
        launch("first_flow", [&] {
            return std::vector<CheckItem>{suite.first_flow()};
        });
    if (on("zero_curvature"))
        launch("zero_curvature", [&] { return suite.zero_curvature(); });
    if (on("commutativity"))
        launch("commutativity", [&] { return suite.commutativity(); });
    if (on("involutivity"))
        launch("involutivity", [&] { return suite.involutivity(); });
    if (on("equivalence") && opt.perturb_flow == 0)
        launch("equivalence", [&] { return suite.equivalence(); });
    if (on("variational") && rank1 && opt.perturb_flow == 0)
        launch("variational", [&] {
            return std::vector<CheckItem>{suite.variational()};
        });
    if (on("coboundary") && opt.perturb_flow == 0)
        launch("coboundary", [&] { return suite.coboundary(); });
    if (on("miura") && rank1)
        launch("miura", [&] { return suite.miura_check(); });

    for (auto& [name, fut] : futures) {
        try {
            for (auto& item : fut.get()) {
                rep.pass = rep.pass && item.pass;
                rep.items.push_back(std::move(item));
            }
        } catch (const Error& e) {
            CheckItem it{name, "", false, {}, e.what()};
            rep.pass = false;
            rep.items.push_back(std::move(it));
        }
    }

    rep.constants["p_scale"] = "p_n = Lambda^n (cyclic element powers)";
    rep.constants["pairing_normalization"] = ctx.size();
    if (rank1 && opt.perturb_flow == 0) {
        auto var = variational_check(eng, {1}, rep.degree);
        rep.constants["variational_constant"] = rat_str(var.constant);
        auto cal = calibrate_coboundary(eng, rep.degree);
        rep.constants["screening_kappa"] =
            Json{{"e0", rat_str(cal.kappa0)}, {"e1", rat_str(cal.kappa1)}};
        DressingData dd = eng.compute_dressing(rep.degree);
        DiffPoly H1 = hamiltonian_density(eng, 1, rep.degree).value;
        if (dd.h.count(1)) {
            const DiffPoly& h1 = dd.h.at(1);
            // H_1 = c * h_1; both are multiples of u^2.
            if (!h1.is_zero()) {
                Rat c = H1.coeff(h1.terms().begin()->first) /
                        h1.terms().begin()->second;
                rep.constants["H1_over_h1"] = rat_str(c);
            }
        }
    }
    return rep;
}

Json check_report_to_json(const CheckReport& rep) {
    Json items = Json::array();
    for (const auto& it : rep.items) {
        Json residuals = Json::array();
        for (const auto& [label, val] : it.residuals)
            residuals.push_back(Json{{"label", label}, {"value", val}});
        Json j;
        j["name"] = it.name;
        j["params"] = it.params;
        j["pass"] = it.pass;
        j["residuals"] = residuals;
        if (!it.note.empty()) j["note"] = it.note;
        items.push_back(j);
    }
    Json out;
    out["algebra"] = rep.algebra;
    out["degree"] = rep.degree;
    out["flows"] = rep.flows;
    out["pass"] = rep.pass;
    out["constants"] = rep.constants;
    out["checks"] = items;
    return out;
}

std::string check_report_to_text(const CheckReport& rep) {
    std::ostringstream os;
    os << "algebra " << rep.algebra << ", degree bound " << rep.degree
       << ", flows";
    for (int n : rep.flows) os << " " << n;
    os << "\n";
    for (const auto& it : rep.items) {
        os << (it.pass ? "  [ok]   " : "  [FAIL] ") << it.name;
        if (!it.params.empty()) os << " (" << it.params << ")";
        if (!it.pass)
            for (const auto& [label, val] : it.residuals)
                if (val != "0") os << "\n         " << label << " = " << val;
        if (!it.note.empty()) os << "\n         " << it.note;
        os << "\n";
    }
    os << (rep.pass ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
    return os.str();
}

} // namespace mkdv
