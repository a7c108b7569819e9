#include "mkdv/mkdv.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "mkdv/checks.hpp"

using namespace mkdv;

struct mkdv_session {
    AlgebraCtx ctx;
    Engine engine;
    std::mutex err_mu;
    std::string last_error;

    explicit mkdv_session(int rank) : ctx(rank), engine(ctx) {}

    void set_error(const std::string& msg) {
        std::lock_guard lk(err_mu);
        last_error = msg;
    }
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

mkdv_status classify(const std::exception& e) {
    if (dynamic_cast<const NotExact*>(&e)) return MKDV_ERR_NOT_EXACT;
    if (dynamic_cast<const Unsolvable*>(&e)) return MKDV_ERR_UNSOLVABLE;
    if (dynamic_cast<const NotInImage*>(&e)) return MKDV_ERR_NOT_IN_IMAGE;
    if (dynamic_cast<const NumericFailure*>(&e)) return MKDV_ERR_NUMERIC;
    if (dynamic_cast<const InvalidArgument*>(&e)) return MKDV_ERR_INVALID_ARG;
    return MKDV_ERR_INTERNAL;
}

template <class Fn>
mkdv_status guarded(mkdv_session* s, Fn&& fn) {
    if (!s) return MKDV_ERR_INVALID_ARG;
    try {
        return fn();
    } catch (const std::exception& e) {
        s->set_error(e.what());
        return classify(e);
    } catch (...) {
        s->set_error("unknown error");
        return MKDV_ERR_INTERNAL;
    }
}

int effective_degree(int n, int degree) { return degree > 0 ? degree : n + 3; }

} // namespace

extern "C" {

const char* mkdv_version(void) { return "0.1.0"; }

const char* mkdv_status_name(mkdv_status s) {
    switch (s) {
        case MKDV_OK: return "ok";
        case MKDV_ERR_INVALID_ARG: return "invalid argument";
        case MKDV_ERR_NOT_EXACT: return "not a total derivative";
        case MKDV_ERR_UNSOLVABLE: return "unsolvable linear system";
        case MKDV_ERR_NOT_IN_IMAGE: return "not in the Miura image";
        case MKDV_ERR_CHECK_FAILED: return "check failed";
        case MKDV_ERR_NUMERIC: return "numeric failure";
        case MKDV_ERR_DRIFT: return "conservation drift above threshold";
        case MKDV_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

mkdv_session* mkdv_session_new(int rank) {
    if (rank < 1) return nullptr;
    try {
        return new mkdv_session(rank);
    } catch (...) {
        return nullptr;
    }
}

void mkdv_session_free(mkdv_session* s) { delete s; }

int mkdv_rank(const mkdv_session* s) { return s ? s->ctx.rank : 0; }

int mkdv_exponent_valid(int rank, int n) {
    if (rank < 1) return 0;
    return AlgebraCtx(rank).is_exponent(n) ? 1 : 0;
}

const char* mkdv_last_error(const mkdv_session* s) {
    return s ? s->last_error.c_str() : "null session";
}

mkdv_status mkdv_flow_json(mkdv_session* s, int n, int degree, char** out) {
    return guarded(s, [&]() -> mkdv_status {
        if (!out) throw InvalidArgument("flow_json: null output");
        auto f = s->engine.flow(n, effective_degree(n, degree));
        *out = dup_string(flow_to_json(s->ctx, *f).dump(2) + "\n");
        return MKDV_OK;
    });
}

mkdv_status mkdv_flow_latex(mkdv_session* s, int n, int degree, char** out) {
    return guarded(s, [&]() -> mkdv_status {
        if (!out) throw InvalidArgument("flow_latex: null output");
        auto f = s->engine.flow(n, effective_degree(n, degree));
        *out = dup_string(flow_to_latex(s->ctx, *f));
        return MKDV_OK;
    });
}

mkdv_status mkdv_density_json(mkdv_session* s, int n, int m, int degree,
                              char** out) {
    return guarded(s, [&]() -> mkdv_status {
        if (!out) throw InvalidArgument("density_json: null output");
        int D = effective_degree(std::max(n, m), degree);
        Density d = (m > 0) ? second_density(s->engine, n, m, D)
                            : hamiltonian_density(s->engine, n, D);
        *out = dup_string(density_to_json(d).dump(2) + "\n");
        return MKDV_OK;
    });
}

mkdv_status mkdv_dressing_json(mkdv_session* s, int degree, char** out) {
    return guarded(s, [&]() -> mkdv_status {
        if (!out) throw InvalidArgument("dressing_json: null output");
        DressingData d = s->engine.compute_dressing(degree > 0 ? degree : 5);
        *out = dup_string(dressing_to_json(s->ctx, d).dump(2) + "\n");
        return MKDV_OK;
    });
}

mkdv_status mkdv_check_json(mkdv_session* s, const char* options_json,
                            char** report) {
    return guarded(s, [&]() -> mkdv_status {
        if (!report) throw InvalidArgument("check_json: null output");
        CheckOptions opt;
        if (options_json && *options_json) {
            Json j = Json::parse(options_json);
            if (j.contains("flows")) opt.flows = j["flows"].get<std::vector<int>>();
            if (j.contains("degree")) opt.degree = j["degree"].get<int>();
            if (j.contains("checks"))
                opt.checks = j["checks"].get<std::vector<std::string>>();
            if (j.contains("perturb_flow"))
                opt.perturb_flow = j["perturb_flow"].get<int>();
        }
        CheckReport rep = run_checks(s->ctx, opt);
        *report = dup_string(check_report_to_json(rep).dump(2) + "\n");
        if (!rep.pass) {
            s->set_error("symbolic checks reported nonzero residuals");
            return MKDV_ERR_CHECK_FAILED;
        }
        return MKDV_OK;
    });
}

mkdv_status mkdv_simulate_json(mkdv_session* s, const char* options_json,
                               char** report, char** trajectory_csv) {
    return guarded(s, [&]() -> mkdv_status {
        if (!report) throw InvalidArgument("simulate_json: null output");
        int flow_n = 3, grid_n = 256;
        double length = 20.0, dt = 1e-4, threshold = 1e-6;
        long steps = 10000, stride = 100;
        int degree = 0;
        std::string profile = "sech:amplitude=1,width=1";
        std::vector<int> densities;
        if (options_json && *options_json) {
            Json j = Json::parse(options_json);
            if (j.contains("flow")) flow_n = j["flow"].get<int>();
            if (j.contains("degree")) degree = j["degree"].get<int>();
            if (j.contains("grid_n")) grid_n = j["grid_n"].get<int>();
            if (j.contains("length")) length = j["length"].get<double>();
            if (j.contains("dt")) dt = j["dt"].get<double>();
            if (j.contains("steps")) steps = j["steps"].get<long>();
            if (j.contains("stride")) stride = j["stride"].get<long>();
            if (j.contains("profile")) profile = j["profile"].get<std::string>();
            if (j.contains("densities"))
                densities = j["densities"].get<std::vector<int>>();
            if (j.contains("drift_threshold"))
                threshold = j["drift_threshold"].get<double>();
        }
        if (densities.empty()) {
            for (int n : default_flows(s->ctx))
                if (n <= flow_n) densities.push_back(n);
        }
        int D = effective_degree(flow_n, degree);
        auto f = s->engine.flow(flow_n, D);
        GridState s0 = make_profile(s->ctx.rank, grid_n, length, profile);

        IntegrateOptions opt;
        opt.dt = dt;
        opt.steps = steps;
        opt.stride = stride;
        std::string warning;
        Trajectory traj;
        long failed_step = -1;
        try {
            traj = integrate(s0, *f, opt, &warning);
        } catch (const NumericFailure& e) {
            failed_step = e.step;
            s->set_error(e.what());
        }

        Json rep;
        rep["algebra"] = algebra_name(s->ctx);
        rep["flow"] = flow_n;
        rep["grid_n"] = grid_n;
        rep["length"] = length;
        rep["dt"] = dt;
        rep["steps"] = steps;
        rep["profile"] = profile;
        if (!warning.empty()) rep["warning"] = warning;
        if (failed_step >= 0) {
            rep["aborted_at_step"] = failed_step;
            *report = dup_string(rep.dump(2) + "\n");
            return MKDV_ERR_NUMERIC;
        }

        std::vector<std::pair<std::string, DiffPoly>> dens;
        for (int n : densities)
            dens.emplace_back("H_" + std::to_string(n),
                              hamiltonian_density(s->engine, n, D).value);
        ConservationReport cons = monitor(traj, dens);
        rep["conservation"] = conservation_to_json(cons);
        rep["drift_threshold"] = threshold;
        bool ok = cons.max_rel_drift <= threshold;
        rep["pass"] = ok;
        *report = dup_string(rep.dump(2) + "\n");
        if (trajectory_csv) *trajectory_csv = dup_string(trajectory_to_csv(traj));
        if (!ok) {
            s->set_error("conservation drift exceeds threshold");
            return MKDV_ERR_DRIFT;
        }
        return MKDV_OK;
    });
}

void mkdv_string_free(char* p) { std::free(p); }

} // extern "C"
