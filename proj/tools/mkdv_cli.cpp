// mkdv-cli -- generate flows and densities, run the symbolic check suite,
// run numerical verification, export artifacts.  All engine work goes
// through the C API (mkdv/mkdv.h).
//
// Exit codes: 0 success, 1 check/drift failure, 2 usage or config error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "mkdv/mkdv.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct SessionDeleter {
    void operator()(mkdv_session* s) const { mkdv_session_free(s); }
};
using Session = std::unique_ptr<mkdv_session, SessionDeleter>;

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { mkdv_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

int fail_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

Session open_session(int rank) {
    Session s(mkdv_session_new(rank));
    if (!s) throw CLI::ValidationError("--rank", "invalid rank");
    return s;
}

int require_exponents(mkdv_session* s, int rank, const std::vector<int>& flows) {
    (void)s;
    for (int n : flows)
        if (!mkdv_exponent_valid(rank, n))
            return fail_usage(std::to_string(n) + " is not an exponent of A_" +
                              std::to_string(rank) + "^1");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mKdV hierarchy generator and verifier"};
    app.set_config("--config", "", "flat key=value config file (flags win)");
    app.require_subcommand(1);

    int rank = 1;
    std::vector<int> flows;
    int degree = 0;
    std::string out_dir = ".";
    std::string format = "json";
    app.add_option("--rank", rank, "algebra rank r (A_r^1)")->capture_default_str();
    app.add_option("--flows", flows, "comma separated flow exponents")
        ->delimiter(',');
    app.add_option("--degree", degree, "truncation degree bound (0 = auto)");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--format", format, "json | latex | csv")
        ->check(CLI::IsMember({"json", "latex", "csv"}))
        ->capture_default_str();

    auto* gen = app.add_subcommand("generate", "write flow files");
    gen->fallthrough();

    auto* chk = app.add_subcommand("check", "run the symbolic check suite");
    chk->fallthrough();
    std::string checks_csv;
    int perturb = 0;
    chk->add_option("--checks", checks_csv,
                    "subset: first_flow,zero_curvature,commutativity,"
                    "involutivity,equivalence,variational,coboundary,miura");
    chk->add_option("--perturb-flow", perturb,
                    "test hook: corrupt the given flow before checking");

    auto* sim = app.add_subcommand("simulate", "integrate a flow numerically");
    sim->fallthrough();
    int sim_flow = 3, grid_n = 256;
    double length = 20.0, dt = 1e-4, drift = 1e-6;
    long steps = 10000, stride = 100;
    std::string profile = "sech:amplitude=1,width=1";
    bool no_traj = false;
    sim->add_option("--flow", sim_flow, "flow exponent")->capture_default_str();
    sim->add_option("--grid-n", grid_n, "grid points (power of two)")
        ->capture_default_str();
    sim->add_option("--length", length, "domain length")->capture_default_str();
    sim->add_option("--dt", dt, "time step")->capture_default_str();
    sim->add_option("--steps", steps, "number of steps")->capture_default_str();
    sim->add_option("--stride", stride, "sampling stride")->capture_default_str();
    sim->add_option("--profile", profile, "initial profile spec")
        ->capture_default_str();
    sim->add_option("--drift-threshold", drift, "acceptance drift bound")
        ->capture_default_str();
    sim->add_flag("--no-trajectory", no_traj, "skip the CSV trajectory");

    auto* exp = app.add_subcommand("export", "write densities and dressing data");
    exp->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        Session session = open_session(rank);
        if (int rc = require_exponents(session.get(), rank, flows)) return rc;
        if (flows.empty()) {
            flows = (rank == 1) ? std::vector<int>{1, 3, 5}
                                : std::vector<int>{};
            if (flows.empty())
                for (int n = 1; n <= 2 * (rank + 1) && flows.size() < 2; ++n)
                    if (mkdv_exponent_valid(rank, n)) flows.push_back(n);
        }
        int maxflow = *std::max_element(flows.begin(), flows.end());
        int D = degree > 0 ? degree : maxflow + 3;
        if (D < maxflow + 2)
            return fail_usage("degree bound must be at least max(flows) + 2 = " +
                              std::to_string(maxflow + 2));
        fs::path out(out_dir);

        if (gen->parsed()) {
            for (int n : flows) {
                OwnedString text;
                mkdv_status st =
                    (format == "latex")
                        ? mkdv_flow_latex(session.get(), n, D, &text.p)
                        : mkdv_flow_json(session.get(), n, D, &text.p);
                if (st != MKDV_OK)
                    return fail_usage(std::string(mkdv_last_error(session.get())));
                std::string ext = (format == "latex") ? ".tex" : ".json";
                fs::path file = out / ("flow_r" + std::to_string(rank) + "_n" +
                                       std::to_string(n) + ext);
                write_file(file, text.str());
                std::cout << "wrote " << file.string() << "\n";
            }
            std::cout << "effective assertion window: degree <= " << D
                      << " (flows need max+2 = " << maxflow + 2 << ")\n";
            return 0;
        }

        if (chk->parsed()) {
            Json opts;
            opts["flows"] = flows;
            opts["degree"] = D;
            if (!checks_csv.empty()) {
                std::vector<std::string> cs;
                std::stringstream ss(checks_csv);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) cs.push_back(item);
                opts["checks"] = cs;
            }
            if (perturb != 0) opts["perturb_flow"] = perturb;
            OwnedString report;
            mkdv_status st = mkdv_check_json(session.get(),
                                             opts.dump().c_str(), &report.p);
            if (st != MKDV_OK && st != MKDV_ERR_CHECK_FAILED)
                return fail_usage(std::string(mkdv_last_error(session.get())));
            fs::path file = out / ("check_report_r" + std::to_string(rank) + ".json");
            write_file(file, report.str());
            // Human summary on stdout.
            Json rep = Json::parse(report.str());
            for (const auto& item : rep["checks"]) {
                std::cout << (item["pass"].get<bool>() ? "  [ok]   " : "  [FAIL] ")
                          << item["name"].get<std::string>();
                std::string params = item["params"].get<std::string>();
                if (!params.empty()) std::cout << " (" << params << ")";
                std::cout << "\n";
                if (!item["pass"].get<bool>())
                    for (const auto& r : item["residuals"])
                        if (r["value"].get<std::string>() != "0")
                            std::cout << "         " << r["label"].get<std::string>()
                                      << " = " << r["value"].get<std::string>()
                                      << "\n";
            }
            std::cout << "report: " << file.string() << "\n";
            if (st == MKDV_ERR_CHECK_FAILED) {
                std::cout << "CHECK FAILURES PRESENT\n";
                return 1;
            }
            std::cout << "all checks passed\n";
            return 0;
        }

        if (sim->parsed()) {
            Json opts;
            opts["flow"] = sim_flow;
            opts["degree"] = D > sim_flow + 2 ? D : sim_flow + 3;
            opts["grid_n"] = grid_n;
            opts["length"] = length;
            opts["dt"] = dt;
            opts["steps"] = steps;
            opts["stride"] = stride;
            opts["profile"] = profile;
            opts["drift_threshold"] = drift;
            Json dens = Json::array();
            for (int n : flows)
                if (n <= sim_flow) dens.push_back(n);
            opts["densities"] = dens;
            OwnedString report, traj;
            mkdv_status st = mkdv_simulate_json(session.get(), opts.dump().c_str(),
                                                &report.p,
                                                no_traj ? nullptr : &traj.p);
            if (report.p) {
                fs::path file = out / ("conservation_r" + std::to_string(rank) +
                                       "_n" + std::to_string(sim_flow) + ".json");
                write_file(file, report.str());
                std::cout << report.str();
                std::cout << "report: " << file.string() << "\n";
            }
            if (traj.p) {
                fs::path file = out / ("trajectory_r" + std::to_string(rank) +
                                       "_n" + std::to_string(sim_flow) + ".csv");
                write_file(file, traj.str());
                std::cout << "trajectory: " << file.string() << "\n";
            }
            if (st == MKDV_ERR_DRIFT || st == MKDV_ERR_NUMERIC) {
                std::cerr << "simulation failed: "
                          << mkdv_last_error(session.get()) << "\n";
                return 1;
            }
            if (st != MKDV_OK)
                return fail_usage(std::string(mkdv_last_error(session.get())));
            return 0;
        }

        if (exp->parsed()) {
            Json bundle;
            bundle["algebra"] = "A_" + std::to_string(rank) + "^1";
            Json hs = Json::array();
            for (int n : flows) {
                OwnedString text;
                if (mkdv_density_json(session.get(), n, 0, D, &text.p) != MKDV_OK)
                    return fail_usage(std::string(mkdv_last_error(session.get())));
                hs.push_back(Json::parse(text.str()));
            }
            bundle["hamiltonian_densities"] = hs;
            Json seconds = Json::array();
            for (int n : flows)
                for (int m : flows) {
                    OwnedString text;
                    if (mkdv_density_json(session.get(), n, m, D, &text.p) !=
                        MKDV_OK)
                        return fail_usage(
                            std::string(mkdv_last_error(session.get())));
                    seconds.push_back(Json::parse(text.str()));
                }
            bundle["second_densities"] = seconds;
            OwnedString dress;
            if (mkdv_dressing_json(session.get(), D, &dress.p) != MKDV_OK)
                return fail_usage(std::string(mkdv_last_error(session.get())));
            bundle["dressing"] = Json::parse(dress.str());
            fs::path file = out / ("densities_r" + std::to_string(rank) + ".json");
            write_file(file, bundle.dump(2) + "\n");
            std::cout << "wrote " << file.string() << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        return fail_usage(e.what());
    }
    return 2;
}
