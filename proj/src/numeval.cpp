#include "mkdv/numeval.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <sstream>

namespace mkdv {

GridState GridState::zeros(int nfields, int npoints, double length) {
    if (npoints <= 0 || (npoints & (npoints - 1)) != 0)
        throw InvalidArgument("GridState: npoints must be a power of two");
    if (length <= 0) throw InvalidArgument("GridState: length must be positive");
    GridState s;
    s.nfields = nfields;
    s.npoints = npoints;
    s.length = length;
    s.u.assign(nfields, std::vector<double>(npoints, 0.0));
    return s;
}

static std::map<std::string, double> parse_params(const std::string& body) {
    std::map<std::string, double> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("profile: expected key=value, got '" + item + "'");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

GridState make_profile(int nfields, int npoints, double length,
                       const std::string& spec) {
    GridState s = GridState::zeros(nfields, npoints, length);
    std::string kind = spec, body;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        kind = spec.substr(0, colon);
        body = spec.substr(colon + 1);
    }
    auto p = parse_params(body);
    auto get = [&](const std::string& k, double dflt) {
        auto it = p.find(k);
        return it == p.end() ? dflt : it->second;
    };
    double amp = get("amplitude", 1.0);
    for (int j = 0; j < npoints; ++j) {
        double z = s.point(j);
        double v = 0;
        if (kind == "zero") {
            v = 0;
        } else if (kind == "sine") {
            double mode = get("mode", 1.0);
            v = amp * std::sin(2.0 * M_PI * mode * z / length);
        } else if (kind == "gaussian") {
            double w = get("width", length / 10);
            double c = get("center", length / 2);
            double d = z - c;
            v = amp * std::exp(-d * d / (2 * w * w));
        } else if (kind == "sech") {
            double w = get("width", 1.0);
            double c = get("center", length / 2);
            v = amp / std::cosh((z - c) / w);
        } else {
            throw InvalidArgument("profile: unknown family '" + kind + "'");
        }
        for (int f = 0; f < nfields; ++f) s.u[f][j] = v;
    }
    return s;
}

// ------------------------------------------------------------------ Spectral

// FFTW plan creation is not thread safe; guard it globally.
static std::mutex g_fftw_mutex;

struct Spectral::Impl {
    int n;
    double length;
    std::vector<double> real;
    fftw_complex* spec;
    fftw_plan fwd, bwd;

    Impl(int npoints, double len) : n(npoints), length(len), real(npoints) {
        std::lock_guard lk(g_fftw_mutex);
        spec = fftw_alloc_complex(n / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(n, real.data(), spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, spec, real.data(), FFTW_ESTIMATE);
    }
    ~Impl() {
        std::lock_guard lk(g_fftw_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(spec);
    }
};

Spectral::Spectral(int npoints, double length)
    : impl_(std::make_unique<Impl>(npoints, length)) {}
Spectral::~Spectral() = default;

void Spectral::derivative(const std::vector<double>& in, int order,
                          std::vector<double>& out) {
    auto& im = *impl_;
    if (static_cast<int>(in.size()) != im.n)
        throw InvalidArgument("Spectral: size mismatch");
    if (order == 0) {
        out = in;
        return;
    }
    std::memcpy(im.real.data(), in.data(), im.n * sizeof(double));
    fftw_execute(im.fwd);
    const double base = 2.0 * M_PI / im.length;
    const int nc = im.n / 2 + 1;
    for (int k = 0; k < nc; ++k) {
        // multiply by (i k base)^order
        double kk = k * base;
        double mag = std::pow(kk, order);
        double re = im.spec[k][0], imx = im.spec[k][1];
        switch (order % 4) {
            case 0: break;
            case 1: { double t = re; re = -imx; imx = t; } break; // *i
            case 2: re = -re; imx = -imx; break;                  // *-1
            case 3: { double t = re; re = imx; imx = -t; } break; // *-i
        }
        im.spec[k][0] = re * mag;
        im.spec[k][1] = imx * mag;
    }
    // Zero the Nyquist mode for odd derivatives (keeps the result real-symmetric).
    if (order % 2 == 1) im.spec[nc - 1][0] = im.spec[nc - 1][1] = 0.0;
    fftw_execute(im.bwd);
    out.resize(im.n);
    const double inv = 1.0 / im.n;
    for (int j = 0; j < im.n; ++j) out[j] = im.real[j] * inv;
}

// -------------------------------------------------------------- PolyEvaluator

PolyEvaluator::PolyEvaluator(std::vector<DiffPoly> polys, int nfields)
    : polys_(std::move(polys)), nfields_(nfields), max_order_(0) {
    for (const auto& p : polys_)
        for (int f = 1; f <= nfields_; ++f)
            max_order_ = std::max(max_order_, p.max_order(f));
}

std::vector<std::vector<double>> PolyEvaluator::operator()(const GridState& s,
                                                           Spectral& sp) const {
    // jets[f][k][j] = u_f^{(k)} at grid point j
    std::vector<std::vector<std::vector<double>>> jets(nfields_);
    for (int f = 0; f < nfields_; ++f) {
        jets[f].resize(max_order_ + 1);
        jets[f][0] = s.u[f];
        for (int k = 1; k <= max_order_; ++k)
            sp.derivative(s.u[f], k, jets[f][k]);
    }
    std::vector<std::vector<double>> out(polys_.size(),
                                         std::vector<double>(s.npoints, 0.0));
    std::vector<std::vector<double>> point(nfields_,
                                           std::vector<double>(max_order_ + 1));
    for (int j = 0; j < s.npoints; ++j) {
        for (int f = 0; f < nfields_; ++f)
            for (int k = 0; k <= max_order_; ++k) point[f][k] = jets[f][k][j];
        for (std::size_t c = 0; c < polys_.size(); ++c)
            out[c][j] = polys_[c].eval(point);
    }
    return out;
}

PolyEvaluator compile_rhs(const FlowSpec& flow) {
    int nf = static_cast<int>(flow.rhs.size());
    return PolyEvaluator(flow.rhs, nf);
}

// ---------------------------------------------------------------- integrate

double stability_indicator(const FlowSpec& flow, int npoints, double length,
                           double dt) {
    // Largest linear term: c * u_i^{(k)} contributes |c| (kmax)^k.
    double kmax = M_PI * npoints / length; // highest resolved wavenumber
    double worst = 0;
    for (const auto& p : flow.rhs)
        for (const auto& [m, c] : p.terms())
            if (m.total_degree() == 1) {
                int ord = m.factors()[0].var.order;
                worst = std::max(worst,
                                 std::abs(rat_double(c)) * std::pow(kmax, ord));
            }
    return worst * dt;
}

static bool all_finite(const GridState& s) {
    for (const auto& f : s.u)
        for (double v : f)
            if (!std::isfinite(v)) return false;
    return true;
}

Trajectory integrate(const GridState& s0, const FlowSpec& flow,
                     const IntegrateOptions& opt, std::string* warning) {
    if (static_cast<int>(flow.rhs.size()) != s0.nfields)
        throw InvalidArgument("integrate: field count mismatch");
    if (opt.dt <= 0 || opt.steps < 0) throw InvalidArgument("integrate: bad dt/steps");
    if (opt.check_stability) {
        double ind = stability_indicator(flow, s0.npoints, s0.length, opt.dt);
        if (ind > 2.8 && warning) {
            std::ostringstream os;
            os << "stability indicator " << ind
               << " exceeds the RK4 budget (~2.8); expect blow-up";
            *warning = os.str();
        }
    }
    PolyEvaluator rhs = compile_rhs(flow);
    Spectral sp(s0.npoints, s0.length);

    Trajectory traj;
    GridState s = s0;
    traj.samples.push_back(s);
    auto axpy = [&](const GridState& base, double a,
                    const std::vector<std::vector<double>>& k) {
        GridState out = base;
        for (int f = 0; f < base.nfields; ++f)
            for (int j = 0; j < base.npoints; ++j) out.u[f][j] += a * k[f][j];
        return out;
    };
    for (long step = 1; step <= opt.steps; ++step) {
        auto k1 = rhs(s, sp);
        auto k2 = rhs(axpy(s, opt.dt / 2, k1), sp);
        auto k3 = rhs(axpy(s, opt.dt / 2, k2), sp);
        auto k4 = rhs(axpy(s, opt.dt, k3), sp);
        for (int f = 0; f < s.nfields; ++f)
            for (int j = 0; j < s.npoints; ++j)
                s.u[f][j] += opt.dt / 6 *
                             (k1[f][j] + 2 * k2[f][j] + 2 * k3[f][j] + k4[f][j]);
        s.time = s0.time + step * opt.dt;
        if (!all_finite(s))
            throw NumericFailure("integrate: non-finite state", step);
        if (opt.stride > 0 && step % opt.stride == 0) traj.samples.push_back(s);
        traj.steps_taken = step;
    }
    if (traj.samples.back().time != s.time) traj.samples.push_back(s);
    return traj;
}

ConservationReport monitor(
    const Trajectory& traj,
    const std::vector<std::pair<std::string, DiffPoly>>& densities) {
    ConservationReport rep;
    if (traj.samples.empty()) return rep;
    const GridState& first = traj.samples.front();
    Spectral sp(first.npoints, first.length);
    std::vector<DiffPoly> polys;
    for (const auto& [label, p] : densities) polys.push_back(p);
    PolyEvaluator ev(polys, first.nfields);

    std::vector<DensityDrift> drifts(densities.size());
    for (std::size_t c = 0; c < densities.size(); ++c)
        drifts[c].label = densities[c].first;

    for (const auto& s : traj.samples) {
        auto vals = ev(s, sp);
        for (std::size_t c = 0; c < densities.size(); ++c) {
            double integral = 0;
            for (double v : vals[c]) integral += v;
            integral *= s.length / s.npoints;
            drifts[c].series.push_back(integral);
        }
    }
    for (auto& d : drifts) {
        d.initial = d.series.front();
        d.final_value = d.series.back();
        d.relative = std::abs(d.initial) > 1e-12;
        double worst = 0;
        for (double v : d.series) {
            double dev = std::abs(v - d.initial);
            if (d.relative) dev /= std::abs(d.initial);
            worst = std::max(worst, dev);
        }
        d.max_rel_drift = worst;
        rep.max_rel_drift = std::max(rep.max_rel_drift, worst);
    }
    rep.densities = std::move(drifts);
    return rep;
}

static double max_diff(const GridState& a, const GridState& b) {
    double m = 0;
    for (int f = 0; f < a.nfields; ++f)
        for (int j = 0; j < a.npoints; ++j)
            m = std::max(m, std::abs(a.u[f][j] - b.u[f][j]));
    return m;
}

double rk4_order_ratio(const GridState& s0, const FlowSpec& flow, double dt,
                       double horizon) {
    auto run = [&](double step) {
        IntegrateOptions opt;
        opt.dt = step;
        opt.steps = std::lround(horizon / step);
        opt.stride = 0; // keep only the final state
        return integrate(s0, flow, opt).samples.back();
    };
    GridState ref = run(dt / 16);
    double e1 = max_diff(run(dt), ref);
    double e2 = max_diff(run(dt / 2), ref);
    return e1 / e2;
}

} // namespace mkdv
