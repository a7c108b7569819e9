// numeval.hpp -- numerical verification: integrate a generated flow as a
// PDE on a periodic grid and monitor drift of the generated densities.
// Doubles live here only; nothing numeric leaks back into the symbolic
// modules.
#ifndef MKDV_NUMEVAL_HPP
#define MKDV_NUMEVAL_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mkdv/hierarchy.hpp"

namespace mkdv {

// Sampled field values on a uniform periodic grid of length L.
struct GridState {
    int nfields = 1;
    int npoints = 0;      // power of two
    double length = 0;
    double time = 0;
    std::vector<std::vector<double>> u; // [field][point]

    static GridState zeros(int nfields, int npoints, double length);
    double point(int j) const { return length * j / npoints; }
};

// Initial profile families.  Spec strings look like
// "sech:amplitude=1,width=1,center=10" | "sine:amplitude=1,mode=2" |
// "gaussian:amplitude=1,width=2,center=10".  The same profile is applied to
// every field.
GridState make_profile(int nfields, int npoints, double length,
                       const std::string& spec);

// Spectral differentiation workspace (FFT-based periodic derivatives).
class Spectral {
public:
    Spectral(int npoints, double length);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    // out = d^order/dz^order of the sampled field.
    void derivative(const std::vector<double>& in, int order,
                    std::vector<double>& out);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Pointwise evaluator of a list of differential polynomials (one per output
// channel) with spectral jet values.
class PolyEvaluator {
public:
    PolyEvaluator(std::vector<DiffPoly> polys, int nfields);

    int max_order() const { return max_order_; }
    // Evaluate all channels on a state; jets are computed spectrally.
    std::vector<std::vector<double>> operator()(const GridState& s,
                                                Spectral& sp) const;

private:
    std::vector<DiffPoly> polys_;
    int nfields_;
    int max_order_;
};

PolyEvaluator compile_rhs(const FlowSpec& flow);

struct Trajectory {
    std::vector<GridState> samples; // stride-spaced, first = initial state
    long steps_taken = 0;
};

struct IntegrateOptions {
    double dt = 1e-4;
    long steps = 10000;
    long stride = 100;   // sample every this many steps
    bool check_stability = true;
};

// Linearised dispersion estimate |c_max| dt kmax^order for the stability
// warning; RK4 tolerates roughly 2.8 on the imaginary axis.
double stability_indicator(const FlowSpec& flow, int npoints, double length,
                           double dt);

// Classical fixed-step RK4.  Throws NumericFailure with the offending step
// index when the state stops being finite.
Trajectory integrate(const GridState& s0, const FlowSpec& flow,
                     const IntegrateOptions& opt,
                     std::string* warning = nullptr);

struct DensityDrift {
    std::string label;
    double initial = 0;
    double final_value = 0;
    double max_rel_drift = 0;  // absolute drift when |initial| ~ 0
    bool relative = true;
    std::vector<double> series;
};

struct ConservationReport {
    std::vector<DensityDrift> densities;
    double max_rel_drift = 0;
};

// Quadrature of each density along the trajectory (uniform periodic grid:
// the rectangle rule is spectrally accurate).
ConservationReport monitor(const Trajectory& traj,
                           const std::vector<std::pair<std::string, DiffPoly>>&
                               densities);

// err(dt) / err(dt/2) against a dt/16 reference after the given horizon;
// fourth-order schemes land near 16.
double rk4_order_ratio(const GridState& s0, const FlowSpec& flow, double dt,
                       double horizon);

} // namespace mkdv

#endif
