#include <doctest.h>

#include <cmath>

#include "mkdv/conserved.hpp"
#include "mkdv/numeval.hpp"
#include "test_helpers.hpp"

using namespace mkdv;
using namespace mkdv::testing;

TEST_CASE("grid construction validates its input") {
    CHECK_THROWS_AS(GridState::zeros(1, 100, 20.0), InvalidArgument); // not 2^k
    CHECK_THROWS_AS(GridState::zeros(1, 128, -1.0), InvalidArgument);
    CHECK_THROWS_AS(make_profile(1, 128, 20.0, "wavelet:a=1"), InvalidArgument);
}

TEST_CASE("spectral derivative accuracy on sines") {
    const int N = 256;
    const double L = 20.0;
    Spectral sp(N, L);
    for (int k : {1, 2, 8, 32, 64}) { // up to N/4
        std::vector<double> in(N), d1(N), d3(N);
        const double w = 2 * M_PI * k / L;
        for (int j = 0; j < N; ++j) in[j] = std::sin(w * (L * j / N));
        sp.derivative(in, 1, d1);
        sp.derivative(in, 3, d3);
        double worst1 = 0, worst3 = 0;
        for (int j = 0; j < N; ++j) {
            double z = L * j / N;
            worst1 = std::max(worst1, std::abs(d1[j] - w * std::cos(w * z)));
            worst3 = std::max(worst3,
                              std::abs(d3[j] + w * w * w * std::cos(w * z)));
        }
        CHECK(worst1 / w < 1e-10);
        // Higher orders amplify top-of-spectrum roundoff by kmax^order; the
        // error floor is absolute, not relative.
        CHECK(worst3 < 1e-10 * w * w * w + 1e-8);
    }
}

TEST_CASE("compile_rhs evaluates the first flow spectrally") {
    Engine eng{AlgebraCtx(1)};
    auto f1 = eng.flow(1, 4);
    GridState s = make_profile(1, 256, 20.0, "sine:amplitude=1,mode=2");
    Spectral sp(s.npoints, s.length);
    auto out = compile_rhs(*f1)(s, sp);
    const double w = 2 * M_PI * 2 / 20.0;
    for (int j = 0; j < s.npoints; ++j)
        CHECK(out[0][j] ==
              doctest::Approx(w * std::cos(w * s.point(j))).epsilon(1e-9));
}

TEST_CASE("flow 3 pointwise values match the closed form on a sine") {
    Engine eng{AlgebraCtx(1)};
    auto f3 = eng.flow(3, 6);
    const int N = 256;
    const double L = 20.0;
    GridState s = make_profile(1, N, L, "sine:amplitude=1,mode=1");
    Spectral sp(N, L);
    auto out = compile_rhs(*f3)(s, sp);
    const double w = 2 * M_PI / L;
    for (int j = 0; j < N; ++j) {
        double z = s.point(j);
        double sv = std::sin(w * z), cv = std::cos(w * z);
        // (1/4) u''' - (3/8) u^2 u'
        double expect = 0.25 * (-w * w * w * cv) - 0.375 * sv * sv * (w * cv);
        CHECK(out[0][j] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("zero data stays zero") {
    Engine eng{AlgebraCtx(1)};
    auto f3 = eng.flow(3, 6);
    GridState s = GridState::zeros(1, 128, 20.0);
    IntegrateOptions opt;
    opt.dt = 1e-3;
    opt.steps = 50;
    opt.stride = 10;
    Trajectory t = integrate(s, *f3, opt);
    for (const auto& snap : t.samples)
        for (double v : snap.u[0]) CHECK(v == 0.0);
}

TEST_CASE("first flow transports the profile rigidly") {
    Engine eng{AlgebraCtx(1)};
    auto f1 = eng.flow(1, 4);
    const int N = 128;
    const double L = 16.0;
    GridState s = make_profile(1, N, L, "gaussian:amplitude=1,width=1,center=8");
    IntegrateOptions opt;
    const double dx = L / N;
    opt.dt = dx / 8;
    const int shift = 24;
    opt.steps = shift * 8; // advance exactly `shift` grid cells
    opt.stride = 0;
    Trajectory t = integrate(s, *f1, opt);
    const auto& fin = t.samples.back().u[0];
    // d_1 u = u' moves the profile left by t, i.e. u(z, t) = u0(z + t).
    double worst = 0;
    for (int j = 0; j < N; ++j)
        worst = std::max(worst,
                         std::abs(fin[j] - s.u[0][(j + shift) % N]));
    CHECK(worst < 1e-6);

    // Cross-correlation peak sits at the expected shift.
    int best_shift = 0;
    double best = -1e300;
    for (int cand = 0; cand < N; ++cand) {
        double acc = 0;
        for (int j = 0; j < N; ++j) acc += fin[j] * s.u[0][(j + cand) % N];
        if (acc > best) {
            best = acc;
            best_shift = cand;
        }
    }
    CHECK(best_shift == shift);
}

TEST_CASE("stability indicator warns on oversized steps") {
    Engine eng{AlgebraCtx(1)};
    auto f3 = eng.flow(3, 6);
    double small = stability_indicator(*f3, 256, 20.0, 1e-4);
    CHECK(small < 2.8);
    double large = stability_indicator(*f3, 256, 20.0, 5e-3);
    CHECK(large > 2.8);
    GridState s = make_profile(1, 256, 20.0, "sech:amplitude=1,width=1");
    IntegrateOptions opt;
    opt.dt = 5e-3;
    opt.steps = 2000;
    opt.stride = 0;
    std::string warning;
    CHECK_THROWS_AS(integrate(s, *f3, opt, &warning), NumericFailure);
    CHECK(!warning.empty());
}

TEST_CASE("conservation drift on a short mkdv run") {
    Engine eng{AlgebraCtx(1)};
    auto f3 = eng.flow(3, 6);
    GridState s = make_profile(1, 256, 20.0, "sech:amplitude=1,width=1");
    IntegrateOptions opt;
    opt.dt = 1e-4;
    opt.steps = 1000;
    opt.stride = 200;
    Trajectory t = integrate(s, *f3, opt);
    std::vector<std::pair<std::string, DiffPoly>> dens;
    dens.emplace_back("H_1", hamiltonian_density(eng, 1, 6).value);
    dens.emplace_back("H_3", hamiltonian_density(eng, 3, 6).value);
    ConservationReport rep = monitor(t, dens);
    REQUIRE(rep.densities.size() == 2);
    CHECK(rep.max_rel_drift < 1e-6);
    // translation flow preserves every integral to machine precision
    auto f1 = eng.flow(1, 4);
    Trajectory t1 = integrate(s, *f1, opt);
    ConservationReport rep1 = monitor(t1, dens);
    CHECK(rep1.max_rel_drift < 1e-10);
}

TEST_CASE("rk4 order ratio sits near 16") {
    Engine eng{AlgebraCtx(1)};
    auto f3 = eng.flow(3, 6);
    GridState s = make_profile(1, 32, 20.0, "sine:amplitude=2,mode=1");
    double ratio = rk4_order_ratio(s, *f3, 0.02, 1.0);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}
