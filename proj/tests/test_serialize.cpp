#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mkdv/checks.hpp"
#include "mkdv/serialize.hpp"
#include "test_helpers.hpp"

using namespace mkdv;
using namespace mkdv::testing;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("diffpoly json round trip and canonical form") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 25; ++t) {
        int rank = 1 + (t % 2);
        DiffPoly p = random_poly(rng, rank);
        Json j = diffpoly_to_json(p);
        CHECK(diffpoly_from_json(j, rank) == p);
        // Deterministic: serialising twice gives identical bytes.
        CHECK(j.dump() == diffpoly_to_json(p).dump());
    }
    DiffPoly p = q(-3, 8) * u(1, 1) * u(1, 1) * u(1, 1, 1);
    CHECK(diffpoly_to_json(p).dump() ==
          R"([{"coeff":"-3/8","monomial":[[1,0,2],[1,1,1]]}])");
}

TEST_CASE("loop element json shape") {
    AlgebraCtx ctx(1);
    LoopElement x = generator_p(ctx, -1);
    Json j = loopelement_to_json(x);
    CHECK(j["trunc"].is_null());
    CHECK(j["entries"].size() == 2);
}

TEST_CASE("flow json against golden files") {
    Engine eng{AlgebraCtx(1)};
    for (int n : {1, 3, 5}) {
        auto f = eng.flow(n, n + 3);
        std::string got = flow_to_json(eng.ctx(), *f).dump(2) + "\n";
        std::string want = read_file(std::string(MKDV_SOURCE_DIR) +
                                     "/tests/golden/flow_r1_n" +
                                     std::to_string(n) + ".json");
        CHECK(got == want);
    }
}

TEST_CASE("latex rendering") {
    DiffPoly p = q(1, 4) * u(1, 1, 3) - q(3, 8) * u(1, 1) * u(1, 1) * u(1, 1, 1);
    std::string tex = diffpoly_to_latex(p);
    CHECK(tex.find("\\frac{1}{4}") != std::string::npos);
    CHECK(tex.find("u'''") != std::string::npos);
    CHECK(diffpoly_to_latex(DiffPoly::zero(1)) == "0");
    // high orders switch to superscripts
    CHECK(diffpoly_to_latex(u(1, 1, 5)).find("^{(5)}") != std::string::npos);
}

TEST_CASE("check report serialisation and negative control") {
    AlgebraCtx ctx(1);
    CheckOptions opt;
    opt.flows = {1, 3};
    opt.checks = {"first_flow", "zero_curvature", "commutativity"};
    CheckReport rep = run_checks(ctx, opt);
    CHECK(rep.pass);
    Json j = check_report_to_json(rep);
    CHECK(j["pass"].get<bool>());
    CHECK(j["algebra"].get<std::string>() == "A_1^1");
    CHECK(!check_report_to_text(rep).empty());

    // Perturbed flow: commutativity must fail and the residual is printed
    // verbatim.
    opt.perturb_flow = 3;
    CheckReport bad = run_checks(ctx, opt);
    CHECK_FALSE(bad.pass);
    bool saw_nonzero = false;
    for (const auto& item : bad.items)
        if (!item.pass)
            for (const auto& [label, val] : item.residuals)
                if (val != "0") saw_nonzero = true;
    CHECK(saw_nonzero);
}

TEST_CASE("unknown check name is a usage error") {
    AlgebraCtx ctx(1);
    CheckOptions opt;
    opt.checks = {"nonsense"};
    CHECK_THROWS_AS(run_checks(ctx, opt), InvalidArgument);
    CheckOptions opt2;
    opt2.flows = {2};
    CHECK_THROWS_AS(run_checks(ctx, opt2), InvalidArgument);
}

TEST_CASE("default check suite passes at rank 1") {
    AlgebraCtx ctx(1);
    CheckOptions opt;
    opt.flows = {1, 3};
    CheckReport rep = run_checks(ctx, opt);
    CHECK(rep.pass);
    CHECK(rep.constants["variational_constant"].get<std::string>() == "-2");
}
