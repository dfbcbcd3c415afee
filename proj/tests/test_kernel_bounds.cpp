#include <doctest.h>

#include <cmath>

#include "euler2d/kernel_bounds.hpp"

using namespace euler2d;

TEST_CASE("cutoff-derivative x kernel L1 slopes match 1 - |alpha| - |beta|") {
    Grid g(256, 8.0);
    RadialCutoff a = RadialCutoff::quintic(1.0);
    std::vector<double> scales = {1.0, 2.0, 4.0};
    SUBCASE("alpha=1, beta=0: slope ~ 0") {
        std::vector<double> norms;
        for (double R : scales) norms.push_back(bounds::l1_cutoff_kernel_product(g, a, R, 1, 0));
        CHECK(std::abs(bounds::fit_slope(scales, norms)) < 0.1);
    }
    SUBCASE("alpha=1, beta=1: slope ~ -1") {
        std::vector<double> norms;
        for (double R : scales) norms.push_back(bounds::l1_cutoff_kernel_product(g, a, R, 1, 1));
        CHECK(std::abs(bounds::fit_slope(scales, norms) - (-1.0)) < 0.1);
    }
    SUBCASE("alpha=2, beta=0: slope ~ -1") {
        std::vector<double> norms;
        for (double R : scales) norms.push_back(bounds::l1_cutoff_kernel_product(g, a, R, 2, 0));
        CHECK(std::abs(bounds::fit_slope(scales, norms) - (-1.0)) < 0.1);
    }
}

TEST_CASE("rearrangement integral scales like R^{2-p}") {
    Grid g(256, 8.0);
    for (double p : {1.25, 1.5, 1.75}) {
        std::vector<double> scales = {1.0, 2.0, 4.0}, ints;
        for (double R : scales) ints.push_back(bounds::rearrangement_integral(g, R, p));
        double slope = bounds::fit_slope(scales, ints);
        CHECK(std::abs(slope - (2.0 - p)) < 0.1);
    }
}

TEST_CASE("rearrangement integral at p=3/2 is close to the analytic disk value") {
    Grid g(256, 8.0);
    double R = 2.0, p = 1.5;
    double got = bounds::rearrangement_integral(g, R, p);
    double exact = std::pow(2 * pi, 1 - p) * std::pow(std::sqrt(2.0) * R, 2 - p) / (2 - p);
    CHECK(got == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("second-derivative tail bound: eps * L1 uniformly bounded") {
    RadialCutoff a = RadialCutoff::quintic(1.0);
    double lo = 1e300, hi = 0;
    for (double eps : {0.5, 1.0, 2.0, 4.0}) {
        double v = bounds::d2_tail_l1(a, eps) * eps;
        CHECK(std::isfinite(v));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // the product should be essentially scale free (pure 1/eps decay)
    CHECK(hi / lo < 1.05);
}

TEST_CASE("full bound suite passes and serializes") {
    Grid g(128, 8.0);
    auto rep = bounds::verify_kernel_bounds(g, RadialCutoff::quintic(1.0));
    CHECK(rep.all_pass());
    auto txt = rep.to_text();
    CHECK(txt.find("rearrangement_p1.50") != std::string::npos);
    CHECK(txt.find("FAIL") == std::string::npos);

    // a named bound-violation diagnostic appears when tolerances are absurd
    bounds::BoundSuiteConfig bad;
    bad.slope_tolerance = 1e-9;
    auto rep2 = bounds::verify_kernel_bounds(g, RadialCutoff::quintic(1.0), bad);
    CHECK_FALSE(rep2.all_pass());
}

TEST_CASE("bound checks also pass for the exp profile") {
    Grid g(128, 8.0);
    auto rep = bounds::verify_kernel_bounds(g, RadialCutoff::smooth_exp(1.0));
    CHECK(rep.all_pass());
}
