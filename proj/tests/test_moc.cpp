#include <doctest.h>

#include <cmath>

#include "euler2d/biot_savart.hpp"
#include "euler2d/moc.hpp"

using namespace euler2d;

namespace {
const double e_inv = std::exp(-1.0);
}

TEST_CASE("mu_ll values") {
    CHECK(mu_ll(1.0, 0.0) == 0.0);
    CHECK(mu_ll(1.0, e_inv) == doctest::Approx(e_inv).epsilon(1e-15));      // 0.367879...
    CHECK(mu_ll(1.0, 10.0) == doctest::Approx(e_inv).epsilon(1e-15));      // capped
    CHECK(mu_ll(2.0, std::exp(-2.0)) ==
          doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-15));           // 0.541341...
    CHECK_THROWS_AS(mu_ll(1.0, -0.1), InvalidArgument);
}

TEST_CASE("constructed moduli are moduli: vanish at zero, nondecreasing on a dyadic ladder") {
    for (const Moc& mu : {Moc::log_lipschitz(1.0), Moc::capped_linear(1.0)}) {
        double prev = 0.0;
        for (int k = 40; k >= 0; --k) {
            double r = std::pow(2.0, -k);
            double v = mu(r);
            CHECK(v >= prev);
            CHECK(v > 0);
            prev = v;
        }
    }
    CHECK(Moc::log_lipschitz(1.0)(0.0) == 0.0);
    CHECK(Moc::capped_linear(1.0)(0.0) == 0.0);
}

TEST_CASE("dini_integral closed form for the log-Lipschitz modulus") {
    Moc mu = Moc::log_lipschitz(1.0);
    // S(x) = x - x log x for x <= 1/e; S(1/e) = 2/e
    CHECK(dini_integral(mu, e_inv) == doctest::Approx(2.0 * e_inv).epsilon(1e-14));
    double x = 0.1;
    CHECK(dini_integral(mu, x) == doctest::Approx(x - x * std::log(x)).epsilon(1e-14));
    // quadrature path agrees with the antiderivative to 1e-10
    Moc gen = mu.as_generic();
    CHECK(std::abs(dini_integral(gen, x) - (x - x * std::log(x))) < 1e-10);
    CHECK(std::abs(dini_integral(gen, e_inv) - 2.0 * e_inv) < 1e-10);
}

TEST_CASE("dini_integral of the Lipschitz modulus: S(1) = 1") {
    Moc lin = Moc::from_function("linear", [](double r) { return r; });
    CHECK(dini_integral(lin, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dini_integral is additive over intervals") {
    Moc mu = Moc::capped_linear(1.0);
    double a = 0.05, b = 0.8;
    double whole = dini_integral(mu, b);
    double part = dini_integral(mu, a) +
                  moc_detail::simpson([&](double r) { return mu(r) / r; }, a, b, 256);
    CHECK(whole == doctest::Approx(part).epsilon(1e-9));
}

TEST_CASE("non-Dini modulus is detected") {
    // mu(r) = 1/|log r| near zero: the Dini integral diverges
    Moc bad = Moc::from_function("inv-log", [](double r) {
        if (r <= 0) return 0.0;
        double l = std::abs(std::log(std::min(r, 0.1)));
        return 1.0 / l;
    });
    CHECK_THROWS_AS(dini_integral(bad, 0.05), ConvergenceError);
    CHECK_THROWS_AS(riesz_moc(bad, 0.05), ConvergenceError);
}

TEST_CASE("riesz_moc closed forms for the log-Lipschitz modulus") {
    Moc mu = Moc::log_lipschitz(0.7);
    // large argument: nu(r) = M (log r + 1), so nu(r)/(log r + 1) is constant
    double r1 = 1.0, r2 = std::exp(1.0), r3 = std::exp(2.0);
    double q1 = riesz_moc(mu, r1) / (std::log(r1) + 1);
    double q2 = riesz_moc(mu, r2) / (std::log(r2) + 1);
    double q3 = riesz_moc(mu, r3) / (std::log(r3) + 1);
    CHECK(q1 == doctest::Approx(q2).epsilon(1e-12));
    CHECK(q2 == doctest::Approx(q3).epsilon(1e-12));
    CHECK(q1 == doctest::Approx(0.7).epsilon(1e-12));
    // small argument: nu(r) = M r ((log r)^2 - log r)
    for (double r : {std::exp(-2.0), std::exp(-3.0), std::exp(-4.0)}) {
        double lr = std::log(r);
        double shape = r * (lr * lr - lr);
        CHECK(riesz_moc(mu, r) / shape == doctest::Approx(0.7).epsilon(1e-12));
    }
}

TEST_CASE("riesz_moc of min(r,1): finite, and nu(r)/r bounded up to a log factor") {
    Moc mu = Moc::capped_linear(1.0);
    for (double r : {1e-3, 1e-2, 0.1, 1.0, 10.0}) {
        double v = riesz_moc(mu, r);
        CHECK(std::isfinite(v));
        CHECK(v > 0);
    }
    // nu(r) = r (2 - log r) analytically for r <= 1:
    //   S(r) = r, tail = r (int_r^1 ds/s + int_1^inf ds/s^2) = r (1 - log r)
    for (double r : {1e-3, 1e-2, 0.1}) {
        CHECK(riesz_moc(mu, r) == doctest::Approx(r * (2.0 - std::log(r))).epsilon(1e-6));
    }
}

TEST_CASE("riesz_moc dominates dini_integral on the quadrature path") {
    // both tail terms of nu are nonnegative, so nu >= S_mu pointwise
    for (const Moc& mu : {Moc::capped_linear(1.0), Moc::log_lipschitz(1.0).as_generic()}) {
        Moc m = mu;
        m.constant_beyond = (mu.name == "log-lipschitz") ? e_inv : 1.0;
        for (double r : {0.01, 0.1, 0.3, 1.0, 3.0})
            CHECK(riesz_moc(m, r) >= dini_integral(m, r) * (1 - 1e-12));
    }
}

TEST_CASE("empirical_moc: constant field has zero seminorm") {
    Grid g(32, 2.0);
    ScalarField c = ScalarField::sample(g, [](Vec2) { return 4.2; });
    CHECK(empirical_moc(c, Moc::capped_linear(10.0)) == 0.0);
}

TEST_CASE("empirical_moc of sin against the Lipschitz modulus is about 1") {
    Grid g(128, pi);
    ScalarField f = ScalarField::sample(g, [](Vec2 p) { return std::sin(p.y); });
    Moc lip = Moc::from_function("linear", [](double r) { return r; });
    double est = empirical_moc(f, lip);
    CHECK(est <= 1.0 + 1e-6); // |sin a - sin b| <= |a - b|
    CHECK(est > 0.9);         // and the bound is nearly attained near y = 0
}

TEST_CASE("empirical_moc of the patch velocity against mu_LL is stable under refinement") {
    double prev = -1;
    for (int n : {64, 128}) {
        Grid g(n, 8.0);
        ScalarField w = ScalarField::sample(g, [](Vec2 p) { return norm(p) <= 1.0 ? 1.0 : 0.0; });
        VectorField u = classical_bs(w, 1.0);
        double est = empirical_moc(u, Moc::log_lipschitz(1.0));
        CHECK(std::isfinite(est));
        if (prev > 0) CHECK(est / prev < 1.5);
        prev = est;
    }
}

TEST_CASE("morrey gradient ratios stay bounded over the p sweep") {
    Grid g(128, 4.0);
    SUBCASE("constant field: all ratios zero") {
        auto c = VectorField::sample(g, [](Vec2) { return Vec2{1.0, 2.0}; });
        for (const auto& row : morrey_gradient_check(c, {1.25, 2, 4, 8, 16}, 1.0))
            CHECK(row.lp_norm == 0.0);
    }
    SUBCASE("shear flow") {
        auto u = VectorField::sample(g, [](Vec2 p) { return Vec2{std::sin(p.y), 0.0}; });
        for (const auto& row : morrey_gradient_check(u, {1.25, 2, 4, 8, 16}, 1.0)) {
            CHECK(std::isfinite(row.ratio));
            CHECK(row.ratio < 1.0);
        }
    }
    SUBCASE("patch velocity: bounded despite the gradient jump at the rim") {
        ScalarField w = ScalarField::sample(g, [](Vec2 p) { return norm(p) <= 1.0 ? 1.0 : 0.0; });
        VectorField u = classical_bs(w, 1.0);
        for (const auto& row : morrey_gradient_check(u, {1.25, 2, 4, 8, 16}, 1.0)) {
            CHECK(std::isfinite(row.ratio));
            CHECK(row.ratio < 1.0);
        }
    }
}
