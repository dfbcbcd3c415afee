#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "euler2d/biot_savart.hpp"
#include "euler2d/field.hpp"
#include "euler2d/kernel.hpp"

using namespace euler2d;

namespace {

// Analytic oracle: tangential speed of the unit-disk vortex patch with
// omega = 1 inside r <= 1: |u| = r/2 inside, 1/(2r) outside, direction
// counterclockwise.
Vec2 disk_patch_velocity(Vec2 p) {
    double r = norm(p);
    if (r == 0) return {};
    double speed = (r <= 1.0) ? r / 2.0 : 1.0 / (2.0 * r);
    return (speed / r) * perp(p);
}

ScalarField unit_disk(const Grid& g) {
    return ScalarField::sample(g, [](Vec2 p) { return norm(p) <= 1.0 ? 1.0 : 0.0; });
}

double observed_order(const std::vector<double>& hs, const std::vector<double>& errs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        if (errs[k] <= 0) continue;
        double x = std::log(hs[k]), y = std::log(errs[k]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

TEST_CASE("kernel antisymmetry and the sharp |K||x| constant") {
    std::vector<Vec2> pts = {{0.3, 0.1}, {-1.2, 2.0}, {5.0, -3.3}, {0.0, 0.7}};
    for (Vec2 z : pts) {
        Vec2 s = kernel::biot_savart(z) + kernel::biot_savart(-z);
        CHECK(norm(s) == 0.0);
        // |K(x)| |x| = 1/(2 pi) exactly
        CHECK(norm(kernel::biot_savart(z)) * norm(z) ==
              doctest::Approx(1.0 / (2 * pi)).epsilon(1e-14));
    }
}

TEST_CASE("grad a_R is orthogonal to K") {
    RadialCutoff a = RadialCutoff::quintic(2.0);
    for (Vec2 z : {Vec2{1.3, 0.4}, Vec2{-1.1, 1.2}, Vec2{0.0, 1.5}}) {
        double d = dot(a.grad_a(z), kernel::biot_savart(z));
        CHECK(std::abs(d) < 1e-16);
    }
}

TEST_CASE("div K vanishes analytically away from the origin") {
    for (Vec2 z : {Vec2{0.7, -0.2}, Vec2{2.0, 1.0}}) {
        Mat2 g = kernel::grad_biot_savart(z);
        CHECK(std::abs(g.a11 + g.a22) < 1e-15); // d1 K^1 + d2 K^2
        CHECK(kernel::grad_biot_savart_frobenius(z) ==
              doctest::Approx(g.frobenius()).epsilon(1e-12));
    }
}

TEST_CASE("classical_bs: zero vorticity gives zero velocity") {
    Grid g(32, 4.0);
    ScalarField w(g);
    VectorField u = classical_bs(w, 1.0);
    CHECK(sup_norm(u) == 0.0);
}

TEST_CASE("classical_bs reproduces the unit-disk patch profile") {
    Grid g(256, 8.0);
    ScalarField w = unit_disk(g);
    VectorField u = classical_bs(w, 1.0);
    // probe at nodes (2, 0) and (0.5, 0): oracle values 0.25 and 0.25 tangential
    auto [i1, j1] = g.node_of(Vec2{2.0, 0.0});
    Vec2 got = u.at(i1, j1);
    Vec2 want = disk_patch_velocity(Vec2{2.0, 0.0});
    CHECK(norm(got - want) < 5e-3);
    auto [i2, j2] = g.node_of(Vec2{0.5, 0.0});
    got = u.at(i2, j2);
    want = disk_patch_velocity(Vec2{0.5, 0.0}); // (0, 0.25)
    CHECK(norm(got - want) < 5e-3);
    // sup error over the probe box against the radial oracle
    double err = 0;
    for (std::size_t k : probe_nodes(g, 2.0)) {
        int i = static_cast<int>(k) % g.n, j = static_cast<int>(k) / g.n;
        err = std::max(err, norm(u.v[k] - disk_patch_velocity(g.point(i, j))));
    }
    CHECK(err < 2e-2); // sharp-edge quadrature is first order at the rim
}

TEST_CASE("classical_bs far field of a concentrated blob ~ m/(2 pi r)") {
    Grid g(128, 8.0);
    double sigma = 0.15;
    ScalarField w = ScalarField::sample(g, [&](Vec2 p) {
        return std::exp(-norm_sq(p) / (2 * sigma * sigma));
    });
    double mass = 0;
    for (double v : w.v) mass += v;
    mass *= g.spacing * g.spacing;
    VectorField u = classical_bs(w, 6 * sigma);
    for (double r : {2.0, 3.0, 4.0}) {
        auto [i, j] = g.node_of(Vec2{r, 0.0});
        double speed = norm(u.at(i, j));
        CHECK(speed == doctest::Approx(mass / (2 * pi * r)).epsilon(2e-3));
    }
}

TEST_CASE("classical_bs strict mode rejects mass at the edge") {
    Grid g(32, 2.0);
    ScalarField w = ScalarField::sample(g, [](Vec2) { return 1.0; });
    BsOptions opt;
    opt.strict = true;
    CHECK_THROWS_AS(classical_bs(w, 2.0, opt), DomainError);
}

TEST_CASE("fft and direct paths agree to 1e-10 relative") {
    Grid g(64, 4.0);
    ScalarField w = ScalarField::sample(g, [](Vec2 p) {
        return std::exp(-norm_sq(p) * 2.0) * (1.0 + 0.3 * p.x);
    });
    BsOptions direct{false, ConvMode::Direct};
    BsOptions fast{false, ConvMode::Fft};
    VectorField ud = classical_bs(w, 3.0, direct);
    VectorField uf = classical_bs(w, 3.0, fast);
    double scale = sup_norm(ud);
    CHECK(sup_norm(uf - ud) / scale < 1e-10);

    RadialCutoff a = RadialCutoff::quintic(1.0);
    VectorField cd = cutoff_convolve(w, a, 1.5, ConvMode::Direct);
    VectorField cf = cutoff_convolve(w, a, 1.5, ConvMode::Fft);
    CHECK(sup_norm(cf - cd) / sup_norm(cd) < 1e-10);
}

TEST_CASE("cutoff_convolve equals classical_bs when the cutoff plateau covers everything") {
    Grid g(128, 8.0);
    // support radius 0.8, probe half-width 0.5: every difference |x - y| is
    // at most 0.5*sqrt(2) + 0.8 < 2.0 = r0 * R, where a_R == 1
    ScalarField w = ScalarField::sample(g, [](Vec2 p) {
        double r = norm(p);
        return r < 0.8 ? std::cos(r * pi / 1.6) : 0.0;
    });
    RadialCutoff a = RadialCutoff::quintic(1.0);
    VectorField full = classical_bs(w, 1.0);
    VectorField cut = cutoff_convolve(w, a, 4.0, ConvMode::Fft);
    double err = sup_norm_on(cut - full, probe_nodes(g, 0.5));
    CHECK(err < 1e-12);
}

TEST_CASE("cutoff_convolve rejects scales beyond L/2") {
    Grid g(32, 2.0);
    ScalarField w(g);
    RadialCutoff a = RadialCutoff::quintic(1.0);
    CHECK_THROWS_AS(cutoff_convolve(w, a, 1.5, ConvMode::Direct), DomainError);
}

TEST_CASE("renormalized_bs: zero input converges immediately to zero") {
    Grid g(32, 8.0);
    ScalarField w(g);
    auto res = renormalized_bs(w, RadialCutoff::quintic(1.0), {1.0, 2.0, 4.0});
    CHECK(res.report.converged);
    CHECK(res.report.scales.size() == 2); // stops right after the first Cauchy pair
    CHECK(sup_norm(res.limit) == 0.0);
}

TEST_CASE("renormalized_bs: compact support reduces to the classical law") {
    Grid g(128, 8.0);
    ScalarField w = ScalarField::sample(g, [](Vec2 p) {
        double r = norm(p);
        return r < 0.8 ? (1 - r / 0.8) * (1 - r / 0.8) : 0.0;
    });
    RenormalizeOptions opt;
    opt.probe_half_width = 0.4; // plateau at R = 3 already covers probe + support
    opt.tolerance = 1e-9;
    auto res = renormalized_bs(w, RadialCutoff::quintic(1.0), {2.0, 3.0, 4.0}, opt);
    CHECK(res.report.converged);
    VectorField full = classical_bs(w, 0.8);
    CHECK(sup_norm_on(res.limit - full, probe_nodes(g, 0.4)) < 1e-10);
}

TEST_CASE("renormalized_bs on shear vorticity recovers the shear") {
    // domega = -cos(x2) is non-decaying; the limit is (sin x2, 0) plus a
    // constant, which is near zero here by symmetry of the quadrature
    Grid g(256, 16.0);
    ScalarField w = ScalarField::sample(g, [](Vec2 p) { return -std::cos(p.y); });
    RenormalizeOptions opt;
    opt.probe_half_width = 2.0;
    opt.tolerance = 5e-3;
    opt.stop_at_convergence = false;
    auto res = renormalized_bs(w, RadialCutoff::quintic(1.0), {2.0, 4.0, 8.0}, opt);
    auto box = probe_nodes(g, 2.0);
    auto shear = VectorField::sample(g, [](Vec2 p) { return Vec2{std::sin(p.y), 0.0}; });
    // per-scale distance to the shear (after removing the constant H of the
    // renormalized law) decreases along the schedule; only subsequential
    // convergence is guaranteed, so the final iterate is checked loosely
    double prev = 1e300;
    for (double R : res.report.scales) {
        VectorField diff = cutoff_convolve(w, RadialCutoff::quintic(1.0), R) - shear;
        Vec2 constant = mean_on(diff, box);
        double wobble = 0;
        for (std::size_t k : box) wobble = std::max(wobble, norm(diff.v[k] - constant));
        CHECK(wobble < prev);
        prev = wobble;
        if (R == res.report.scales.back()) {
            CHECK(wobble < 0.15);
            CHECK(norm(constant) < 0.05);
        }
    }
}

TEST_CASE("renormalized_bs reports honest non-convergence") {
    Grid g(64, 8.0);
    ScalarField w = ScalarField::sample(g, [](Vec2 p) { return -std::cos(p.y * 3.0); });
    RenormalizeOptions opt;
    opt.tolerance = 1e-14; // unreachable
    auto res = renormalized_bs(w, RadialCutoff::quintic(1.0), {1.0, 2.0, 4.0}, opt);
    CHECK_FALSE(res.report.converged);
    CHECK(res.report.scales.size() == 3);
}

TEST_CASE("curl_kernel_convolve: constant field maps to zero") {
    // omega(a_R K) * c = (a_R K) * omega(c) = 0: the delta gives back c and
    // the annulus kernel integrates to -1, so the two cancel. Direct
    // quadrature of the correction term confirms the -1.
    Grid g(128, 8.0);
    RadialCutoff a = RadialCutoff::quintic(1.0);
    double R = 2.0;
    double integral = 0;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            integral += kernel::curl_cutoff_kernel(a, R, g.point(i, j));
    integral *= g.spacing * g.spacing;
    CHECK(integral == doctest::Approx(-1.0).epsilon(1e-3));

    auto c = VectorField::sample(g, [](Vec2) { return Vec2{0.7, -0.3}; });
    VectorField out = curl_kernel_convolve(c, a, R, ConvMode::Fft);
    CHECK(sup_norm_on(out, probe_nodes(g, 4.0)) < 1e-3);
}

TEST_CASE("curl_kernel_convolve: zero in, zero out") {
    Grid g(32, 4.0);
    VectorField z(g);
    CHECK(sup_norm(curl_kernel_convolve(z, RadialCutoff::quintic(1.0), 2.0)) == 0.0);
}

TEST_CASE("discrete AlmostBSu identity holds and sharpens under refinement") {
    // (a_R K) * curl(u) == omega(a_R K) * u for u in S; discrete error O(h^2)
    RadialCutoff a = RadialCutoff::quintic(1.0);
    const double R = 2.0;
    std::vector<double> hs, errs;
    for (int n : {64, 128, 256}) {
        Grid g(n, 8.0);
        ScalarField w = ScalarField::sample(g, [](Vec2 p) {
            return std::exp(-norm_sq(p)) * (1 + 0.5 * p.x);
        });
        VectorField u = classical_bs(w, 5.0);
        VectorField lhs = cutoff_convolve(curl(u), a, R);
        VectorField rhs = curl_kernel_convolve(u, a, R);
        hs.push_back(g.spacing);
        errs.push_back(sup_norm_on(lhs - rhs, probe_nodes(g, 2.0)));
    }
    CHECK(observed_order(hs, errs) >= 1.5);
    CHECK(errs.back() < errs.front());
}

TEST_CASE("cutoff convolution output is divergence-free at O(h^2)") {
    std::vector<double> hs, errs;
    RadialCutoff a = RadialCutoff::quintic(1.0);
    for (int n : {64, 128, 256}) {
        Grid g(n, 8.0);
        ScalarField w = ScalarField::sample(g, [](Vec2 p) { return std::exp(-norm_sq(p)); });
        VectorField u = cutoff_convolve(w, a, 2.0);
        hs.push_back(g.spacing);
        errs.push_back(sup_norm_on(divergence(u), probe_nodes(g, 2.0)));
    }
    CHECK(observed_order(hs, errs) >= 1.7);
}

TEST_CASE("convergence report serializes with the reproducibility header") {
    Grid g(64, 8.0);
    ScalarField w = ScalarField::sample(g, [](Vec2 p) {
        double r = norm(p);
        return r < 0.8 ? (1 - r / 0.8) * (1 - r / 0.8) : 0.0;
    });
    RenormalizeOptions opt;
    opt.probe_half_width = 0.4;
    auto res = renormalized_bs(w, RadialCutoff::quintic(1.0), {2.0, 3.0, 4.0}, opt);
    std::string txt = res.report.to_text();
    CHECK(txt.find("cutoff_profile quintic") != std::string::npos);
    CHECK(txt.find("converged") != std::string::npos);
    // one row per evaluated scale
    int rows = 0;
    for (std::size_t p = txt.find('\n'); p != std::string::npos; p = txt.find('\n', p + 1))
        ++rows;
    CHECK(rows >= static_cast<int>(res.report.scales.size()) + 5);
}

TEST_CASE("property: antisymmetry and plateau orthogonality on random points") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(-5.0, 5.0);
    RadialCutoff a = RadialCutoff::quintic(1.7);
    RadialCutoff b = RadialCutoff::smooth_exp(0.9);
    for (int k = 0; k < 500; ++k) {
        Vec2 z{U(rng), U(rng)};
        if (norm(z) < 1e-6) continue;
        CHECK(norm(kernel::biot_savart(z) + kernel::biot_savart(-z)) == 0.0);
        CHECK(norm(kernel::k_perp(z) + kernel::k_perp(-z)) == 0.0);
        // radial gradient is orthogonal to the tangential kernel
        CHECK(std::abs(dot(a.grad_a(z), kernel::biot_savart(z))) < 1e-16);
        CHECK(std::abs(dot(b.grad_a(z), kernel::biot_savart(z))) < 1e-16);
    }
}

TEST_CASE("cutoff profiles: plateau, support, and C2 joins") {
    for (const RadialCutoff& c : {RadialCutoff::quintic(2.0), RadialCutoff::smooth_exp(2.0)}) {
        CHECK(c.profile(0.0) == 1.0);
        CHECK(c.profile(c.inner) == 1.0);
        CHECK(c.profile(c.outer) == 0.0);
        CHECK(c.profile(10.0) == 0.0);
        // monotone decrease across the transition
        double prev = 1.0;
        for (int k = 1; k <= 50; ++k) {
            double t = c.inner + (c.outer - c.inner) * k / 50.0;
            double v = c.profile(t);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
        // value, first and second derivative continuous at both joins
        for (double t0 : {c.inner, c.outer}) {
            double d = 1e-5;
            CHECK(std::abs(c.profile(t0 + d) - c.profile(t0 - d)) < 1e-8);
            CHECK(std::abs(c.dprofile(t0 + d) - c.dprofile(t0 - d)) < 1e-3);
            CHECK(std::abs(c.d2profile(t0 + d) - c.d2profile(t0 - d)) < 1e-1);
        }
    }
}

TEST_CASE("cutoff_convolve of the zero field is zero") {
    Grid g(32, 8.0);
    ScalarField z(g);
    CHECK(sup_norm(cutoff_convolve(z, RadialCutoff::quintic(1.0), 2.0, ConvMode::Direct)) == 0.0);
}

TEST_CASE("renormalized_bs rejects bad schedules") {
    Grid g(32, 8.0);
    ScalarField w(g);
    RadialCutoff a = RadialCutoff::quintic(1.0);
    CHECK_THROWS_AS(renormalized_bs(w, a, {}), InvalidArgument);
    CHECK_THROWS_AS(renormalized_bs(w, a, {2.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(renormalized_bs(w, a, {3.0, 1.0}), InvalidArgument);
}

TEST_CASE("classical_bs records a truncation warning in non-strict mode") {
    Grid g(32, 2.0);
    ScalarField w = ScalarField::sample(g, [](Vec2) { return 1.0; });
    bool warned = false;
    BsOptions opt;
    opt.truncation_warning = &warned;
    classical_bs(w, 2.0, opt);
    CHECK(warned);
    warned = false;
    ScalarField compact = ScalarField::sample(g, [](Vec2 p) { return norm(p) < 0.5 ? 1.0 : 0.0; });
    classical_bs(compact, 0.5, opt);
    CHECK_FALSE(warned);
}
