#ifndef EULER2D_MOC_HPP
#define EULER2D_MOC_HPP

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "euler2d/common.hpp"
#include "euler2d/field.hpp"

namespace euler2d {

/// Log-Lipschitz modulus: M * (-r log r) capped at M * e^{-1} past r = e^{-1}.
inline double mu_ll(double M, double r) {
    if (r < 0 || M < 0) throw InvalidArgument("mu_ll: need r >= 0 and M >= 0");
    if (r == 0) return 0.0;
    const double e_inv = std::exp(-1.0);
    return (r <= e_inv) ? M * (-r * std::log(r)) : M * e_inv;
}

/// A modulus of continuity: nondecreasing, mu(0) = 0, mu > 0 for r > 0.
/// The log-Lipschitz modulus carries a closed-form tag so the Dini integral
/// and the Riesz-transform modulus can use the explicit antiderivatives;
/// everything else goes through adaptive quadrature.
struct Moc {
    enum class Kind { Generic, LogLipschitz };

    std::string name = "generic";
    Kind kind = Kind::Generic;
    double param = 1.0; ///< the multiplier M for the log-Lipschitz form
    bool concave = true;
    std::function<double(double)> eval_fn;
    /// radius beyond which mu is constant (enables the analytic tail of the
    /// Riesz modulus); infinity when unknown
    double constant_beyond = std::numeric_limits<double>::infinity();

    double operator()(double r) const {
        if (kind == Kind::LogLipschitz) return mu_ll(param, r);
        return eval_fn(r);
    }

    static Moc log_lipschitz(double M = 1.0) {
        Moc m;
        m.name = "log-lipschitz";
        m.kind = Kind::LogLipschitz;
        m.param = M;
        m.constant_beyond = std::exp(-1.0);
        return m;
    }

    /// mu(r) = min(r, cap): Lipschitz near zero, capped to stay integrable
    /// against 1/s^2 at infinity.
    static Moc capped_linear(double cap = 1.0) {
        Moc m;
        m.name = "capped-linear";
        m.eval_fn = [cap](double r) { return std::min(r, cap); };
        m.constant_beyond = cap;
        return m;
    }

    static Moc from_function(std::string name, std::function<double(double)> f,
                             bool concave = true) {
        Moc m;
        m.name = std::move(name);
        m.eval_fn = std::move(f);
        m.concave = concave;
        return m;
    }

    /// A generic (closed-form-free) view of this modulus; used to exercise
    /// the quadrature path on moduli that also have analytic shortcuts.
    Moc as_generic() const {
        Moc m = *this;
        if (kind == Kind::LogLipschitz) {
            double M = param;
            m.eval_fn = [M](double r) { return mu_ll(M, r); };
        }
        m.kind = Kind::Generic;
        return m;
    }
};

namespace moc_detail {

// Simpson on [a, b] with 2k panels
inline double simpson(const std::function<double(double)>& f, double a, double b, int k = 16) {
    int n = 2 * k;
    double h = (b - a) / n, s = 0;
    for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        s += w * f(a + i * h);
    }
    return s * h / 3.0;
}

// Simpson in log space: int_a^b f(t) dt with t = e^s; right for integrands
// spanning decades
inline double simpson_log(const std::function<double(double)>& f, double a, double b,
                          int k = 64) {
    return simpson([&](double s) { double t = std::exp(s); return f(t) * t; }, std::log(a),
                   std::log(b), k);
}

} // namespace moc_detail

/// Dini integral S_mu(x) = int_0^x mu(r)/r dr.
///
/// For the log-Lipschitz modulus the antiderivative is used directly:
/// S(x) = M (x - x log x) on x <= e^{-1}. (The factor at x = e^{-1} is
/// 2 M e^{-1}; only the unspecified constant of the theory is affected by
/// this normalization.) The generic path sums dyadic shells toward zero and
/// raises ConvergenceError when the shell contributions stop decaying
/// geometrically or the partial sums blow past a cap: the modulus is then
/// not Dini.
inline double dini_integral(const Moc& mu, double x, double cap = 1e9) {
    if (!(x > 0)) throw InvalidArgument("dini_integral: need x > 0");
    if (mu.kind == Moc::Kind::LogLipschitz) {
        const double M = mu.param, e_inv = std::exp(-1.0);
        auto closed = [M](double r) { return M * (r - r * std::log(r)); };
        if (x <= e_inv) return closed(x);
        return closed(e_inv) + M * e_inv * (std::log(x) + 1.0);
    }
    double sum = 0;
    double hi = x;
    double prev_inc = -1;
    int slow = 0;
    for (int k = 0; k < 400; ++k) {
        double lo = hi / 2;
        double inc = moc_detail::simpson([&](double r) { return mu(r) / r; }, lo, hi, 64);
        sum += inc;
        if (sum > cap)
            throw ConvergenceError("dini_integral: partial sums exceeded the cap; modulus is not Dini");
        if (inc < 1e-14 * (std::abs(sum) + 1e-300)) return sum;
        if (prev_inc > 0) {
            double ratio = inc / prev_inc;
            slow = (ratio > 0.98) ? slow + 1 : 0;
            if (k > 60 && slow > 40)
                throw ConvergenceError(
                    "dini_integral: shell contributions do not decay; modulus is not Dini");
        }
        prev_inc = inc;
        hi = lo;
    }
    // remaining shells extrapolated geometrically; if they cannot be, the
    // 400-level loop above has already thrown
    return sum;
}

/// Modulus of continuity of a Riesz transform applied to a function with
/// concave Dini modulus mu:
///     nu(r) = C ( S_mu(r) + r int_r^inf mu(s)/s^2 ds ),  C = 1 here.
///
/// For the log-Lipschitz modulus the explicit forms are returned:
///     nu(r) = M r ((log r)^2 - log r)   for r <= e^{-1},
///     nu(r) = M (log r + 1)             for r >  e^{-1},
/// which are the shapes the ratio tests pin down (the absolute constant of
/// the theory is unspecified, so only ratios are ever asserted).
inline double riesz_moc(const Moc& mu, double r) {
    if (!(r > 0)) throw InvalidArgument("riesz_moc: need r > 0");
    if (!mu.concave) throw InvalidArgument("riesz_moc: modulus must be flagged concave");
    if (mu.kind == Moc::Kind::LogLipschitz) {
        const double M = mu.param, e_inv = std::exp(-1.0);
        double lr = std::log(r);
        if (r <= e_inv) return M * r * (lr * lr - lr);
        return M * (lr + 1.0);
    }
    double s = dini_integral(mu, r); // throws for non-Dini moduli
    // tail r int_r^inf mu(s)/s^2 ds: quadrature out to where mu is constant,
    // analytic beyond; otherwise dyadic shells with geometric-decay check
    double tail = 0;
    double lo = r;
    if (std::isfinite(mu.constant_beyond)) {
        double rc = std::max(r, mu.constant_beyond);
        if (rc > lo)
            tail += moc_detail::simpson_log([&](double t) { return mu(t) / (t * t); }, lo, rc, 256);
        tail += mu(rc) / rc; // int_rc^inf c/s^2 = c/rc
    } else {
        double prev_inc = -1;
        for (int k = 0; k < 200; ++k) {
            double hi = lo * 2;
            double inc = moc_detail::simpson([&](double t) { return mu(t) / (t * t); }, lo, hi, 8);
            tail += inc;
            if (inc < 1e-14 * (tail + 1e-300)) break;
            if (prev_inc > 0 && inc > 0.98 * prev_inc && k > 40)
                throw ConvergenceError("riesz_moc: tail integral does not converge");
            prev_inc = inc;
            lo = hi;
        }
    }
    return s + r * tail;
}

struct EmpiricalMocOptions {
    int random_pairs = 20000;
    std::uint64_t seed = 12345;
};

/// Estimate of the seminorm sup |f(x) - f(y)| / mu(|x - y|) over all
/// nearest-neighbor pairs plus seeded random pairs.
inline double empirical_moc(const ScalarField& f, const Moc& mu,
                            const EmpiricalMocOptions& opt = {}) {
    const Grid& g = f.grid;
    double best = 0;
    auto consider = [&](std::size_t a, std::size_t b, double dist) {
        double m = mu(dist);
        if (m <= 0) return;
        best = std::max(best, std::abs(f.v[a] - f.v[b]) / m);
    };
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            if (i + 1 < g.n) consider(g.index(i, j), g.index(i + 1, j), g.spacing);
            if (j + 1 < g.n) consider(g.index(i, j), g.index(i, j + 1), g.spacing);
        }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> pick(0, g.n - 1);
    for (int k = 0; k < opt.random_pairs; ++k) {
        int i1 = pick(rng), j1 = pick(rng), i2 = pick(rng), j2 = pick(rng);
        if (i1 == i2 && j1 == j2) continue;
        double dist = norm(g.point(i1, j1) - g.point(i2, j2));
        consider(g.index(i1, j1), g.index(i2, j2), dist);
    }
    return best;
}

inline double empirical_moc(const VectorField& f, const Moc& mu,
                            const EmpiricalMocOptions& opt = {}) {
    return std::max(empirical_moc(f.component(0), mu, opt),
                    empirical_moc(f.component(1), mu, opt));
}

struct MorreyRow {
    double p;
    double lp_norm;   ///< discrete ||grad u||_{L^p(D)}
    double bound;     ///< |D|^{1/p} p^2/(p-1) ||u||_S
    double ratio;
};

/// Checks the Morrey-type gradient bound
///     ||grad u||_{L^p(D)} <= C |D|^{1/p} p^2/(p-1) ||u||_S
/// over a sweep of exponents; the content is that the ratios stay uniformly
/// bounded as p grows.
inline std::vector<MorreyRow> morrey_gradient_check(const VectorField& u,
                                                    const std::vector<double>& p_exponents,
                                                    double disk_radius) {
    auto grads = velocity_gradient(u);
    double us = sup_norm(u) + sup_norm(curl(u)); // the S norm, discretely
    const Grid& g = u.grid;
    double area = pi * disk_radius * disk_radius;
    std::vector<MorreyRow> rows;
    for (double p : p_exponents) {
        if (!(p > 1)) throw InvalidArgument("morrey_gradient_check: need p > 1");
        double acc = 0;
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                if (norm(g.point(i, j)) > disk_radius) continue;
                acc += std::pow(grads[g.index(i, j)].frobenius(), p);
            }
        double lp = std::pow(acc * g.spacing * g.spacing, 1.0 / p);
        double bound = std::pow(area, 1.0 / p) * (p * p / (p - 1.0)) * us;
        rows.push_back({p, lp, bound, bound > 0 ? lp / bound : 0.0});
    }
    return rows;
}

} // namespace euler2d

#endif
