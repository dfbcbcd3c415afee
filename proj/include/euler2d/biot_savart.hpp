#ifndef EULER2D_BIOT_SAVART_HPP
#define EULER2D_BIOT_SAVART_HPP

#include <cstdio>
#include <string>
#include <vector>

#include "euler2d/common.hpp"
#include "euler2d/convolve.hpp"
#include "euler2d/cutoff.hpp"
#include "euler2d/field.hpp"
#include "euler2d/kernel.hpp"

namespace euler2d {

struct BsOptions {
    bool strict = false;            ///< escalate the edge-mass truncation warning
    ConvMode mode = ConvMode::Auto;
    bool* truncation_warning = nullptr; ///< set when edge mass was seen (non-strict)
};

namespace detail {

inline bool mass_near_edge(const ScalarField& w, int ring) {
    const int n = w.grid.n;
    double peak = sup_norm(w);
    if (peak == 0) return false;
    double thr = 1e-12 * peak;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (i < ring || i >= n - ring || j < ring || j >= n - ring)
                if (std::abs(w.at(i, j)) > thr) return true;
    return false;
}

} // namespace detail

/// Classical Biot-Savart law K[omega] = K * omega, valid for vorticity that
/// is (numerically) compactly supported inside the declared radius. The
/// singular cell contributes zero by antisymmetry of K over a centered
/// square.
inline VectorField classical_bs(const ScalarField& omega, double support_radius,
                                const BsOptions& opt = {}) {
    if (support_radius > omega.grid.half_width)
        throw DomainError("classical_bs: declared support exceeds the grid box");
    if (detail::mass_near_edge(omega, 2)) {
        if (opt.strict)
            throw DomainError("classical_bs: vorticity mass within 2 cells of the grid edge");
        // non-strict: proceed; the truncation error is the caller's to judge
        if (opt.truncation_warning) *opt.truncation_warning = true;
    }
    return convolve(omega, [](Vec2 z) { return kernel::biot_savart(z); }, opt.mode);
}

/// Partial renormalized velocity (a_R K) * omega at one scale R.
/// Admissibility: the cutoff support around any probe point must fit the
/// truncation box, enforced as R <= L/2.
inline VectorField cutoff_convolve(const ScalarField& omega, const RadialCutoff& a, double R,
                                   ConvMode mode = ConvMode::Auto) {
    if (!(R > 0)) throw InvalidArgument("cutoff_convolve: scale must be positive");
    if (R > omega.grid.half_width / 2.0)
        throw DomainError("cutoff_convolve: cutoff scale " + std::to_string(R) +
                          " too large for grid box (need R <= L/2)");
    return convolve(
        omega,
        [&a, R](Vec2 z) {
            double c = a.profile(norm(z) / R);
            if (c == 0.0) return Vec2{};
            return c * kernel::biot_savart(z);
        },
        mode);
}

/// omega(a_R K) * u evaluated with the analytically differentiated kernel:
/// the delta part contributes a_R(0) u = u, the rest is the smooth radial
/// annulus kernel grad^perp a_R . K.
inline VectorField curl_kernel_convolve(const VectorField& u, const RadialCutoff& a, double R,
                                        ConvMode mode = ConvMode::Auto) {
    if (!(R > 0)) throw InvalidArgument("curl_kernel_convolve: scale must be positive");
    if (R > u.grid.half_width / 2.0)
        throw DomainError("curl_kernel_convolve: cutoff scale too large for grid box");
    VectorField corr = convolve_components(
        u, [&a, R](Vec2 z) { return kernel::curl_cutoff_kernel(a, R, z); }, mode);
    VectorField out(u.grid);
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = u.v[k] + corr.v[k];
    return out;
}

/// Cauchy history of a renormalized Biot-Savart evaluation over a scale
/// schedule. Serialized as structured text, one row per scale.
struct ConvergenceReport {
    std::vector<double> scales;
    std::vector<double> sup_distance; ///< sup |u_{R_k} - u_{R_{k-1}}| on probe box; first entry 0
    std::vector<Vec2> probe_mean;
    double probe_half_width = 0;
    double tolerance = 0;
    bool converged = false;
    std::string cutoff_profile;

    std::string to_text() const;
};

struct RenormalizedResult {
    VectorField limit;
    ConvergenceReport report;
};

struct RenormalizeOptions {
    double tolerance = 1e-6;      ///< sup-difference threshold on the probe box
    double probe_half_width = 0;  ///< 0 = default L/4
    bool stop_at_convergence = true;
    ConvMode mode = ConvMode::Auto;
};

/// Evaluates (a_R K) * domega over an increasing schedule of scales and
/// declares convergence when successive iterates are Cauchy on the central
/// probe box. Non-convergence within the schedule is reported, not thrown:
/// the theory only guarantees subsequential limits for general fields.
inline RenormalizedResult renormalized_bs(const ScalarField& domega, const RadialCutoff& a,
                                          const std::vector<double>& schedule,
                                          const RenormalizeOptions& opt = {}) {
    if (schedule.empty()) throw InvalidArgument("renormalized_bs: empty scale schedule");
    for (std::size_t k = 1; k < schedule.size(); ++k)
        if (!(schedule[k] > schedule[k - 1]))
            throw InvalidArgument("renormalized_bs: schedule must be strictly increasing");

    const Grid& g = domega.grid;
    double probe = opt.probe_half_width > 0 ? opt.probe_half_width : g.half_width / 4.0;
    auto box = probe_nodes(g, probe);

    RenormalizedResult res;
    res.report.probe_half_width = probe;
    res.report.tolerance = opt.tolerance;
    res.report.cutoff_profile = a.profile_name;

    VectorField prev;
    for (double R : schedule) {
        VectorField cur = cutoff_convolve(domega, a, R, opt.mode);
        double dist = res.report.scales.empty() ? 0.0 : sup_norm_on(cur - prev, box);
        res.report.scales.push_back(R);
        res.report.sup_distance.push_back(dist);
        res.report.probe_mean.push_back(mean_on(cur, box));
        prev = std::move(cur);
        if (res.report.scales.size() >= 2 && dist < opt.tolerance && opt.stop_at_convergence)
            break;
    }
    res.report.converged = res.report.sup_distance.size() >= 2 &&
                           res.report.sup_distance.back() < opt.tolerance;
    res.limit = std::move(prev);
    return res;
}

inline std::string ConvergenceReport::to_text() const {
    std::string s;
    s += "# renormalized Biot-Savart convergence report\n";
    s += "# cutoff_profile " + cutoff_profile + "\n";
    s += "# probe_half_width " + std::to_string(probe_half_width) + "\n";
    s += "# tolerance " + std::to_string(tolerance) + "\n";
    s += "# columns: R sup_distance probe_mean_x probe_mean_y\n";
    char buf[160];
    for (std::size_t k = 0; k < scales.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", scales[k], sup_distance[k],
                      probe_mean[k].x, probe_mean[k].y);
        s += buf;
    }
    s += converged ? "converged true\n" : "converged false\n";
    return s;
}

} // namespace euler2d

#endif
