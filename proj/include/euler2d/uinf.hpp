#ifndef EULER2D_UINF_HPP
#define EULER2D_UINF_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "euler2d/common.hpp"

namespace euler2d {

/// The weak velocity at infinity: a continuous path with U(0) = 0, stored
/// as samples with piecewise-linear interpolation. The time integral is
/// then piecewise quadratic and exact; the derivative is piecewise constant
/// and reported at sample times by centered differencing.
struct UInfinityPath {
    std::vector<double> times;
    std::vector<Vec2> values;

    UInfinityPath() : times{0.0}, values{Vec2{}} {}

    UInfinityPath(std::vector<double> t, std::vector<Vec2> v)
        : times(std::move(t)), values(std::move(v)) {
        if (times.empty() || times.size() != values.size())
            throw InvalidArgument("uinf path: need matching, nonempty sample arrays");
        if (times.front() != 0.0) throw InvalidArgument("uinf path: samples must start at t = 0");
        if (norm(values.front()) != 0.0) throw InvalidArgument("uinf path: U(0) must be 0");
        for (std::size_t k = 1; k < times.size(); ++k)
            if (!(times[k] > times[k - 1]))
                throw InvalidArgument("uinf path: times must be strictly increasing");
    }

    static UInfinityPath zero() { return UInfinityPath(); }

    /// U(t) = rate * t, sampled at the two endpoints.
    static UInfinityPath linear(Vec2 rate, double t_final) {
        return UInfinityPath({0.0, t_final}, {Vec2{}, t_final * rate});
    }

    bool is_zero() const {
        for (Vec2 v : values)
            if (v.x != 0.0 || v.y != 0.0) return false;
        return true;
    }

    Vec2 value(double t) const {
        if (t <= times.front()) return values.front();
        if (t >= times.back()) return values.back();
        std::size_t k = segment(t);
        double s = (t - times[k]) / (times[k + 1] - times[k]);
        return (1 - s) * values[k] + s * values[k + 1];
    }

    /// Exact integral int_0^t U(s) ds of the piecewise-linear path.
    Vec2 integral(double t) const {
        Vec2 acc{};
        for (std::size_t k = 0; k + 1 < times.size(); ++k) {
            double a = times[k], b = times[k + 1];
            if (t <= a) break;
            double hi = std::min(t, b);
            double s1 = (hi - a);
            Vec2 va = values[k];
            Vec2 slope = (1.0 / (b - a)) * (values[k + 1] - values[k]);
            acc += s1 * va + (0.5 * s1 * s1) * slope;
        }
        if (t > times.back()) acc += (t - times.back()) * values.back();
        return acc;
    }

    /// Centered-difference derivative at sample index k (one-sided at the
    /// ends). For a piecewise-linear path this is the average of the two
    /// adjacent slopes.
    Vec2 derivative_at(std::size_t k) const {
        if (times.size() == 1) return {};
        if (k == 0)
            return (1.0 / (times[1] - times[0])) * (values[1] - values[0]);
        if (k + 1 == times.size())
            return (1.0 / (times[k] - times[k - 1])) * (values[k] - values[k - 1]);
        return (1.0 / (times[k + 1] - times[k - 1])) * (values[k + 1] - values[k - 1]);
    }

    /// Derivative at an arbitrary time: slope of the containing segment.
    Vec2 derivative(double t) const {
        if (times.size() == 1) return {};
        std::size_t k = segment(std::min(std::max(t, times.front()), times.back()));
        return (1.0 / (times[k + 1] - times[k])) * (values[k + 1] - values[k]);
    }

    void save(const std::string& path) const {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
        std::fprintf(f, "# uinf path: t Ux Uy\n");
        for (std::size_t k = 0; k < times.size(); ++k)
            std::fprintf(f, "%.17g %.17g %.17g\n", times[k], values[k].x, values[k].y);
        std::fclose(f);
    }

    static UInfinityPath load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidArgument("cannot open '" + path + "'");
        std::string line;
        std::vector<double> t;
        std::vector<Vec2> v;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            double a, b, c;
            if (std::sscanf(line.c_str(), "%lg %lg %lg", &a, &b, &c) != 3)
                throw InvalidArgument("'" + path + "': bad path row");
            t.push_back(a);
            v.push_back({b, c});
        }
        return UInfinityPath(std::move(t), std::move(v));
    }

  private:
    std::size_t segment(double t) const {
        std::size_t k = 0;
        while (k + 2 < times.size() && t >= times[k + 1]) ++k;
        return k;
    }
};

} // namespace euler2d

#endif
