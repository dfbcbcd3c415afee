#ifndef EULER2D_GRID_HPP
#define EULER2D_GRID_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "euler2d/common.hpp"

namespace euler2d {

/// Uniform node-centered grid on the truncated square [-L, L)^2.
/// Node (i, j) sits at (-L + i*h, -L + j*h) with h = 2L/N, so the grid is
/// the natural discretization of the plane restricted to a box; fields are
/// extended by zero (or damped) outside it by the convolution operators.
struct Grid {
    int n = 0;            ///< nodes per side, even, >= 8
    double half_width = 0; ///< L
    double spacing = 0;    ///< h = 2L/N

    Grid() = default;
    Grid(int nodes_per_side, double L) : n(nodes_per_side), half_width(L) {
        if (n < 8) throw InvalidArgument("grid: need at least 8 nodes per side, got " + std::to_string(n));
        if (n % 2 != 0) throw InvalidArgument("grid: node count must be even, got " + std::to_string(n));
        if (!(L > 0)) throw InvalidArgument("grid: half width must be positive");
        spacing = 2.0 * L / n;
    }

    std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n + i; }

    Vec2 point(int i, int j) const {
        return {-half_width + i * spacing, -half_width + j * spacing};
    }

    /// Exact inverse of point() on grid nodes.
    std::pair<int, int> node_of(Vec2 p) const {
        int i = static_cast<int>(std::llround((p.x + half_width) / spacing));
        int j = static_cast<int>(std::llround((p.y + half_width) / spacing));
        return {i, j};
    }

    bool contains_index(int i, int j) const {
        return i >= 0 && i < n && j >= 0 && j < n;
    }

    bool operator==(const Grid& o) const {
        return n == o.n && half_width == o.half_width;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

/// Indices of nodes with |x|_inf <= half (the "probe box"). Convergence and
/// residual metrics are evaluated here, away from the truncation edge where
/// cutoff supports leave the box.
inline std::vector<std::size_t> probe_nodes(const Grid& g, double half) {
    std::vector<std::size_t> idx;
    const double tol = 1e-12 * g.half_width;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            Vec2 p = g.point(i, j);
            if (std::abs(p.x) <= half + tol && std::abs(p.y) <= half + tol)
                idx.push_back(g.index(i, j));
        }
    if (idx.empty()) throw InvalidArgument("probe box contains no grid nodes");
    return idx;
}

} // namespace euler2d

#endif
