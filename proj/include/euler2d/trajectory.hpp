#ifndef EULER2D_TRAJECTORY_HPP
#define EULER2D_TRAJECTORY_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "euler2d/common.hpp"
#include "euler2d/cutoff.hpp"
#include "euler2d/field.hpp"
#include "euler2d/field_io.hpp"
#include "euler2d/uinf.hpp"

namespace euler2d {

struct Snapshot {
    double t = 0;
    ScalarField omega;
    VectorField u;
};

/// Time-indexed (t, omega, u) snapshots sharing one grid, plus the weak
/// velocity at infinity the run was driven with. Immutable once a run
/// completes.
struct Trajectory {
    Grid grid;
    std::vector<Snapshot> snaps;
    UInfinityPath uinf;
    RadialCutoff cutoff;  ///< cutoff the run used (metadata)
    double dt = 0;        ///< solver step (metadata)
    /// set by the forward frame transform so the inverse can restore it
    std::optional<UInfinityPath> removed_uinf;

    const Snapshot& at_time(double t) const {
        for (const auto& s : snaps)
            if (std::abs(s.t - t) <= 1e-12 * (1.0 + std::abs(t))) return s;
        throw InvalidArgument("trajectory: no snapshot at t = " + std::to_string(t));
    }

    const Snapshot& front() const { return snaps.front(); }
    const Snapshot& back() const { return snaps.back(); }

    void validate() const {
        if (snaps.empty()) throw InvalidArgument("trajectory: empty");
        if (snaps.front().t != 0.0) throw InvalidArgument("trajectory: must start at t = 0");
        // transport preserves the vorticity sup norm; a small allowance
        // covers resampling of analytic data against a shifted lattice
        double w0 = sup_norm(snaps.front().omega);
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            if (snaps[k].omega.grid != grid || snaps[k].u.grid != grid)
                throw InvalidArgument("trajectory: snapshots on mismatched grids");
            if (k > 0 && !(snaps[k].t > snaps[k - 1].t))
                throw InvalidArgument("trajectory: times not strictly increasing");
            if (sup_norm(snaps[k].omega) > w0 * (1.0 + 0.02) + 1e-12)
                throw InvalidArgument("trajectory: vorticity sup norm grew beyond transport");
        }
    }

    /// Directory layout: config.txt (metadata), uinf.txt, and per-snapshot
    /// omega_k / u_k field files (binary).
    void save(const std::string& dir) const {
        namespace fs = std::filesystem;
        fs::create_directories(dir);
        {
            std::FILE* f = std::fopen((dir + "/config.txt").c_str(), "wb");
            if (!f) throw InvalidArgument("cannot write trajectory config");
            std::fprintf(f, "grid %d %.17g\n", grid.n, grid.half_width);
            std::fprintf(f, "snapshots %zu\n", snaps.size());
            std::fprintf(f, "dt %.17g\n", dt);
            std::fprintf(f, "cutoff %s %.17g %.17g %.17g\n", cutoff.profile_name.c_str(),
                         cutoff.scale, cutoff.inner, cutoff.outer);
            for (std::size_t k = 0; k < snaps.size(); ++k)
                std::fprintf(f, "t %zu %.17g\n", k, snaps[k].t);
            std::fclose(f);
        }
        uinf.save(dir + "/uinf.txt");
        char name[64];
        for (std::size_t k = 0; k < snaps.size(); ++k) {
            std::snprintf(name, sizeof name, "/omega_%06zu.fld", k);
            io::save_binary(snaps[k].omega, dir + name);
            std::snprintf(name, sizeof name, "/u_%06zu.fld", k);
            io::save_binary(snaps[k].u, dir + name);
        }
    }

    static Trajectory load(const std::string& dir) {
        std::ifstream in(dir + "/config.txt");
        if (!in) throw InvalidArgument("cannot open trajectory config in '" + dir + "'");
        Trajectory traj;
        std::string key;
        std::size_t count = 0;
        std::vector<double> times;
        while (in >> key) {
            if (key == "grid") {
                int n; double L;
                in >> n >> L;
                traj.grid = Grid(n, L);
            } else if (key == "snapshots") {
                in >> count;
            } else if (key == "dt") {
                in >> traj.dt;
            } else if (key == "cutoff") {
                std::string prof; double sc, r0, r1;
                in >> prof >> sc >> r0 >> r1;
                traj.cutoff = RadialCutoff(prof, sc, r0, r1);
            } else if (key == "t") {
                std::size_t k; double t;
                in >> k >> t;
                times.push_back(t);
            }
        }
        if (times.size() != count) throw InvalidArgument("trajectory config: bad snapshot list");
        traj.uinf = UInfinityPath::load(dir + "/uinf.txt");
        char name[64];
        for (std::size_t k = 0; k < count; ++k) {
            Snapshot s;
            s.t = times[k];
            std::snprintf(name, sizeof name, "/omega_%06zu.fld", k);
            s.omega = io::load_scalar(dir + name);
            std::snprintf(name, sizeof name, "/u_%06zu.fld", k);
            s.u = io::load_vector(dir + name);
            traj.snaps.push_back(std::move(s));
        }
        traj.validate();
        return traj;
    }
};

} // namespace euler2d

#endif
