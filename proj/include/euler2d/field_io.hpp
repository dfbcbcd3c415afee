#ifndef EULER2D_FIELD_IO_HPP
#define EULER2D_FIELD_IO_HPP

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "euler2d/common.hpp"
#include "euler2d/field.hpp"

namespace euler2d {
namespace io {

// Field file formats.
//
// Text: header line "grid N L", then N^2 rows of node values (1 column for
// scalar fields, 2 for vector fields), row-major. Values are written with
// 17 significant digits so the round-trip is bit exact.
//
// Binary: 16-byte header (12-byte magic + u32 version), then u32 N,
// u32 component count, f64 L, then the raw little-endian f64 payload.

inline constexpr char binary_magic[12] = {'E', 'U', 'L', 'E', 'R', '2',
                                          'D', '-', 'F', 'L', 'D', '\0'};
inline constexpr std::uint32_t binary_version = 1;

namespace detail {

inline void write_text_header(std::FILE* f, const Grid& g) {
    std::fprintf(f, "grid %d %.17g\n", g.n, g.half_width);
}

struct TextHeader {
    int n;
    double L;
};

inline TextHeader read_text_header(std::istream& in, const std::string& path) {
    std::string tag;
    TextHeader h{};
    if (!(in >> tag >> h.n >> h.L) || tag != "grid")
        throw InvalidArgument("field file '" + path + "': bad header");
    return h;
}

struct FileGuard {
    std::FILE* f;
    ~FileGuard() { if (f) std::fclose(f); }
};

inline std::FILE* open_write(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
    return f;
}

} // namespace detail

inline void save_text(const ScalarField& fld, const std::string& path) {
    detail::FileGuard fg{detail::open_write(path)};
    detail::write_text_header(fg.f, fld.grid);
    for (double v : fld.v) std::fprintf(fg.f, "%.17g\n", v);
}

inline void save_text(const VectorField& fld, const std::string& path) {
    detail::FileGuard fg{detail::open_write(path)};
    detail::write_text_header(fg.f, fld.grid);
    for (Vec2 v : fld.v) std::fprintf(fg.f, "%.17g %.17g\n", v.x, v.y);
}

namespace detail {

inline void save_binary_impl(const Grid& g, const double* data, std::uint32_t ncomp,
                             std::size_t count, const std::string& path) {
    FileGuard fg{open_write(path)};
    std::fwrite(binary_magic, 1, sizeof binary_magic, fg.f);
    std::fwrite(&binary_version, sizeof binary_version, 1, fg.f);
    std::uint32_t n = static_cast<std::uint32_t>(g.n);
    double L = g.half_width;
    std::fwrite(&n, sizeof n, 1, fg.f);
    std::fwrite(&ncomp, sizeof ncomp, 1, fg.f);
    std::fwrite(&L, sizeof L, 1, fg.f);
    std::fwrite(data, sizeof(double), count, fg.f);
}

struct BinaryBody {
    Grid grid;
    std::uint32_t ncomp;
    std::vector<double> data;
};

inline BinaryBody load_binary_impl(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw InvalidArgument("cannot open '" + path + "'");
    FileGuard fg{f};
    char magic[12];
    std::uint32_t version = 0, n = 0, ncomp = 0;
    double L = 0;
    if (std::fread(magic, 1, 12, f) != 12 || std::memcmp(magic, binary_magic, 12) != 0)
        throw InvalidArgument("'" + path + "' is not a binary field file");
    if (std::fread(&version, sizeof version, 1, f) != 1 || version != binary_version)
        throw InvalidArgument("'" + path + "': unsupported version");
    if (std::fread(&n, sizeof n, 1, f) != 1 || std::fread(&ncomp, sizeof ncomp, 1, f) != 1 ||
        std::fread(&L, sizeof L, 1, f) != 1)
        throw InvalidArgument("'" + path + "': truncated header");
    BinaryBody b;
    b.grid = Grid(static_cast<int>(n), L);
    b.ncomp = ncomp;
    b.data.resize(b.grid.size() * ncomp);
    if (std::fread(b.data.data(), sizeof(double), b.data.size(), f) != b.data.size())
        throw InvalidArgument("'" + path + "': truncated payload");
    return b;
}

inline bool looks_binary(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw InvalidArgument("cannot open '" + path + "'");
    FileGuard fg{f};
    char magic[12] = {};
    std::size_t got = std::fread(magic, 1, 12, f);
    return got == 12 && std::memcmp(magic, binary_magic, 12) == 0;
}

} // namespace detail

inline void save_binary(const ScalarField& fld, const std::string& path) {
    detail::save_binary_impl(fld.grid, fld.v.data(), 1, fld.v.size(), path);
}

inline void save_binary(const VectorField& fld, const std::string& path) {
    detail::save_binary_impl(fld.grid, &fld.v[0].x, 2, fld.v.size() * 2, path);
}

/// Loads either format (sniffed by magic).
inline ScalarField load_scalar(const std::string& path) {
    if (detail::looks_binary(path)) {
        auto b = detail::load_binary_impl(path);
        if (b.ncomp != 1) throw InvalidArgument("'" + path + "': expected a scalar field");
        ScalarField out(b.grid);
        out.v = std::move(b.data);
        return out;
    }
    std::ifstream in(path);
    auto h = detail::read_text_header(in, path);
    ScalarField out(Grid{h.n, h.L});
    for (double& v : out.v)
        if (!(in >> v)) throw InvalidArgument("'" + path + "': truncated field data");
    return out;
}

inline VectorField load_vector(const std::string& path) {
    if (detail::looks_binary(path)) {
        auto b = detail::load_binary_impl(path);
        if (b.ncomp != 2) throw InvalidArgument("'" + path + "': expected a vector field");
        VectorField out(b.grid);
        std::memcpy(&out.v[0].x, b.data.data(), b.data.size() * sizeof(double));
        return out;
    }
    std::ifstream in(path);
    auto h = detail::read_text_header(in, path);
    VectorField out(Grid{h.n, h.L});
    for (Vec2& v : out.v)
        if (!(in >> v.x >> v.y)) throw InvalidArgument("'" + path + "': truncated field data");
    return out;
}

} // namespace io
} // namespace euler2d

#endif
