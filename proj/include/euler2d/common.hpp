#ifndef EULER2D_COMMON_HPP
#define EULER2D_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace euler2d {

inline constexpr double pi = 3.14159265358979323846;

/// Thrown when an argument violates an operation's precondition
/// (bad grid size, inadmissible cutoff scale, malformed config, ...).
struct InvalidArgument : std::runtime_error {
    explicit InvalidArgument(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a point or scale leaves the region an operator can cover:
/// out-of-domain interpolation, cutoff support exceeding the grid box,
/// vorticity mass touching the boundary in strict mode, frame shifts
/// exiting the box.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when an iteration fails to converge (Picard fixed point) or a
/// quadrature detects divergence (non-Dini modulus).
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return s * a; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double norm_sq(Vec2 a) { return a.x * a.x + a.y * a.y; }

/// Counterclockwise quarter turn: x^perp = (-x2, x1).
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// 2x2 matrix, row-major: m(row, col).
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    double frobenius() const {
        return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
    }
};

inline Mat2 operator+(Mat2 a, Mat2 b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}
inline Mat2 operator*(double s, Mat2 a) {
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

} // namespace euler2d

#endif
