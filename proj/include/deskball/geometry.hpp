#pragma once

#include <cmath>

namespace deskball {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    double length() const { return std::sqrt(x * x + y * y); }
    constexpr double length2() const { return x * x + y * y; }
    double dist(Vec2 o) const { return (*this - o).length(); }
    bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Headings are kept on a 2^-10 degree lattice. On that lattice adding 180
// is exact, so rotating the whole field by half a turn maps every heading,
// and every unit vector derived from one, onto an exact negation. Match
// replays rely on this to be bit-identical under mirroring.
inline constexpr double kAngleQuantum = 1.0 / 1024.0;

double quantize_deg(double deg);

/// Wraps into [-180, 180). Exact for lattice values.
double normalize_deg(double deg);

/// Unit vector for a heading; unit_from_deg(h + 180) == -unit_from_deg(h) exactly.
Vec2 unit_from_deg(double deg);

/// Lattice heading of a vector in [-180, 180); 0 for the zero vector.
double heading_deg(Vec2 v);

/// Absolute difference between two headings, in [0, 180].
double angle_between_deg(double a, double b);

/// Distance from p to the segment [a, b].
double segment_distance(Vec2 p, Vec2 a, Vec2 b);

} // namespace deskball
