#include "deskball/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace deskball {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Heading of a vector in the closed upper half plane, in [0, 180].
double upper_heading(Vec2 v) { return quantize_deg(std::atan2(v.y, v.x) * kRadToDeg); }

bool in_lower_half(Vec2 v) { return v.y < 0.0 || (v.y == 0.0 && v.x < 0.0); }

} // namespace

double quantize_deg(double deg) { return std::round(deg / kAngleQuantum) * kAngleQuantum; }

double normalize_deg(double deg) {
    if (!std::isfinite(deg)) return 0.0;
    if (deg >= 180.0 || deg < -180.0) {
        deg = std::fmod(deg, 360.0);
        if (deg >= 180.0) deg -= 360.0;
        if (deg < -180.0) deg += 360.0;
    }
    return deg;
}

Vec2 unit_from_deg(double deg) {
    double d = normalize_deg(quantize_deg(deg));
    bool flip = d < 0.0;
    if (flip) d += 180.0;
    Vec2 u{std::cos(d * kDegToRad), std::sin(d * kDegToRad)};
    return flip ? -u : u;
}

double heading_deg(Vec2 v) {
    if (v.x == 0.0 && v.y == 0.0) return 0.0;
    if (in_lower_half(v)) return normalize_deg(upper_heading(-v) + 180.0);
    return normalize_deg(upper_heading(v));
}

double angle_between_deg(double a, double b) { return std::abs(normalize_deg(a - b)); }

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = ab.length2();
    if (len2 <= 0.0) return p.dist(a);
    double t = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
    return p.dist(a + ab * t);
}

} // namespace deskball
