#pragma once
// Shared fixtures and independent oracles for the unit and acceptance tests.

#include <cmath>
#include <random>

#include "deskball/world.hpp"

namespace deskball::testing {

/// Everybody off the pitch, ball at rest on the centre spot.
inline WorldState empty_field() {
    WorldState s = initial_state();
    for (auto& p : s.players) {
        p.active = false;
        p.velocity = {};
    }
    s.ball = {};
    s.ball_owner.reset();
    return s;
}

inline PlayerState& put(WorldState& s, Side side, int unum, Vec2 pos, double body = 0.0) {
    PlayerState& p = s.player(side, unum);
    p.active = true;
    p.position = pos;
    p.velocity = {};
    p.body_deg = quantize_deg(body);
    p.home_position = pos;
    p.stamina = kDefaultPhysics.stamina_max;
    return p;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec2 random_point(std::mt19937_64& rng, double margin = 0.0) {
    return {uniform(rng, -52.5 + margin, 52.5 - margin), uniform(rng, -34.0 + margin, 34.0 - margin)};
}

/// Random field with `left` and `right` active players (numbers 1..n) and
/// a ball at rest unless `moving`.
inline WorldState random_field(std::mt19937_64& rng, int left, int right, bool moving = false) {
    WorldState s = empty_field();
    for (int u = 1; u <= left; ++u) put(s, Side::left, u, random_point(rng, 1.0), uniform(rng, -180.0, 180.0));
    for (int u = 1; u <= right; ++u) put(s, Side::right, u, random_point(rng, 1.0), uniform(rng, -180.0, 180.0));
    s.ball.position = random_point(rng, 2.0);
    if (moving) s.ball.velocity = unit_from_deg(uniform(rng, -180.0, 180.0)) * uniform(rng, 0.0, 3.0);
    refresh_home_positions(s);
    return s;
}

/// Can `p`, starting from rest, get `target` inside its kickable area within
/// `cycles` cycles? Turns once if needed, then dashes at full power with the
/// player speed law v' = min(vmax, v * decay + accel).
inline bool oracle_reachable(const PlayerState& p, Vec2 target, int cycles, const Physics& phys = kDefaultPhysics) {
    const double gap = std::hypot(target.x - p.position.x, target.y - p.position.y) - phys.kickable_area;
    if (gap <= 0.0) return true;
    int dashes = cycles;
    if (angle_between_deg(heading_deg(target - p.position), p.body_deg) > phys.turn_threshold_deg) --dashes;
    double v = 0.0;
    double covered = 0.0;
    for (int k = 0; k < dashes; ++k) {
        v = std::min(phys.player_speed_max, v * phys.player_decay + phys.player_accel_max);
        covered += v;
        if (covered >= gap - 1e-12) return true;
    }
    return false;
}

/// Cycle-by-cycle scan: roll the ball one cycle at a time and stop at the
/// first cycle the player can be there.
inline int oracle_intercept(const PlayerState& p, const BallState& ball, const Physics& phys = kDefaultPhysics,
                            int horizon = -1) {
    if (horizon < 0) horizon = phys.intercept_horizon;
    Vec2 pos = ball.position;
    Vec2 vel = ball.velocity;
    for (int c = 0; c < horizon; ++c) {
        if (oracle_reachable(p, pos, c, phys)) return c;
        pos = pos + vel;
        vel = vel * phys.ball_decay;
    }
    return horizon;
}

} // namespace deskball::testing
