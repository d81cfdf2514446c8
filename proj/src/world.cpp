#include "deskball/world.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace deskball {

namespace {

constexpr std::array<Vec2, kTeamSize> kBaseFormation{{
    {-50.0, 0.0},
    {-36.0, -20.0},
    {-38.0, -7.0},
    {-38.0, 7.0},
    {-36.0, 20.0},
    {-20.0, -22.0},
    {-22.0, -8.0},
    {-22.0, 8.0},
    {-20.0, 22.0},
    {-4.0, -8.0},
    {-4.0, 8.0},
}};

Vec2 orient(Vec2 v, Side side) { return side == Side::left ? v : -v; }

Vec2 clamp_to_box(Vec2 p, double half_x, double half_y) {
    return {std::clamp(p.x, -half_x, half_x), std::clamp(p.y, -half_y, half_y)};
}

Vec2 cap_speed(Vec2 v, double max_speed) {
    double speed = v.length();
    if (speed > max_speed && speed > 0.0) return v * (max_speed / speed);
    return v;
}

double facing_opponent_goal(Side side) { return side == Side::left ? 0.0 : -180.0; }

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv_mix(std::uint64_t h, double v) {
    if (v == 0.0) v = 0.0;  // fold -0.0 onto +0.0
    return fnv_mix(h, std::bit_cast<std::uint64_t>(v));
}

} // namespace

std::string_view to_string(Side s) { return s == Side::left ? "left" : "right"; }

Vec2 formation_position(int unum, Vec2 ball, const Physics& phys) {
    if (unum < 1 || unum > kTeamSize) throw std::out_of_range("uniform number must be in 1..11");
    const Vec2 base = kBaseFormation[static_cast<std::size_t>(unum - 1)];
    if (unum == 1) {
        return {-phys.half_length + 2.5, std::clamp(0.2 * ball.y, -5.0, 5.0)};
    }
    double shift = 0.6 * ball.x + 0.2 * std::max(0.0, ball.x);
    double x = std::clamp(base.x + shift, -phys.half_length + 4.5, phys.half_length - 6.5);
    double y = std::clamp(base.y + 0.3 * ball.y, -phys.half_width + 2.0, phys.half_width - 2.0);
    return {x, y};
}

void refresh_home_positions(WorldState& state, const Physics& phys) {
    for (auto& p : state.players) {
        Vec2 ball = orient(state.ball.position, p.side);
        p.home_position = orient(formation_position(p.unum, ball, phys), p.side);
    }
}

void kickoff_reset(WorldState& state, std::optional<Side> kicking_side, const Physics& phys) {
    state.ball = BallState{};
    for (auto& p : state.players) {
        p.position = orient(formation_position(p.unum, Vec2{}, phys), p.side);
        p.home_position = p.position;
        p.velocity = Vec2{};
        p.body_deg = facing_opponent_goal(p.side);
    }
    if (kicking_side) {
        auto& taker = state.player(*kicking_side, 10);
        taker.position = orient(Vec2{-0.5, 0.0}, *kicking_side);
    }
    state.ball_owner = kickable_owner(state, phys);
}

WorldState initial_state(const Physics& phys) {
    WorldState s;
    for (int i = 0; i < kPlayerCount; ++i) {
        auto& p = s.players[static_cast<std::size_t>(i)];
        p.side = i < kTeamSize ? Side::left : Side::right;
        p.unum = i % kTeamSize + 1;
        p.stamina = phys.stamina_max;
    }
    kickoff_reset(s, std::nullopt, phys);
    return s;
}

bool is_kickable(const PlayerState& player, const BallState& ball, const Physics& phys) {
    return player.position.dist(ball.position) <= phys.kickable_area;
}

bool in_field(Vec2 p, const Physics& phys) {
    return std::abs(p.x) <= phys.half_length && std::abs(p.y) <= phys.half_width;
}

double dash_reach(int cycles, const Physics& phys) {
    double speed = 0.0;
    double total = 0.0;
    for (int i = 0; i < cycles; ++i) {
        speed = std::min(speed + phys.player_accel_max, phys.player_speed_max);
        total += speed;
        speed *= phys.player_decay;
    }
    return total;
}

Vec2 ball_position_at(const BallState& ball, int cycles, const Physics& phys) {
    if (cycles <= 0) return ball.position;
    double factor = (1.0 - std::pow(phys.ball_decay, cycles)) / (1.0 - phys.ball_decay);
    return ball.position + ball.velocity * factor;
}

namespace {

bool needs_turn(const PlayerState& player, Vec2 target, const Physics& phys) {
    return angle_between_deg(heading_deg(target - player.position), player.body_deg) > phys.turn_threshold_deg;
}

// Dash cycles needed to cover `gap` metres; first dash is accel-limited, later ones run at top speed.
int dash_cycles_for(double gap, const Physics& phys) {
    if (gap <= 0.0) return 0;
    double first = std::min(phys.player_accel_max, phys.player_speed_max);
    if (gap <= first) return 1;
    double sustained = std::min(phys.player_speed_max, phys.player_speed_max * phys.player_decay + phys.player_accel_max);
    return 1 + static_cast<int>(std::ceil((gap - first) / sustained));
}

} // namespace

int min_cycles_to_point(const PlayerState& player, Vec2 target, const Physics& phys) {
    double dist = player.position.dist(target);
    if (dist <= phys.kickable_area) return 0;
    int turn = needs_turn(player, target, phys) ? 1 : 0;
    return turn + dash_cycles_for(dist - phys.kickable_area, phys);
}

int min_cycles_to_moving_ball(const PlayerState& player, const BallState& ball, const Physics& phys, int horizon) {
    if (horizon < 0) horizon = phys.intercept_horizon;
    Vec2 pos = ball.position;
    Vec2 vel = ball.velocity;
    // Dash reach alone bounds what c cycles can cover; the exact test only
    // runs once the squared distance is inside a slightly widened bound.
    const double first = std::min(phys.player_accel_max, phys.player_speed_max);
    const double sustained =
        std::min(phys.player_speed_max, phys.player_speed_max * phys.player_decay + phys.player_accel_max);
    double reach = phys.kickable_area;
    if (horizon > 0 && phys.ball_decay < 1.0) {
        // Everything the ball can still cover lies within `roll` of where it is now.
        const double roll = vel.length() / (1.0 - phys.ball_decay);
        const double far = phys.kickable_area + first + sustained * std::max(0, horizon - 2) + roll + 1e-9;
        if ((player.position - pos).length2() > far * far) return horizon;
    }
    for (int c = 0; c < horizon; ++c) {
        if (c == 1) reach += first;
        else if (c > 1) reach += sustained;
        const double bound = reach + 1e-9;
        if ((player.position - pos).length2() <= bound * bound && min_cycles_to_point(player, pos, phys) <= c) {
            return c;
        }
        pos += vel;
        vel *= phys.ball_decay;
    }
    return horizon;
}

WorldState step(const WorldState& state, const Commands& commands, std::uint64_t /*rng_seed*/, const Physics& phys,
                StepDiagnostics* diagnostics) {
    WorldState next = state;
    next.cycle = state.cycle + 1;

    // Kicks are resolved against the start-of-cycle positions. Only the
    // kickers closest to the ball count; exact ties average, summed per team
    // so the result stays symmetric under mirroring.
    double nearest = 0.0;
    bool any_kick = false;
    bool kick_legal[kPlayerCount] = {};
    for (int i = 0; i < kPlayerCount; ++i) {
        const Command& cmd = commands[static_cast<std::size_t>(i)];
        const PlayerState& p = state.players[static_cast<std::size_t>(i)];
        if (cmd.kind != CommandKind::kick || !p.active) continue;
        if (!is_kickable(p, state.ball, phys)) {
            if (diagnostics) ++diagnostics->illegal_kicks;
            continue;
        }
        kick_legal[i] = true;
        double d = p.position.dist(state.ball.position);
        if (!any_kick || d < nearest) nearest = d;
        any_kick = true;
    }
    if (any_kick) {
        Vec2 kick_sum[2];
        int kick_count = 0;
        bool team_kicked[2] = {false, false};
        for (int i = 0; i < kPlayerCount; ++i) {
            if (!kick_legal[i]) continue;
            const int t = i < kTeamSize ? 0 : 1;
            team_kicked[t] = true;
            const PlayerState& p = state.players[static_cast<std::size_t>(i)];
            if (p.position.dist(state.ball.position) != nearest) continue;
            const Command& cmd = commands[static_cast<std::size_t>(i)];
            double power = std::clamp(cmd.power, 0.0, 100.0);
            kick_sum[t] += unit_from_deg(cmd.dir) * (power / 100.0 * phys.ball_speed_max);
            ++kick_count;
        }
        next.ball.velocity = cap_speed((kick_sum[0] + kick_sum[1]) * (1.0 / kick_count), phys.ball_speed_max);
        if (diagnostics && team_kicked[0] && team_kicked[1]) ++diagnostics->contested_kicks;
    }

    const double x_limit = phys.half_length + phys.out_of_bounds_slack;
    const double y_limit = phys.half_width + phys.out_of_bounds_slack;
    for (std::size_t i = 0; i < next.players.size(); ++i) {
        PlayerState& p = next.players[i];
        const Command& cmd = commands[i];
        if (!p.active) continue;
        if (cmd.kind == CommandKind::turn) {
            p.body_deg = normalize_deg(p.body_deg + quantize_deg(cmd.dir));
        } else if (cmd.kind == CommandKind::dash) {
            double power = std::clamp(cmd.power, 0.0, 100.0);
            if (phys.dash_cost_per_power > 0.0) power = std::min(power, p.stamina / phys.dash_cost_per_power);
            if (power > 0.0) {
                double rel = std::clamp(quantize_deg(cmd.dir), -phys.turn_threshold_deg, phys.turn_threshold_deg);
                p.velocity += unit_from_deg(p.body_deg + rel) * (power / 100.0 * phys.player_accel_max);
                p.velocity = cap_speed(p.velocity, phys.player_speed_max);
                p.stamina = std::max(0.0, p.stamina - power * phys.dash_cost_per_power);
            }
        }
        p.stamina = std::min(phys.stamina_max, p.stamina + phys.stamina_recovery);
        p.position = clamp_to_box(p.position + p.velocity, x_limit, y_limit);
        p.velocity *= phys.player_decay;
    }

    const Vec2 from = next.ball.position;
    next.ball.position += next.ball.velocity;
    next.ball.velocity *= phys.ball_decay;
    const Vec2 to = next.ball.position;

    std::optional<Side> scorer;
    if (std::abs(to.x) > phys.half_length) {
        double line = to.x > 0.0 ? phys.half_length : -phys.half_length;
        double t = (to.x == from.x) ? 1.0 : (line - from.x) / (to.x - from.x);
        double y_cross = from.y + t * (to.y - from.y);
        if (std::abs(y_cross) <= phys.goal_half_width) scorer = to.x > 0.0 ? Side::left : Side::right;
    }
    if (scorer) {
        if (*scorer == Side::left) ++next.score_left; else ++next.score_right;
        kickoff_reset(next, opposite(*scorer), phys);
        return next;
    }
    if (!in_field(to, phys)) {
        next.ball.position = clamp_to_box(to, phys.half_length - 1.0, phys.half_width - 1.0);
        next.ball.velocity = Vec2{};
    }

    refresh_home_positions(next, phys);
    next.ball_owner = kickable_owner(next, phys);
    return next;
}

std::optional<PlayerId> kickable_owner(const WorldState& state, const Physics& phys) {
    std::optional<PlayerId> best[2];
    double best_dist[2] = {0.0, 0.0};
    for (const auto& p : state.players) {
        if (!p.active) continue;
        double d = p.position.dist(state.ball.position);
        if (d > phys.kickable_area) continue;
        int t = p.side == Side::left ? 0 : 1;
        if (!best[t] || d < best_dist[t]) {
            best[t] = p.id();
            best_dist[t] = d;
        }
    }
    if (best[0] && best[1]) {
        if (best_dist[0] == best_dist[1]) return std::nullopt;
        return best_dist[0] < best_dist[1] ? best[0] : best[1];
    }
    return best[0] ? best[0] : best[1];
}

WorldState mirrored(const WorldState& state) {
    WorldState m;
    m.cycle = state.cycle;
    m.ball = {-state.ball.position, -state.ball.velocity};
    m.score_left = state.score_right;
    m.score_right = state.score_left;
    if (state.ball_owner) m.ball_owner = PlayerId{opposite(state.ball_owner->side), state.ball_owner->unum};
    for (const auto& p : state.players) {
        PlayerState q = p;
        q.side = opposite(p.side);
        q.position = -p.position;
        q.velocity = -p.velocity;
        q.home_position = -p.home_position;
        q.body_deg = normalize_deg(p.body_deg + 180.0);
        m.player(q.side, q.unum) = q;
    }
    return m;
}

Command mirrored(const Command& command) {
    Command c = command;
    c.dir = quantize_deg(c.dir);
    if (c.kind == CommandKind::kick) c.dir = normalize_deg(c.dir + 180.0);
    return c;
}

std::uint64_t state_hash(const WorldState& state) {
    std::uint64_t h = 1469598103934665603ull;
    h = fnv_mix(h, static_cast<std::uint64_t>(state.cycle));
    h = fnv_mix(h, state.ball.position.x);
    h = fnv_mix(h, state.ball.position.y);
    h = fnv_mix(h, state.ball.velocity.x);
    h = fnv_mix(h, state.ball.velocity.y);
    h = fnv_mix(h, static_cast<std::uint64_t>(state.score_left));
    h = fnv_mix(h, static_cast<std::uint64_t>(state.score_right));
    std::uint64_t owner = state.ball_owner
                              ? static_cast<std::uint64_t>(player_index(state.ball_owner->side, state.ball_owner->unum) + 1)
                              : 0u;
    h = fnv_mix(h, owner);
    for (const auto& p : state.players) {
        h = fnv_mix(h, static_cast<std::uint64_t>(p.active));
        h = fnv_mix(h, p.position.x);
        h = fnv_mix(h, p.position.y);
        h = fnv_mix(h, p.velocity.x);
        h = fnv_mix(h, p.velocity.y);
        h = fnv_mix(h, p.body_deg);
        h = fnv_mix(h, p.stamina);
    }
    return h;
}

} // namespace deskball
