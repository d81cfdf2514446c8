#include "deskball/defense.hpp"

#include <algorithm>
#include <stdexcept>

namespace deskball {

namespace {

// All helpers below assume the defenders play on the left.

std::optional<KickPoint> first_kick_left(const WorldState& state, const DefenseContext& ctx) {
    const Physics& phys = ctx.physics;
    std::optional<KickPoint> best;
    int best_cycles = phys.intercept_horizon;
    for (const auto& opp : state.team(Side::right)) {
        if (!opp.active) continue;
        int c = min_cycles_to_moving_ball(opp, state.ball, phys, best_cycles);
        if (c < best_cycles) {
            best_cycles = c;
            best = KickPoint{c, ball_position_at(state.ball, c, phys), opp.id()};
        }
    }
    return best;
}

std::optional<Vec2> dribble_heading(Vec2 from, const DefenseContext& ctx) {
    std::optional<Vec2> best;
    double best_value = 0.0;
    for (int k = 0; k < 10; ++k) {
        Vec2 dir = unit_from_deg(36.0 * k);
        Vec2 candidate = from + dir * ctx.defense.curve_radius;
        if (!in_field(candidate, ctx.physics)) continue;
        double v = reversed_field_value(candidate, Side::left, ctx.evaluator, ctx.physics);
        if (!best || v > best_value) {
            best = dir;
            best_value = v;
        }
    }
    return best;
}

std::optional<DribbleCurve> curve_left(const WorldState& state, int horizon, const DefenseContext& ctx) {
    auto kick = first_kick_left(state, ctx);
    if (!kick) return std::nullopt;
    DribbleCurve curve;
    // Free rolling ignores the lines; a ball that would leave stops at them.
    const Vec2 start{std::clamp(kick->position.x, -ctx.physics.half_length, ctx.physics.half_length),
                     std::clamp(kick->position.y, -ctx.physics.half_width, ctx.physics.half_width)};
    curve.points.push_back(CurvePoint{kick->cycle, start});
    const int period = std::max(1, ctx.defense.rechoose_period);
    std::optional<Vec2> dir;
    for (int s = 0; s < horizon; ++s) {
        const CurvePoint& last = curve.points.back();
        if (s % period == 0) dir = dribble_heading(last.position, ctx);
        if (!dir) break;
        Vec2 next = last.position + *dir * ctx.dribble_speed;
        if (!in_field(next, ctx.physics)) break;
        curve.points.push_back(CurvePoint{last.cycle + 1, next});
    }
    return curve;
}

std::optional<BlockAssignment> elect_left(const WorldState& state, const DefenseContext& ctx) {
    auto curve = curve_left(state, ctx.defense.curve_horizon, ctx);
    if (!curve) return std::nullopt;
    std::optional<BlockAssignment> best;
    for (const auto& mate : state.team(Side::left)) {
        // The goalkeeper keeps goal; blocking and marking are field-player jobs.
        if (!mate.active || mate.unum == 1) continue;
        if (mate.stamina < ctx.defense.stamina_floor_fraction * ctx.physics.stamina_max) continue;
        auto point = find_block_point(state, mate.id(), *curve, ctx.physics);
        if (!point) continue;
        if (point->position.dist(mate.home_position) > ctx.defense.block_home_radius) continue;
        if (!best || point->cycle < best->point.cycle) best = BlockAssignment{mate.unum, *point};
    }
    return best;
}

} // namespace

std::optional<KickPoint> predict_first_kick_point(const WorldState& state, Side defending_side,
                                                  const DefenseContext& ctx) {
    const auto attackers = state.team(opposite(defending_side));
    if (std::none_of(attackers.begin(), attackers.end(), [](const PlayerState& p) { return p.active; })) {
        throw std::invalid_argument("predict_first_kick_point: no attackers on the field");
    }
    if (defending_side == Side::left) return first_kick_left(state, ctx);
    auto kick = first_kick_left(mirrored(state), ctx);
    if (kick) {
        kick->position = -kick->position;
        kick->kicker.side = opposite(kick->kicker.side);
    }
    return kick;
}

std::optional<DribbleCurve> dribble_curve(const WorldState& state, Side defending_side, int horizon,
                                          const DefenseContext& ctx) {
    if (defending_side == Side::left) return curve_left(state, horizon, ctx);
    auto curve = curve_left(mirrored(state), horizon, ctx);
    if (curve) {
        for (auto& p : curve->points) p.position = -p.position;
    }
    return curve;
}

std::optional<CurvePoint> find_block_point(const WorldState& state, PlayerId defender, const DribbleCurve& curve,
                                           const Physics& phys) {
    const PlayerState& me = state.player(defender);
    for (const auto& point : curve.points) {
        if (min_cycles_to_point(me, point.position, phys) <= point.cycle) return point;
    }
    return std::nullopt;
}

std::optional<BlockAssignment> elect_blocker(const WorldState& state, Side defending_side, const DefenseContext& ctx) {
    if (defending_side == Side::left) return elect_left(state, ctx);
    auto pick = elect_left(mirrored(state), ctx);
    if (pick) pick->point.position = -pick->point.position;
    return pick;
}

std::optional<Vec2> blocking_decision(const WorldState& state, PlayerId me, const DefenseContext& ctx) {
    auto pick = elect_blocker(state, me.side, ctx);
    if (!pick || pick->unum != me.unum) return std::nullopt;
    return pick->point.position;
}

std::array<std::optional<Vec2>, kTeamSize> marking_targets(const WorldState& state, Side defending_side,
                                                           std::optional<int> blocker, std::optional<int> chaser,
                                                           const DefenseContext& ctx) {
    std::array<std::optional<Vec2>, kTeamSize> targets{};
    std::array<bool, kTeamSize> taken{};
    // Only the kicker's unum is used, so the mirrored frame is fine as is.
    auto holder = first_kick_left(defending_side == Side::left ? state : mirrored(state), ctx);
    if (holder) taken[static_cast<std::size_t>(holder->kicker.unum - 1)] = true;
    const Vec2 ball = state.ball.position;

    for (const auto& mate : state.team(defending_side)) {
        if (!mate.active || mate.unum == 1) continue;
        if ((blocker && mate.unum == *blocker) || (chaser && mate.unum == *chaser)) continue;
        const PlayerState* pick = nullptr;
        double pick_dist = 0.0;
        for (const auto& opp : state.team(opposite(defending_side))) {
            if (!opp.active || taken[static_cast<std::size_t>(opp.unum - 1)]) continue;
            if (opp.position.dist(mate.home_position) > ctx.defense.mark_home_radius) continue;
            double d = opp.position.dist(mate.position);
            if (!pick || d < pick_dist) {
                pick = &opp;
                pick_dist = d;
            }
        }
        if (!pick) continue;
        taken[static_cast<std::size_t>(pick->unum - 1)] = true;
        Vec2 toward_ball = ball - pick->position;
        double len = toward_ball.length();
        Vec2 offset = len > 1e-9 ? toward_ball * (ctx.defense.mark_distance / len) : Vec2{};
        targets[static_cast<std::size_t>(mate.unum - 1)] = pick->position + offset;
    }
    return targets;
}

} // namespace deskball
