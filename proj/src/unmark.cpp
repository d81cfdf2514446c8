#include "deskball/unmark.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace deskball {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int fastest_cycles(const WorldState& state, Side side, const Physics& phys, int* unum_out) {
    int best = phys.intercept_horizon;
    int best_unum = 0;
    for (const auto& p : state.team(side)) {
        if (!p.active) continue;
        int c = min_cycles_to_moving_ball(p, state.ball, phys, best);
        if (best_unum == 0 || c < best) {
            best = c;
            best_unum = p.unum;
        }
    }
    if (unum_out) *unum_out = best_unum;
    return best;
}

} // namespace

std::optional<int> select_passer_v10(const WorldState& state, PlayerId me, const Physics& phys) {
    std::optional<int> possessor;
    if (auto kicker = kickable_player(state, me.side, phys)) {
        possessor = kicker->unum;
    } else {
        int ours_unum = 0;
        int ours = fastest_cycles(state, me.side, phys, &ours_unum);
        int theirs = fastest_cycles(state, opposite(me.side), phys, nullptr);
        if (ours_unum == 0 || ours >= phys.intercept_horizon || theirs < ours) return std::nullopt;
        possessor = ours_unum;
    }
    if (*possessor == me.unum) return std::nullopt;
    return possessor;
}

std::vector<UnmarkTarget> unmark_grid(const WorldState& state, PlayerId me, const UnmarkContext& ctx) {
    const PlayerState& self = state.player(me);
    double axis = 0.0;
    if (self.velocity.length() > ctx.unmark.min_speed_for_axis) axis = heading_deg(self.velocity);
    std::vector<UnmarkTarget> grid;
    grid.reserve(100);
    for (int k = 0; k < 10; ++k) {
        Vec2 dir = unit_from_deg(axis + 36.0 * k);
        for (int d = 1; d <= 10; ++d) {
            UnmarkTarget t;
            t.position = self.position + dir * (ctx.unmark.step * d);
            t.direction_index = k;
            t.distance_index = d;
            grid.push_back(t);
        }
    }
    return grid;
}

std::vector<UnmarkTarget> generate_targets(const WorldState& state, PlayerId me, const UnmarkContext& ctx) {
    const PlayerState& self = state.player(me);
    const Physics& phys = ctx.planner.physics;
    std::vector<UnmarkTarget> out;
    for (const auto& t : unmark_grid(state, me, ctx)) {
        if (!in_field(t.position, phys)) continue;
        if (t.position.dist(self.home_position) > ctx.unmark.home_radius) continue;
        bool crowded = false;
        for (const auto& p : state.players) {
            if (!p.active || p.id() == me) continue;
            if (p.position.dist(t.position) < ctx.unmark.clearance) {
                crowded = true;
                break;
            }
        }
        if (!crowded) out.push_back(t);
    }
    return out;
}

double score_target(const WorldState& state, PlayerId passer, PlayerId me, UnmarkTarget& target,
                    const UnmarkContext& ctx) {
    const Physics& phys = ctx.planner.physics;
    const PlayerState& from = state.player(passer);
    Vec2 origin = state.ball.position;
    if (!is_kickable(from, state.ball, phys)) {
        origin = ball_position_at(state.ball, min_cycles_to_moving_ball(from, state.ball, phys), phys);
    }

    PlayerState receiver = state.player(me);
    receiver.position = target.position;
    receiver.velocity = Vec2{};
    receiver.body_deg = heading_deg(origin - target.position);

    double value_sum = 0.0;
    int feasible = 0;
    for (int k = 0; k < 8; ++k) {
        Vec2 q = target.position + unit_from_deg(45.0 * k) * ctx.unmark.receive_radius;
        if (!in_field(q, phys)) continue;
        BallState ball = kicked_ball(origin, q, pass_first_speed(origin.dist(q), ctx.planner));
        if (!pass_is_safe(state, ball, receiver, phys)) continue;
        value_sum += field_value_at(q, me.side, ctx.planner.evaluator, phys);
        ++feasible;
    }
    target.feasible_pass_count = feasible;
    if (feasible == 0) {
        target.score = kNegInf;
        return kNegInf;
    }

    double openness = ctx.unmark.openness_cap;
    for (const auto& opp : state.team(opposite(me.side))) {
        if (opp.active) openness = std::min(openness, opp.position.dist(target.position));
    }
    target.score = value_sum / feasible + ctx.unmark.w_open * openness;
    return target.score;
}

std::optional<Vec2> choose_unmark_target(const WorldState& state, PlayerId me, PlayerId passer,
                                         const UnmarkContext& ctx) {
    if (passer == me) throw std::invalid_argument("choose_unmark_target: passer must differ from the unmarker");
    const Vec2 here = state.player(me).position;
    std::optional<UnmarkTarget> best;
    for (auto t : generate_targets(state, me, ctx)) {
        double s = score_target(state, passer, me, t, ctx);
        if (!std::isfinite(s)) continue;
        if (!best) {
            best = t;
            continue;
        }
        double d = here.dist(t.position);
        double best_d = here.dist(best->position);
        bool better = s > best->score ||
                      (s == best->score &&
                       (d < best_d || (d == best_d && (t.direction_index < best->direction_index ||
                                                       (t.direction_index == best->direction_index &&
                                                        t.distance_index < best->distance_index)))));
        if (better) best = t;
    }
    if (!best) return std::nullopt;
    return best->position;
}

} // namespace deskball
