#include "deskball/evaluator.hpp"

#include <algorithm>
#include <stdexcept>

namespace deskball {

bool OreTable::is_valid() const {
    for (int i = 0; i < kSize; ++i) {
        double v = penalties[static_cast<std::size_t>(i)];
        if (!(v >= 0.0 && v <= kMaxPenalty)) return false;
        if (i > 0 && v > penalties[static_cast<std::size_t>(i - 1)]) return false;
    }
    return true;
}

double field_value_at(Vec2 ball, Side attacking_side, const EvaluatorParams& params, const Physics& phys) {
    Vec2 oriented = attacking_side == Side::left ? ball : -ball;
    double goal_dist = oriented.dist(Vec2{phys.half_length, 0.0});
    return oriented.x + std::max(0.0, params.goal_bonus_radius - goal_dist);
}

double field_value(const WorldState& state, Side attacking_side, const EvaluatorParams& params, const Physics& phys) {
    return field_value_at(state.ball.position, attacking_side, params, phys);
}

double reversed_field_value(Vec2 point, Side defending_side, const EvaluatorParams& params, const Physics& phys) {
    return field_value_at(point, opposite(defending_side), params, phys);
}

double ore_penalty(const OreTable& table, int opponent_cycles) {
    if (opponent_cycles < 0) throw std::invalid_argument("opponent_cycles must be non-negative");
    if (opponent_cycles >= OreTable::kSize) return 0.0;
    return table.penalties[static_cast<std::size_t>(opponent_cycles)];
}

int fastest_opponent_cycles(const WorldState& state, Side side, const Physics& phys) {
    int best = phys.intercept_horizon;
    for (const auto& opp : state.team(opposite(side))) {
        if (!opp.active) continue;
        best = std::min(best, min_cycles_to_moving_ball(opp, state.ball, phys, best));
        if (best == 0) break;
    }
    return best;
}

double evaluate_state(const WorldState& state, Side side, const OreTable& table, const EvaluatorParams& params,
                      const Physics& phys) {
    double value = field_value(state, side, params, phys);
    bool all_zero = std::all_of(table.penalties.begin(), table.penalties.end(), [](double v) { return v == 0.0; });
    if (all_zero) return value;
    return value - ore_penalty(table, fastest_opponent_cycles(state, side, phys));
}

} // namespace deskball
