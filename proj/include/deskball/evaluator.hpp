#pragma once

#include <array>

#include "deskball/world.hpp"

namespace deskball {

/// Seven-cell offensive risk penalty table. Cell i is subtracted from a
/// state's value when the fastest opponent reaches the ball in i cycles.
struct OreTable {
    static constexpr int kSize = 7;
    static constexpr double kMaxPenalty = 50.0;

    std::array<double, kSize> penalties{};

    bool is_valid() const;
    bool operator==(const OreTable&) const = default;
};

/// Ball x in the attacking frame plus a bonus inside the goal radius.
double field_value(const WorldState& state, Side attacking_side,
                   const EvaluatorParams& params = EvaluatorParams{}, const Physics& phys = kDefaultPhysics);

/// Same formula on a bare point.
double field_value_at(Vec2 ball, Side attacking_side, const EvaluatorParams& params = EvaluatorParams{},
                      const Physics& phys = kDefaultPhysics);

/// How dangerous `point` is for `defending_side`: the field value of the
/// opposing team evaluated at that point.
double reversed_field_value(Vec2 point, Side defending_side, const EvaluatorParams& params = EvaluatorParams{},
                            const Physics& phys = kDefaultPhysics);

/// Throws std::invalid_argument for negative cycle counts.
double ore_penalty(const OreTable& table, int opponent_cycles);

/// Fastest opponent-of-`side` arrival at the (possibly moving) ball.
int fastest_opponent_cycles(const WorldState& state, Side side, const Physics& phys = kDefaultPhysics);

double evaluate_state(const WorldState& state, Side side, const OreTable& table,
                      const EvaluatorParams& params = EvaluatorParams{}, const Physics& phys = kDefaultPhysics);

} // namespace deskball
