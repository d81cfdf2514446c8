#pragma once

#include <optional>
#include <vector>

#include "deskball/evaluator.hpp"
#include "deskball/planner.hpp"
#include "deskball/world.hpp"

namespace deskball {

struct UnmarkTarget {
    Vec2 position;
    double score = 0.0;
    int feasible_pass_count = 0;
    int direction_index = 0;  // 0..9 around the first axis
    int distance_index = 1;   // 1..10 steps out
};

struct UnmarkContext {
    PlannerContext planner;
    UnmarkParams unmark;
};

/// Which teammate holds or will next hold the ball; empty when the other
/// team wins the race, or when that teammate is `me`.
std::optional<int> select_passer_v10(const WorldState& state, PlayerId me, const Physics& phys = kDefaultPhysics);

/// The raw 10 x 10 grid of candidate points, before any filtering.
std::vector<UnmarkTarget> unmark_grid(const WorldState& state, PlayerId me, const UnmarkContext& ctx = UnmarkContext{});

/// Grid points that are on the pitch, clear of other players and close to home.
std::vector<UnmarkTarget> generate_targets(const WorldState& state, PlayerId me,
                                           const UnmarkContext& ctx = UnmarkContext{});

/// Mean field value of the feasible lead passes around the target plus an
/// openness bonus; -infinity when no pass gets through.
double score_target(const WorldState& state, PlayerId passer, PlayerId me, UnmarkTarget& target,
                    const UnmarkContext& ctx = UnmarkContext{});

std::optional<Vec2> choose_unmark_target(const WorldState& state, PlayerId me, PlayerId passer,
                                         const UnmarkContext& ctx = UnmarkContext{});

} // namespace deskball
