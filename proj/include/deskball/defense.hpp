#pragma once

#include <optional>
#include <vector>

#include "deskball/evaluator.hpp"
#include "deskball/world.hpp"

namespace deskball {

struct CurvePoint {
    int cycle = 0;
    Vec2 position;
};

/// Predicted path of the opponent ball holder's dribble.
struct DribbleCurve {
    std::vector<CurvePoint> points;
};

struct DefenseContext {
    Physics physics;
    DefenseParams defense;
    EvaluatorParams evaluator;
    double dribble_speed = 0.7;
};

struct KickPoint {
    int cycle = 0;
    Vec2 position;
    PlayerId kicker;
};

/// Where and when the fastest attacker (opponent of `defending_side`) first
/// controls the ball. Empty when no attacker gets there within the horizon;
/// throws std::invalid_argument when the attackers have nobody on the field.
std::optional<KickPoint> predict_first_kick_point(const WorldState& state, Side defending_side,
                                                  const DefenseContext& ctx = DefenseContext{});

/// Dribble path from the first kick point: the attacker heads for the most
/// dangerous of ten points around it, re-choosing every few cycles, at the
/// dribble speed. Holds `horizon + 1` points at most and never leaves the pitch.
std::optional<DribbleCurve> dribble_curve(const WorldState& state, Side defending_side, int horizon,
                                          const DefenseContext& ctx = DefenseContext{});

/// Earliest curve point the defender reaches no later than the dribbler.
std::optional<CurvePoint> find_block_point(const WorldState& state, PlayerId defender, const DribbleCurve& curve,
                                           const Physics& phys = kDefaultPhysics);

struct BlockAssignment {
    int unum = 0;
    CurvePoint point;
};

/// The one field player of `defending_side` that should block: the earliest
/// block cycle among those that pass the home-distance and stamina guards,
/// ties by lower uniform number. The goalkeeper never blocks.
std::optional<BlockAssignment> elect_blocker(const WorldState& state, Side defending_side,
                                             const DefenseContext& ctx = DefenseContext{});

/// Block target for `me`, or empty when someone else blocks or a guard fails.
std::optional<Vec2> blocking_decision(const WorldState& state, PlayerId me,
                                      const DefenseContext& ctx = DefenseContext{});

/// Shadow-marking targets for the non-blocking defenders: each, in uniform
/// order, takes the nearest unmarked attacker near its home and stands
/// `mark_distance` from it towards the ball. Index unum-1; empty means go home.
std::array<std::optional<Vec2>, kTeamSize> marking_targets(const WorldState& state, Side defending_side,
                                                           std::optional<int> blocker, std::optional<int> chaser,
                                                           const DefenseContext& ctx = DefenseContext{});

} // namespace deskball
