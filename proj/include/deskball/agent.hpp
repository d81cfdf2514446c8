#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "deskball/defense.hpp"
#include "deskball/evaluator.hpp"
#include "deskball/passnet.hpp"
#include "deskball/planner.hpp"
#include "deskball/unmark.hpp"
#include "deskball/world.hpp"

namespace deskball {

/// Feature flags and tunables for one team.
struct AgentConfig {
    std::string name = "agent";
    bool blocking = false;        // blocker election plus marking for the rest
    bool ore = false;             // subtract the ORE penalty while planning
    bool unmark_simple = false;   // off-ball unmarking with the ball possessor as passer
    bool unmark_passnet = false;  // passer taken from the predicted pass tree
    bool passive = false;         // null agent: never issues a command
    OreTable ore_table{};
    std::optional<std::string> weights_path;
    Physics physics;
    PlannerParams planner;
    EvaluatorParams evaluator;
    DefenseParams defense;
    UnmarkParams unmark;
    PassnetParams passnet;

    bool unmarking() const { return unmark_simple || unmark_passnet; }

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
};

/// Plain config with every feature off.
AgentConfig baseline_config();

/// Blocking, ORE and simple unmarking on, with the given table.
AgentConfig full_config(const OreTable& table);

/// What a team decided this cycle, for logs and tests.
struct TeamDecision {
    std::optional<int> holder;
    std::optional<ActionDescriptor> action;  // the holder's chain-search choice
    std::optional<int> chaser;
    std::optional<int> blocker;
    std::optional<int> passer;  // passer the unmarkers worked for
};

/// Observes every chain search a team runs.
using ChainObserver = std::function<void(const WorldState&, PlayerId holder, const ChainTree&)>;

/// One team's shared decision pipeline. Every player's choice is a function
/// of the shared state, so computing them together changes nothing but the
/// cost. The only memory is each unmarker's current target, kept for
/// `unmark.replan_period` cycles unless its passer changes.
class TeamAgent {
public:
    /// Loads the weights file when passnet unmarking is on.
    TeamAgent(AgentConfig config, Side side);
    TeamAgent(AgentConfig config, Side side, std::shared_ptr<const MlpWeights> weights);

    TeamCommands decide(const WorldState& world, TeamDecision* decision = nullptr, const ChainObserver& observer = {});

    /// Forgets remembered unmark targets; call between matches.
    void reset();

    const AgentConfig& config() const { return config_; }
    Side side() const { return side_; }

private:
    TeamCommands decide_left(const WorldState& world, TeamDecision& decision, const ChainObserver& observer);

    struct UnmarkMemory {
        std::optional<Vec2> target;
        int passer = 0;
        int cycle = 0;
        bool valid = false;
    };

    AgentConfig config_;
    Side side_;
    std::shared_ptr<const MlpWeights> weights_;
    std::array<UnmarkMemory, kTeamSize> memory_{};
};

/// Dash or turn command that moves `player` toward `target`; none when already there.
Command go_to(const PlayerState& player, Vec2 target, double power, const Physics& phys,
              double tolerance = 0.5);

/// Kick realising `action` from the current ball position.
Command kick_for(const ActionDescriptor& action, const WorldState& state, const PlannerContext& ctx);

} // namespace deskball
