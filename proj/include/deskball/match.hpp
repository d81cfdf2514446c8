#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "deskball/agent.hpp"
#include "deskball/world.hpp"

namespace deskball {

inline constexpr int kDefaultMatchCycles = 6000;

/// Called once per cycle with the state the teams saw and what they did.
using CycleHook = std::function<void(const WorldState& before, const Commands& commands, const TeamDecision& left,
                                     const TeamDecision& right)>;

struct MatchOptions {
    /// Start from the mirror image of the seed's kickoff.
    bool mirror = false;
    CycleHook on_cycle;
    ChainObserver on_chain;
    std::ostream* state_log = nullptr;  // one line per cycle
    std::ostream* tree_log = nullptr;   // every chain-search tree
};

/// Kickoff position for a seed: formation anchors with a small seeded
/// jitter, number 10 of the kicking side on the ball.
WorldState match_start(std::uint64_t seed, const Physics& phys = kDefaultPhysics);

/// Plays one match. The two configs must agree on physics.
/// Throws std::invalid_argument when max_cycles <= 0.
MatchResult run_match(const AgentConfig& left, const AgentConfig& right, std::uint64_t seed,
                      int max_cycles = kDefaultMatchCycles, const MatchOptions& options = {});

/// Same, with prebuilt agents (weights already loaded). Both are reset first.
MatchResult run_match(TeamAgent& left, TeamAgent& right, std::uint64_t seed,
                      int max_cycles = kDefaultMatchCycles, const MatchOptions& options = {});

/// wins / (games - draws) for `side`; empty when every game was drawn.
/// Throws std::invalid_argument for an empty list.
std::optional<double> win_rate(std::span<const MatchResult> results, Side side);

/// Deterministic 64-bit mix of its arguments.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

} // namespace deskball
