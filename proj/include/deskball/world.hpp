#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

#include "deskball/geometry.hpp"
#include "deskball/params.hpp"

namespace deskball {

inline const Physics kDefaultPhysics{};

enum class Side : std::uint8_t { left, right };

constexpr Side opposite(Side s) { return s == Side::left ? Side::right : Side::left; }
std::string_view to_string(Side s);

inline constexpr int kTeamSize = 11;
inline constexpr int kPlayerCount = 2 * kTeamSize;

struct PlayerId {
    Side side = Side::left;
    int unum = 1;
    bool operator==(const PlayerId&) const = default;
};

struct PlayerState {
    Side side = Side::left;
    int unum = 1;
    Vec2 position;
    Vec2 velocity;
    double body_deg = 0.0;
    double stamina = kDefaultPhysics.stamina_max;
    Vec2 home_position;
    bool active = true;  // inactive players are off the pitch and ignored everywhere

    PlayerId id() const { return {side, unum}; }
};

struct BallState {
    Vec2 position;
    Vec2 velocity;
};

/// Index into WorldState::players: left 1..11 occupy 0..10, right 1..11 occupy 11..21.
constexpr int player_index(Side side, int unum) { return (side == Side::left ? 0 : kTeamSize) + unum - 1; }

struct WorldState {
    int cycle = 0;
    BallState ball;
    std::array<PlayerState, kPlayerCount> players{};
    std::optional<PlayerId> ball_owner;
    int score_left = 0;
    int score_right = 0;

    PlayerState& player(Side side, int unum) { return players.at(player_index(side, unum)); }
    const PlayerState& player(Side side, int unum) const { return players.at(player_index(side, unum)); }
    PlayerState& player(PlayerId id) { return player(id.side, id.unum); }
    const PlayerState& player(PlayerId id) const { return player(id.side, id.unum); }

    std::span<PlayerState, kTeamSize> team(Side side) {
        return std::span<PlayerState, kTeamSize>(players.data() + (side == Side::left ? 0 : kTeamSize), kTeamSize);
    }
    std::span<const PlayerState, kTeamSize> team(Side side) const {
        return std::span<const PlayerState, kTeamSize>(players.data() + (side == Side::left ? 0 : kTeamSize),
                                                       kTeamSize);
    }
};

enum class CommandKind : std::uint8_t { none, dash, turn, kick };

/// A single player command. Directions are degrees; a dash direction is
/// relative to the body and limited to the turn threshold, a kick direction
/// is absolute.
struct Command {
    CommandKind kind = CommandKind::none;
    double power = 0.0;
    double dir = 0.0;

    static Command none() { return {}; }
    static Command dash(double power, double dir = 0.0) { return {CommandKind::dash, power, dir}; }
    static Command turn(double moment) { return {CommandKind::turn, 0.0, moment}; }
    static Command kick(double power, double dir) { return {CommandKind::kick, power, dir}; }
};

using TeamCommands = std::array<Command, kTeamSize>;
using Commands = std::array<Command, kPlayerCount>;

struct StepDiagnostics {
    int illegal_kicks = 0;
    int contested_kicks = 0;
};

struct MatchResult {
    int goals_left = 0;
    int goals_right = 0;
    int cycles_played = 0;
    std::uint64_t seed = 0;
    std::uint64_t trace_hash = 0;  // folds the hash of every cycle's state
    bool operator==(const MatchResult&) const = default;
};

// --- formation -------------------------------------------------------------

/// Formation anchor for a player of a team attacking +x, given the ball in that frame.
Vec2 formation_position(int unum, Vec2 ball, const Physics& phys = kDefaultPhysics);

/// Recomputes every player's home_position from the ball location.
void refresh_home_positions(WorldState& state, const Physics& phys = kDefaultPhysics);

/// Ball to the centre, both teams on their formation anchors. When a side is
/// given, its number 10 stands at the ball.
void kickoff_reset(WorldState& state, std::optional<Side> kicking_side, const Physics& phys = kDefaultPhysics);

WorldState initial_state(const Physics& phys = kDefaultPhysics);

// --- kinematics ------------------------------------------------------------

bool is_kickable(const PlayerState& player, const BallState& ball, const Physics& phys = kDefaultPhysics);

bool in_field(Vec2 p, const Physics& phys = kDefaultPhysics);

/// Distance a player covers dashing at full power for `cycles` cycles from rest.
double dash_reach(int cycles, const Physics& phys = kDefaultPhysics);

/// Ball position after `cycles` cycles of free rolling.
Vec2 ball_position_at(const BallState& ball, int cycles, const Physics& phys = kDefaultPhysics);

/// Cycles a player needs to bring `target` inside its kickable area: an
/// optional turn cycle when the heading change exceeds the turn threshold,
/// then full-power dashes.
int min_cycles_to_point(const PlayerState& player, Vec2 target, const Physics& phys = kDefaultPhysics);

/// Smallest c with min_cycles_to_point(player, ball_position_at(c)) <= c,
/// searched up to `horizon` (default Physics::intercept_horizon). Returns the
/// horizon when the ball cannot be reached.
int min_cycles_to_moving_ball(const PlayerState& player, const BallState& ball,
                              const Physics& phys = kDefaultPhysics, int horizon = -1);

// --- stepping --------------------------------------------------------------

/// Advances the world one cycle. Noise free: `rng_seed` is accepted for
/// interface stability and does not influence the result.
WorldState step(const WorldState& state, const Commands& commands, std::uint64_t rng_seed,
                const Physics& phys = kDefaultPhysics, StepDiagnostics* diagnostics = nullptr);

/// Point reflection through the centre spot with the team labels swapped.
WorldState mirrored(const WorldState& state);

/// A command expressed in the frame of the other half of the field.
Command mirrored(const Command& command);

std::uint64_t state_hash(const WorldState& state);

std::optional<PlayerId> kickable_owner(const WorldState& state, const Physics& phys = kDefaultPhysics);

} // namespace deskball
