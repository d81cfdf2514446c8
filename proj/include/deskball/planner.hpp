#pragma once

#include <algorithm>
#include <iosfwd>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

#include "deskball/evaluator.hpp"
#include "deskball/world.hpp"

namespace deskball {

// --- generic best-first chain search ----------------------------------------

template <class State, class Action>
struct SearchNode {
    int id = 0;
    std::optional<int> parent;
    State state;
    std::optional<Action> incoming;
    double value = 0.0;
    int depth = 0;
    bool terminal = false;
};

template <class State, class Action>
struct SearchTree {
    std::vector<SearchNode<State, Action>> nodes;
    std::optional<int> best;  // highest-value non-root node, ties by lower id

    /// Incoming action of the root child on the path to `best`.
    std::optional<Action> first_action() const {
        if (!best) return std::nullopt;
        int id = *best;
        while (nodes[static_cast<std::size_t>(id)].parent && *nodes[static_cast<std::size_t>(id)].parent != 0) {
            id = *nodes[static_cast<std::size_t>(id)].parent;
        }
        return nodes[static_cast<std::size_t>(id)].incoming;
    }
};

template <class State, class Action>
struct Expansion {
    Action action;
    State state;
    bool terminal = false;
};

/// Repeatedly expands the unexpanded node with the highest value. The children
/// of an expansion are all generated and evaluated, then inserted best first
/// until `budget.max_nodes` non-root nodes exist. Nodes at `budget.max_depth`
/// and terminal nodes are never expanded.
///
/// `expand(const State&)` returns a range of Expansion<State, Action>;
/// `evaluate(const State&)` returns the node value.
template <class State, class Action, class Expand, class Evaluate>
SearchTree<State, Action> best_first_search(State root, const SearchBudget& budget, Expand&& expand,
                                            Evaluate&& evaluate) {
    using Node = SearchNode<State, Action>;
    SearchTree<State, Action> tree;
    tree.nodes.reserve(static_cast<std::size_t>(std::max(1, budget.max_nodes)) + 1);
    double root_value = evaluate(root);
    tree.nodes.push_back(Node{0, std::nullopt, std::move(root), std::nullopt, root_value, 0, false});

    auto worse = [&tree](int a, int b) {
        const auto& na = tree.nodes[static_cast<std::size_t>(a)];
        const auto& nb = tree.nodes[static_cast<std::size_t>(b)];
        if (na.value != nb.value) return na.value < nb.value;
        return na.id > nb.id;
    };
    std::priority_queue<int, std::vector<int>, decltype(worse)> frontier(worse);
    frontier.push(0);

    int created = 0;
    while (!frontier.empty() && created < budget.max_nodes) {
        int id = frontier.top();
        frontier.pop();
        if (tree.nodes[static_cast<std::size_t>(id)].terminal ||
            tree.nodes[static_cast<std::size_t>(id)].depth >= budget.max_depth) {
            continue;
        }
        auto children = expand(tree.nodes[static_cast<std::size_t>(id)].state);
        std::vector<double> values;
        values.reserve(children.size());
        for (const auto& child : children) values.push_back(evaluate(child.state));
        std::vector<std::size_t> order(children.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&values](std::size_t a, std::size_t b) { return values[a] > values[b]; });

        const int depth = tree.nodes[static_cast<std::size_t>(id)].depth + 1;
        for (std::size_t k : order) {
            if (created >= budget.max_nodes) break;
            auto& child = children[k];
            int child_id = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back(Node{child_id, id, std::move(child.state), std::move(child.action), values[k], depth,
                                      child.terminal});
            ++created;
            frontier.push(child_id);
        }
    }

    for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
        if (!tree.best || tree.nodes[i].value > tree.nodes[static_cast<std::size_t>(*tree.best)].value) {
            tree.best = static_cast<int>(i);
        }
    }
    return tree;
}

// --- soccer actions ----------------------------------------------------------

enum class ActionKind : std::uint8_t { direct_pass, lead_pass, dribble, hold, shoot };

std::string_view to_string(ActionKind kind);

struct ActionDescriptor {
    ActionKind kind = ActionKind::hold;
    Vec2 target_point;
    std::optional<int> receiver;  // set exactly for passes
    int duration = 1;

    bool is_pass() const { return kind == ActionKind::direct_pass || kind == ActionKind::lead_pass; }
    bool operator==(const ActionDescriptor&) const = default;
};

using ChainNode = SearchNode<WorldState, ActionDescriptor>;
using ChainTree = SearchTree<WorldState, ActionDescriptor>;

struct PlannerContext {
    Physics physics;
    PlannerParams planner;
    EvaluatorParams evaluator;
};

/// Initial ball velocity for a pass covering `distance` that arrives at
/// roughly `pass_end_speed`.
double pass_first_speed(double distance, const PlannerContext& ctx);

/// True when `receiver` reaches the kicked ball before the horizon and no
/// opponent of `receiver` gets there strictly earlier.
bool pass_is_safe(const WorldState& state, const BallState& kicked, const PlayerState& receiver,
                  const Physics& phys);

BallState kicked_ball(Vec2 from, Vec2 target, double speed);

/// Direct pass plus up to eight lead passes per teammate, minus intercepted ones.
std::vector<ActionDescriptor> generate_passes(const WorldState& state, PlayerId holder,
                                              const PlannerContext& ctx = PlannerContext{});

/// Up to ten dribble targets around the ball at 36 degree spacing.
std::vector<ActionDescriptor> generate_dribbles(const WorldState& state, PlayerId holder,
                                                const PlannerContext& ctx = PlannerContext{});

/// Shots at the goal mouth when close enough and the lane is clear.
std::vector<ActionDescriptor> generate_shoots(const WorldState& state, PlayerId holder,
                                              const PlannerContext& ctx = PlannerContext{});

/// Outcome of `action` taken by state.ball_owner. The ball jumps to the
/// target, the actor (or receiver) joins it, everyone else drifts home.
WorldState predict(const WorldState& state, const ActionDescriptor& action,
                   const PlannerContext& ctx = PlannerContext{});

ActionDescriptor hold_action(const WorldState& state);

/// Closest kickable player of `side`, ties by lower uniform number.
std::optional<PlayerId> kickable_player(const WorldState& state, Side side, const Physics& phys = kDefaultPhysics);

/// Full search; the tree is useful for debugging and tests.
ChainTree chain_search_tree(const WorldState& state, Side side, const SearchBudget& budget, const OreTable& table,
                            const PlannerContext& ctx = PlannerContext{});

/// First action of the best chain for the kickable player of `side`. Hold when
/// nothing can be generated. Throws std::invalid_argument if nobody of `side`
/// is kickable.
ActionDescriptor chain_search(const WorldState& state, Side side, const SearchBudget& budget, const OreTable& table,
                              const PlannerContext& ctx = PlannerContext{});

/// One line per node: id, parent (-1 for the root), action kind, value.
void write_chain_tree(std::ostream& out, const ChainTree& tree);

} // namespace deskball
