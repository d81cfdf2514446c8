#include "deskball/agent.hpp"

#include <cmath>
#include <stdexcept>

namespace deskball {

namespace {

struct Race {
    int cycles = 0;
    int unum = 0;  // 0 when nobody on the team can run
};

// Fastest player of `side` to the ball. Goalkeepers only count when the
// interception happens inside their own penalty box.
Race fastest_to_ball(const WorldState& state, Side side, const Physics& phys, bool allow_goalie_anywhere) {
    Race best{phys.intercept_horizon, 0};
    for (const auto& p : state.team(side)) {
        if (!p.active) continue;
        int c = min_cycles_to_moving_ball(p, state.ball, phys, best.unum == 0 ? -1 : best.cycles);
        if (best.unum != 0 && c >= best.cycles) continue;
        if (p.unum == 1 && !allow_goalie_anywhere) {
            Vec2 at = ball_position_at(state.ball, c, phys);
            double own_goal_x = side == Side::left ? -phys.half_length : phys.half_length;
            bool in_box = std::abs(at.x - own_goal_x) <= 16.5 && std::abs(at.y) <= 20.16;
            if (!in_box) continue;
        }
        best = {c, p.unum};
    }
    return best;
}

double approach_power(double distance) {
    if (distance > 10.0) return 100.0;
    if (distance > 2.0) return 60.0;
    return 30.0;
}

constexpr double kSprint = 100.0;
constexpr double kShadowPower = 80.0;

} // namespace

void AgentConfig::validate() const {
    if (unmark_passnet && !weights_path) throw std::invalid_argument("unmark_passnet requires weights_path");
    if (!ore_table.is_valid()) throw std::invalid_argument("ore_table must be non-increasing values in [0, 50]");
    if (planner.budget.max_nodes < 1 || planner.budget.max_depth < 1) {
        throw std::invalid_argument("planner budget must be >= 1");
    }
    if (passnet.max_tree_nodes < 1) throw std::invalid_argument("passnet max_tree_nodes must be >= 1");
}

AgentConfig baseline_config() {
    AgentConfig cfg;
    cfg.name = "baseline";
    return cfg;
}

AgentConfig full_config(const OreTable& table) {
    AgentConfig cfg;
    cfg.name = "full";
    cfg.blocking = true;
    cfg.ore = true;
    cfg.unmark_simple = true;
    cfg.ore_table = table;
    return cfg;
}

Command go_to(const PlayerState& player, Vec2 target, double power, const Physics& phys, double tolerance) {
    Vec2 delta = target - player.position;
    double dist = delta.length();
    if (dist <= tolerance) return Command::none();
    double turn = normalize_deg(heading_deg(delta) - player.body_deg);
    if (std::abs(turn) > phys.turn_threshold_deg) return Command::turn(turn);
    double needed = 100.0 * dist / phys.player_accel_max;
    return Command::dash(std::min(power, needed), turn);
}

Command kick_for(const ActionDescriptor& action, const WorldState& state, const PlannerContext& ctx) {
    const Physics& phys = ctx.physics;
    const Vec2 ball = state.ball.position;
    const double dist = ball.dist(action.target_point);
    double speed = 0.0;
    switch (action.kind) {
    case ActionKind::hold:
        return Command::kick(0.0, 0.0);
    case ActionKind::direct_pass:
    case ActionKind::lead_pass:
        speed = pass_first_speed(dist, ctx);
        break;
    case ActionKind::dribble: {
        int n = std::max(1, action.duration);
        speed = dist * (1.0 - phys.ball_decay) / (1.0 - std::pow(phys.ball_decay, n));
        break;
    }
    case ActionKind::shoot:
        speed = phys.ball_speed_max;
        break;
    }
    double power = std::min(100.0, 100.0 * speed / phys.ball_speed_max);
    return Command::kick(power, heading_deg(action.target_point - ball));
}

TeamAgent::TeamAgent(AgentConfig config, Side side) : config_(std::move(config)), side_(side) {
    config_.validate();
    if (config_.unmark_passnet) weights_ = std::make_shared<const MlpWeights>(load_weights(*config_.weights_path));
}

TeamAgent::TeamAgent(AgentConfig config, Side side, std::shared_ptr<const MlpWeights> weights)
    : config_(std::move(config)), side_(side), weights_(std::move(weights)) {
    if (config_.unmark_passnet && !weights_) throw std::invalid_argument("unmark_passnet requires weights");
    if (weights_) validate_pass_network(*weights_);
}

void TeamAgent::reset() { memory_ = {}; }

TeamCommands TeamAgent::decide(const WorldState& world, TeamDecision* decision, const ChainObserver& observer) {
    TeamDecision local;
    TeamDecision& out = decision ? *decision : local;
    out = TeamDecision{};
    if (side_ == Side::left) return decide_left(world, out, observer);

    ChainObserver flipped;
    if (observer) {
        flipped = [&observer](const WorldState& s, PlayerId holder, const ChainTree& tree) {
            observer(mirrored(s), PlayerId{Side::right, holder.unum}, tree);
        };
    }
    TeamCommands cmds = decide_left(mirrored(world), out, flipped);
    for (auto& c : cmds) c = mirrored(c);
    if (out.action) out.action->target_point = -out.action->target_point;
    return cmds;
}

TeamCommands TeamAgent::decide_left(const WorldState& world, TeamDecision& decision, const ChainObserver& observer) {
    TeamCommands cmds{};
    if (config_.passive) return cmds;

    const Physics& phys = config_.physics;
    const PlannerContext pctx{phys, config_.planner, config_.evaluator};
    const DefenseContext dctx{phys, config_.defense, config_.evaluator, config_.planner.dribble_speed};
    const UnmarkContext uctx{pctx, config_.unmark};
    const OreTable table = config_.ore ? config_.ore_table : OreTable{};

    std::array<bool, kTeamSize> assigned{};
    auto assign = [&](int unum, Command c) {
        cmds[static_cast<std::size_t>(unum - 1)] = c;
        assigned[static_cast<std::size_t>(unum - 1)] = true;
    };

    // Ball holder plans and kicks.
    if (auto holder = kickable_player(world, Side::left, phys)) {
        ChainTree tree = chain_search_tree(world, Side::left, config_.planner.budget, table, pctx);
        if (observer) observer(world, *holder, tree);
        decision.holder = holder->unum;
        if (auto action = tree.first_action()) {
            decision.action = *action;
            assign(holder->unum, kick_for(*action, world, pctx));
        } else {
            // Nothing safe to do: clear the ball toward the opponent goal.
            decision.action = hold_action(world);
            assign(holder->unum, Command::kick(100.0, heading_deg(Vec2{phys.half_length, 0.0} - world.ball.position)));
        }
    }

    // Fastest teammate runs to the interception point.
    const Race ours = fastest_to_ball(world, Side::left, phys, false);
    const Race theirs = fastest_to_ball(world, Side::right, phys, true);
    if (!decision.holder && ours.unum != 0 && ours.cycles < phys.intercept_horizon) {
        decision.chaser = ours.unum;
        const PlayerState& p = world.player(Side::left, ours.unum);
        assign(ours.unum, go_to(p, ball_position_at(world.ball, ours.cycles, phys), kSprint, phys, 0.0));
    }

    const bool our_ball = decision.holder.has_value() ||
                          (ours.unum != 0 && ours.cycles < phys.intercept_horizon && ours.cycles <= theirs.cycles);

    if (!our_ball && config_.blocking) {
        if (auto pick = elect_blocker(world, Side::left, dctx)) {
            decision.blocker = pick->unum;
            assign(pick->unum, go_to(world.player(Side::left, pick->unum), pick->point.position, kSprint, phys));
        }
        auto marks = marking_targets(world, Side::left, decision.blocker, decision.chaser, dctx);
        for (int u = 2; u <= kTeamSize; ++u) {
            const auto& target = marks[static_cast<std::size_t>(u - 1)];
            if (!target || assigned[static_cast<std::size_t>(u - 1)]) continue;
            assign(u, go_to(world.player(Side::left, u), *target, kShadowPower, phys));
        }
    }

    if (our_ball && config_.unmarking()) {
        const int possessor = decision.holder ? *decision.holder : ours.unum;
        std::optional<PassTree> tree;
        if (config_.unmark_passnet && weights_) {
            WorldState root = world;
            root.ball_owner = PlayerId{Side::left, possessor};
            tree = build_pass_tree(root, *weights_,
                                   PassTreeParams{config_.passnet.prob_limit, config_.passnet.max_tree_nodes}, pctx);
        }
        for (int u = 2; u <= kTeamSize; ++u) {
            if (assigned[static_cast<std::size_t>(u - 1)]) continue;
            const PlayerId me{Side::left, u};
            std::optional<int> passer;
            if (tree) passer = select_passer_v11(*tree, u);
            if (!passer) passer = select_passer_v10(world, me, phys);
            if (!passer) continue;
            if (!decision.passer) decision.passer = passer;
            UnmarkMemory& mem = memory_[static_cast<std::size_t>(u - 1)];
            const bool stale = !mem.valid || mem.passer != *passer || world.cycle < mem.cycle ||
                               world.cycle - mem.cycle >= config_.unmark.replan_period;
            if (stale) {
                mem = UnmarkMemory{choose_unmark_target(world, me, PlayerId{Side::left, *passer}, uctx), *passer,
                                   world.cycle, true};
            }
            if (mem.target) assign(u, go_to(world.player(me), *mem.target, kShadowPower, phys));
        }
    }

    for (const auto& p : world.team(Side::left)) {
        if (!p.active || assigned[static_cast<std::size_t>(p.unum - 1)]) continue;
        double dist = p.position.dist(p.home_position);
        cmds[static_cast<std::size_t>(p.unum - 1)] = go_to(p, p.home_position, approach_power(dist), phys);
    }
    return cmds;
}

} // namespace deskball
