#include "deskball/planner.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace deskball {

namespace {

// Generators and the predictor work in the frame where the acting side
// attacks +x; right-side callers are served by mirroring in and out.
template <class Fn>
std::vector<ActionDescriptor> oriented_actions(const WorldState& state, PlayerId holder, Fn&& fn) {
    if (holder.side == Side::left) return fn(state, holder.unum);
    auto actions = fn(mirrored(state), holder.unum);
    for (auto& a : actions) a.target_point = -a.target_point;
    return actions;
}

int cycles_for(double distance, double speed) {
    if (distance <= 0.0) return 1;
    return std::max(1, static_cast<int>(std::ceil(distance / speed)));
}


std::vector<ActionDescriptor> passes_left(const WorldState& state, int holder, const PlannerContext& ctx) {
    std::vector<ActionDescriptor> out;
    const Physics& phys = ctx.physics;
    const Vec2 origin = state.ball.position;
    for (const auto& mate : state.team(Side::left)) {
        if (!mate.active || mate.unum == holder) continue;
        for (int k = -1; k < 8; ++k) {
            Vec2 target = k < 0 ? mate.position : mate.position + unit_from_deg(45.0 * k) * ctx.planner.lead_distance;
            if (!in_field(target, phys)) continue;
            double dist = origin.dist(target);
            if (dist < phys.kickable_area) continue;
            BallState ball = kicked_ball(origin, target, pass_first_speed(dist, ctx));
            PlayerState runner = mate;
            if (!pass_is_safe(state, ball, runner, phys)) continue;
            out.push_back(ActionDescriptor{k < 0 ? ActionKind::direct_pass : ActionKind::lead_pass, target, mate.unum,
                                           cycles_for(dist, ctx.planner.pass_speed)});
        }
    }
    return out;
}

std::vector<ActionDescriptor> dribbles_left(const WorldState& state, int holder, const PlannerContext& ctx) {
    (void)holder;
    std::vector<ActionDescriptor> out;
    const Physics& phys = ctx.physics;
    const Vec2 origin = state.ball.position;
    const int duration = cycles_for(ctx.planner.dribble_step, ctx.planner.dribble_speed);
    for (int k = 0; k < 10; ++k) {
        Vec2 target = origin + unit_from_deg(36.0 * k) * ctx.planner.dribble_step;
        if (!in_field(target, phys)) continue;
        bool blocked = false;
        for (const auto& opp : state.team(Side::right)) {
            if (opp.active && min_cycles_to_point(opp, target, phys) < duration) {
                blocked = true;
                break;
            }
        }
        if (!blocked) out.push_back(ActionDescriptor{ActionKind::dribble, target, std::nullopt, duration});
    }
    return out;
}

std::vector<ActionDescriptor> shoots_left(const WorldState& state, int holder, const PlannerContext& ctx) {
    (void)holder;
    std::vector<ActionDescriptor> out;
    const Physics& phys = ctx.physics;
    const Vec2 origin = state.ball.position;
    if (origin.dist(Vec2{phys.half_length, 0.0}) > ctx.planner.shoot_range) return out;
    const double aim = phys.goal_half_width - 2.0;
    for (double y : {0.0, -aim, aim}) {
        Vec2 target{phys.half_length, y};
        bool clear = true;
        for (const auto& opp : state.team(Side::right)) {
            if (opp.active && segment_distance(opp.position, origin, target) < ctx.planner.shoot_lane_clearance) {
                clear = false;
                break;
            }
        }
        if (clear) {
            out.push_back(ActionDescriptor{ActionKind::shoot, target, std::nullopt,
                                           cycles_for(origin.dist(target), phys.ball_speed_max)});
        }
    }
    return out;
}

void drift_home(PlayerState& p, int cycles, const Physics& phys) {
    Vec2 to_home = p.home_position - p.position;
    double dist = to_home.length();
    double travel = phys.player_speed_max * cycles;
    p.position = dist <= travel ? p.home_position : p.position + to_home * (travel / dist);
    p.velocity = Vec2{};
}

} // namespace

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::direct_pass: return "direct_pass";
        case ActionKind::lead_pass: return "lead_pass";
        case ActionKind::dribble: return "dribble";
        case ActionKind::hold: return "hold";
        case ActionKind::shoot: return "shoot";
    }
    return "unknown";
}

double pass_first_speed(double distance, const PlannerContext& ctx) {
    const Physics& phys = ctx.physics;
    return std::min(phys.ball_speed_max, distance * (1.0 - phys.ball_decay) + ctx.planner.pass_end_speed);
}

BallState kicked_ball(Vec2 from, Vec2 target, double speed) {
    return BallState{from, unit_from_deg(heading_deg(target - from)) * speed};
}

bool pass_is_safe(const WorldState& state, const BallState& kicked, const PlayerState& receiver, const Physics& phys) {
    const int horizon = phys.intercept_horizon;
    int receive = min_cycles_to_moving_ball(receiver, kicked, phys, horizon);
    if (receive >= horizon) return false;
    // Cheap necessary condition for an opponent touching the ball before `receive`.
    const Vec2 lane_end = ball_position_at(kicked, receive, phys);
    const double slack = phys.kickable_area + dash_reach(receive, phys);
    for (const auto& opp : state.team(opposite(receiver.side))) {
        if (!opp.active) continue;
        if (segment_distance(opp.position, kicked.position, lane_end) > slack) continue;
        if (min_cycles_to_moving_ball(opp, kicked, phys, receive) < receive) return false;
    }
    return true;
}

std::vector<ActionDescriptor> generate_passes(const WorldState& state, PlayerId holder, const PlannerContext& ctx) {
    return oriented_actions(state, holder, [&ctx](const WorldState& s, int h) { return passes_left(s, h, ctx); });
}

std::vector<ActionDescriptor> generate_dribbles(const WorldState& state, PlayerId holder, const PlannerContext& ctx) {
    return oriented_actions(state, holder, [&ctx](const WorldState& s, int h) { return dribbles_left(s, h, ctx); });
}

std::vector<ActionDescriptor> generate_shoots(const WorldState& state, PlayerId holder, const PlannerContext& ctx) {
    return oriented_actions(state, holder, [&ctx](const WorldState& s, int h) { return shoots_left(s, h, ctx); });
}

ActionDescriptor hold_action(const WorldState& state) {
    return ActionDescriptor{ActionKind::hold, state.ball.position, std::nullopt, 1};
}

WorldState predict(const WorldState& state, const ActionDescriptor& action, const PlannerContext& ctx) {
    WorldState next = state;
    if (action.kind == ActionKind::hold) {
        next.cycle += 1;
        return next;
    }
    const int duration = std::max(1, action.duration);
    next.cycle += duration;
    next.ball = BallState{action.target_point, Vec2{}};

    std::optional<PlayerId> actor;
    if (action.is_pass()) {
        if (!action.receiver) throw std::invalid_argument("pass action without receiver");
        Side side = state.ball_owner ? state.ball_owner->side : Side::left;
        actor = PlayerId{side, *action.receiver};
    } else if (action.kind == ActionKind::dribble) {
        actor = state.ball_owner;
    }

    for (auto& p : next.players) {
        if (!p.active) continue;
        if (actor && p.id() == *actor) {
            p.position = action.target_point;
            p.velocity = Vec2{};
            continue;
        }
        drift_home(p, duration, ctx.physics);
    }
    next.ball_owner = actor;
    return next;
}

std::optional<PlayerId> kickable_player(const WorldState& state, Side side, const Physics& phys) {
    std::optional<PlayerId> best;
    double best_dist = 0.0;
    for (const auto& p : state.team(side)) {
        if (!p.active) continue;
        double d = p.position.dist(state.ball.position);
        if (d > phys.kickable_area) continue;
        if (!best || d < best_dist) {
            best = p.id();
            best_dist = d;
        }
    }
    return best;
}

ChainTree chain_search_tree(const WorldState& state, Side side, const SearchBudget& budget, const OreTable& table,
                            const PlannerContext& ctx) {
    if (budget.max_nodes < 1 || budget.max_depth < 1) throw std::invalid_argument("search budget must be >= 1");
    auto holder = kickable_player(state, side, ctx.physics);
    if (!holder) throw std::invalid_argument("chain_search: no kickable player on the searching side");

    WorldState root = state;
    root.ball_owner = holder;

    using Child = Expansion<WorldState, ActionDescriptor>;
    auto expand = [&ctx, side](const WorldState& s) {
        std::vector<Child> children;
        if (!s.ball_owner || s.ball_owner->side != side) return children;
        const PlayerId owner = *s.ball_owner;
        auto append = [&](std::vector<ActionDescriptor> actions, bool terminal) {
            for (auto& a : actions) {
                WorldState next = predict(s, a, ctx);
                children.push_back(Child{std::move(a), std::move(next), terminal});
            }
        };
        append(generate_passes(s, owner, ctx), false);
        append(generate_dribbles(s, owner, ctx), false);
        append(generate_shoots(s, owner, ctx), true);
        return children;
    };
    auto evaluate = [&ctx, &table, side](const WorldState& s) {
        return evaluate_state(s, side, table, ctx.evaluator, ctx.physics);
    };
    return best_first_search<WorldState, ActionDescriptor>(std::move(root), budget, expand, evaluate);
}

ActionDescriptor chain_search(const WorldState& state, Side side, const SearchBudget& budget, const OreTable& table,
                              const PlannerContext& ctx) {
    ChainTree tree = chain_search_tree(state, side, budget, table, ctx);
    if (auto action = tree.first_action()) return *action;
    return hold_action(state);
}

void write_chain_tree(std::ostream& out, const ChainTree& tree) {
    for (const auto& node : tree.nodes) {
        out << node.id << ' ' << (node.parent ? *node.parent : -1) << ' '
            << (node.incoming ? to_string(node.incoming->kind) : std::string_view{"root"}) << ' ' << node.value
            << '\n';
    }
}

} // namespace deskball
