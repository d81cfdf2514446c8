#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "deskball/planner.hpp"

using namespace deskball;
using namespace deskball::testing;

namespace {

const OreTable kPaperTable{{10, 9, 5, 4, 3, 2, 1}};

bool has_target(const std::vector<ActionDescriptor>& actions, Vec2 target, ActionKind kind) {
    return std::any_of(actions.begin(), actions.end(), [&](const ActionDescriptor& a) {
        return a.kind == kind && a.target_point.dist(target) < 1e-9;
    });
}

// Holder of the left team on the ball at `at`.
WorldState with_holder(Vec2 at) {
    WorldState s = empty_field();
    put(s, Side::left, 10, at);
    s.ball.position = at;
    s.ball_owner = PlayerId{Side::left, 10};
    return s;
}

std::vector<ActionDescriptor> all_actions(const WorldState& s, const PlannerContext& ctx) {
    std::vector<ActionDescriptor> out;
    if (!s.ball_owner || s.ball_owner->side != Side::left) return out;
    for (auto* gen : {&generate_passes, &generate_dribbles, &generate_shoots}) {
        auto a = (*gen)(s, *s.ball_owner, ctx);
        out.insert(out.end(), a.begin(), a.end());
    }
    return out;
}

// Root actions whose two-level subtree holds the overall maximum.
std::vector<ActionDescriptor> brute_force_best_roots(const WorldState& root, const OreTable& table,
                                                     const PlannerContext& ctx) {
    struct Entry {
        ActionDescriptor root_action;
        double value;
    };
    std::vector<Entry> entries;
    for (const auto& a : all_actions(root, ctx)) {
        WorldState s1 = predict(root, a, ctx);
        entries.push_back({a, evaluate_state(s1, Side::left, table, ctx.evaluator, ctx.physics)});
        if (a.kind == ActionKind::shoot) continue;
        for (const auto& b : all_actions(s1, ctx)) {
            WorldState s2 = predict(s1, b, ctx);
            entries.push_back({a, evaluate_state(s2, Side::left, table, ctx.evaluator, ctx.physics)});
        }
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : entries) best = std::max(best, e.value);
    std::vector<ActionDescriptor> roots;
    for (const auto& e : entries) {
        if (e.value == best) roots.push_back(e.root_action);
    }
    return roots;
}

} // namespace

TEST_CASE("pass generation") {
    WorldState s = with_holder({0.0, 0.0});
    const PlannerContext ctx;

    SUBCASE("single teammate and no opponents: direct plus eight leads") {
        put(s, Side::left, 7, {15.0, 5.0});
        auto passes = generate_passes(s, {Side::left, 10}, ctx);
        CHECK(passes.size() == 9);
        CHECK(std::count_if(passes.begin(), passes.end(), [](auto& a) { return a.kind == ActionKind::direct_pass; }) == 1);
        for (const auto& p : passes) CHECK(p.receiver == 7);
    }
    SUBCASE("opponent on the lane removes the direct pass") {
        put(s, Side::left, 7, {15.0, 0.0});
        put(s, Side::right, 4, {7.5, 0.0});
        auto passes = generate_passes(s, {Side::left, 10}, ctx);
        CHECK_FALSE(has_target(passes, {15.0, 0.0}, ActionKind::direct_pass));
        CHECK(passes.size() < 9);
    }
    SUBCASE("nobody to pass to") { CHECK(generate_passes(s, {Side::left, 10}, ctx).empty()); }
    SUBCASE("right side sees the mirrored picture") {
        put(s, Side::left, 7, {15.0, 5.0});
        WorldState m = mirrored(s);
        auto left = generate_passes(s, {Side::left, 10}, ctx);
        auto right = generate_passes(m, {Side::right, 10}, ctx);
        REQUIRE(left.size() == right.size());
        for (std::size_t i = 0; i < left.size(); ++i) CHECK(right[i].target_point == -left[i].target_point);
    }
}

TEST_CASE("dribble generation") {
    const PlannerContext ctx;
    SUBCASE("open field gives ten") { CHECK(generate_dribbles(with_holder({0.0, 0.0}), {Side::left, 10}, ctx).size() == 10); }
    SUBCASE("corner prunes out-of-bounds targets") {
        auto d = generate_dribbles(with_holder({51.0, 32.5}), {Side::left, 10}, ctx);
        CHECK(d.size() < 10);
        for (const auto& a : d) CHECK(in_field(a.target_point));
    }
    SUBCASE("opponent right in front blocks the 0 degree dribble") {
        WorldState s = with_holder({0.0, 0.0});
        put(s, Side::right, 5, {2.5, 0.0}, 0.0);  // facing away, so it cannot get behind the holder in time
        auto d = generate_dribbles(s, {Side::left, 10}, ctx);
        CHECK_FALSE(has_target(d, unit_from_deg(0.0) * ctx.planner.dribble_step, ActionKind::dribble));
        CHECK(has_target(d, unit_from_deg(180.0) * ctx.planner.dribble_step, ActionKind::dribble));
    }
}

TEST_CASE("shoot generation") {
    const PlannerContext ctx;
    CHECK(generate_shoots(with_holder({0.0, 0.0}), {Side::left, 10}, ctx).empty());
    auto shots = generate_shoots(with_holder({40.0, 0.0}), {Side::left, 10}, ctx);
    CHECK(shots.size() == 3);
    WorldState blocked = with_holder({40.0, 0.0});
    put(blocked, Side::right, 1, {51.0, 0.0});
    CHECK(generate_shoots(blocked, {Side::left, 10}, ctx).size() < 3);
}

TEST_CASE("predict") {
    WorldState s = with_holder({0.0, 0.0});
    put(s, Side::left, 7, {15.0, 5.0});
    const PlannerContext ctx;

    WorldState held = predict(s, hold_action(s), ctx);
    CHECK(held.cycle == s.cycle + 1);
    CHECK(held.ball.position == s.ball.position);
    CHECK(held.player(Side::left, 7).position == s.player(Side::left, 7).position);

    auto dribbles = generate_dribbles(s, {Side::left, 10}, ctx);
    REQUIRE_FALSE(dribbles.empty());
    CHECK(dribbles.front().duration == 5);  // ceil(3 / 0.7)
    CHECK(predict(s, dribbles.front(), ctx).cycle == s.cycle + 5);

    auto passes = generate_passes(s, {Side::left, 10}, ctx);
    REQUIRE_FALSE(passes.empty());
    WorldState after = predict(s, passes.front(), ctx);
    REQUIRE(after.ball_owner.has_value());
    CHECK(*after.ball_owner == PlayerId{Side::left, 7});
    CHECK(after.ball.position == passes.front().target_point);
}

TEST_CASE("chain search with a one-node budget picks the best single action") {
    std::mt19937_64 rng(17);
    const PlannerContext ctx;
    for (int i = 0; i < 40; ++i) {
        WorldState s = random_field(rng, 6, 6);
        put(s, Side::left, 10, s.ball.position + Vec2{0.3, 0.0});
        s.ball_owner = PlayerId{Side::left, 10};
        ActionDescriptor chosen = chain_search(s, Side::left, SearchBudget{1, 4}, kPaperTable, ctx);
        auto actions = all_actions(s, ctx);
        if (actions.empty()) {
            CHECK(chosen.kind == ActionKind::hold);
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& a : actions) best = std::max(best, evaluate_state(predict(s, a, ctx), Side::left, kPaperTable));
        CHECK(evaluate_state(predict(s, chosen, ctx), Side::left, kPaperTable) == best);
    }
}

TEST_CASE("a single candidate is returned") {
    PlannerContext ctx;
    ctx.planner.lead_distance = 500.0;  // every lead target leaves the pitch
    ctx.planner.dribble_step = 500.0;
    ctx.planner.shoot_range = 0.0;
    WorldState s = with_holder({0.0, 0.0});
    put(s, Side::left, 7, {15.0, 5.0});
    ActionDescriptor a = chain_search(s, Side::left, SearchBudget{}, OreTable{}, ctx);
    CHECK(a.kind == ActionKind::direct_pass);
    CHECK(a.receiver == 7);
}

TEST_CASE("chain search respects the budget") {
    std::mt19937_64 rng(23);
    const PlannerContext ctx;
    for (int i = 0; i < 30; ++i) {
        WorldState s = random_field(rng, 11, 11);
        put(s, Side::left, 10, s.ball.position);
        SearchBudget budget{1 + static_cast<int>(rng() % 60), 1 + static_cast<int>(rng() % 4)};
        ChainTree tree = chain_search_tree(s, Side::left, budget, kPaperTable, ctx);
        CHECK(static_cast<int>(tree.nodes.size()) - 1 <= budget.max_nodes);
        for (const auto& n : tree.nodes) CHECK(n.depth <= budget.max_depth);
        if (tree.best) {
            // The first action hangs off a root child on the best node's path.
            int id = *tree.best;
            while (*tree.nodes[static_cast<std::size_t>(id)].parent != 0) id = *tree.nodes[static_cast<std::size_t>(id)].parent;
            CHECK(tree.first_action() == tree.nodes[static_cast<std::size_t>(id)].incoming);
            for (const auto& n : tree.nodes) CHECK(n.value <= tree.nodes[static_cast<std::size_t>(*tree.best)].value);
        }
    }
}

TEST_CASE("chain search is deterministic and rejects a missing holder") {
    std::mt19937_64 rng(29);
    WorldState s = random_field(rng, 11, 11);
    put(s, Side::left, 10, s.ball.position);
    const PlannerContext ctx;
    CHECK(chain_search(s, Side::left, SearchBudget{}, kPaperTable, ctx) ==
          chain_search(s, Side::left, SearchBudget{}, kPaperTable, ctx));
    WorldState nobody = empty_field();
    CHECK_THROWS_AS(chain_search(nobody, Side::left, SearchBudget{}, kPaperTable, ctx), std::invalid_argument);
    CHECK_THROWS_AS(chain_search(s, Side::left, SearchBudget{0, 1}, kPaperTable, ctx), std::invalid_argument);
}

TEST_CASE("two-level chain search agrees with full enumeration") {
    std::mt19937_64 rng(31);
    const PlannerContext ctx;
    for (int i = 0; i < 25; ++i) {
        WorldState s = random_field(rng, 3, 3);
        put(s, Side::left, 10, s.ball.position);
        s.ball_owner = PlayerId{Side::left, 10};
        const OreTable table = (i % 2) ? kPaperTable : OreTable{};
        ChainTree tree = chain_search_tree(s, Side::left, SearchBudget{100000, 2}, table, ctx);
        auto roots = brute_force_best_roots(s, table, ctx);
        if (roots.empty()) {
            CHECK_FALSE(tree.first_action().has_value());
            continue;
        }
        REQUIRE(tree.first_action().has_value());
        CHECK(std::find(roots.begin(), roots.end(), *tree.first_action()) != roots.end());
    }
}

TEST_CASE("without opponents the chosen chain climbs") {
    std::mt19937_64 rng(37);
    const PlannerContext ctx;
    for (int i = 0; i < 40; ++i) {
        WorldState s = random_field(rng, 11, 0);
        put(s, Side::left, 10, s.ball.position);
        ChainTree tree = chain_search_tree(s, Side::left, SearchBudget{}, OreTable{}, ctx);
        REQUIRE(tree.best.has_value());
        int id = *tree.best;
        while (tree.nodes[static_cast<std::size_t>(id)].parent) {
            const auto& node = tree.nodes[static_cast<std::size_t>(id)];
            const auto& parent = tree.nodes[static_cast<std::size_t>(*node.parent)];
            CHECK(field_value(node.state, Side::left) > field_value(parent.state, Side::left));
            id = *node.parent;
        }
    }
}

TEST_CASE("tree dump has one line per node") {
    WorldState s = with_holder({0.0, 0.0});
    put(s, Side::left, 7, {15.0, 5.0});
    ChainTree tree = chain_search_tree(s, Side::left, SearchBudget{20, 2}, OreTable{});
    std::ostringstream out;
    write_chain_tree(out, tree);
    std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(tree.nodes.size()));
    CHECK(text.rfind("0 -1 root", 0) == 0);
}
