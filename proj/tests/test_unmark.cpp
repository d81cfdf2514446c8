#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <random>

#include "deskball/unmark.hpp"

using namespace deskball;
using namespace deskball::testing;

namespace {

// Hand formula for the attacking-left field value.
double hand_field_value(Vec2 p) { return p.x + std::max(0.0, 40.0 - std::hypot(52.5 - p.x, p.y)); }

// Passer 6 on the ball at (0, 0), unmarker 9 at (10, 5) with home there.
WorldState offense() {
    WorldState s = empty_field();
    put(s, Side::left, 6, {0.0, 0.0});
    put(s, Side::left, 9, {10.0, 5.0});
    return s;
}

} // namespace

TEST_CASE("passer selection v1.0") {
    WorldState s = empty_field();
    put(s, Side::left, 9, {0.0, 0.0});
    put(s, Side::left, 4, {-10.0, 0.0});
    put(s, Side::right, 3, {20.0, 0.0});
    s.ball.position = {0.5, 0.0};
    CHECK(select_passer_v10(s, {Side::left, 4}) == 9);
    CHECK_FALSE(select_passer_v10(s, {Side::left, 9}).has_value());

    SUBCASE("rolling ball goes to the fastest teammate") {
        WorldState r = empty_field();
        put(r, Side::left, 7, {10.0, 0.0}, 180.0);
        put(r, Side::left, 2, {-20.0, 10.0});
        put(r, Side::left, 5, {0.0, 20.0});
        put(r, Side::right, 8, {30.0, 0.0});
        r.ball.position = {0.0, 0.0};
        r.ball.velocity = {1.5, 0.0};
        REQUIRE(oracle_intercept(r.player(Side::left, 7), r.ball) < oracle_intercept(r.player(Side::left, 2), r.ball));
        CHECK(select_passer_v10(r, {Side::left, 2}) == 7);
    }
    SUBCASE("other team wins the race") {
        WorldState r = empty_field();
        put(r, Side::left, 7, {-30.0, 0.0});
        put(r, Side::left, 2, {-20.0, 10.0});
        put(r, Side::right, 8, {3.0, 0.0});
        r.ball.position = {0.0, 0.0};
        CHECK_FALSE(select_passer_v10(r, {Side::left, 2}).has_value());
    }
}

TEST_CASE("candidate grid and filters") {
    const UnmarkContext ctx;
    WorldState s = offense();

    SUBCASE("empty field near home") {
        auto grid = unmark_grid(s, {Side::left, 9}, ctx);
        CHECK(grid.size() == 100);
        auto targets = generate_targets(s, {Side::left, 9}, ctx);
        CHECK(targets.size() > 0);
        CHECK(targets.size() <= 100);
    }
    SUBCASE("pre-filter count is the in-range grid points") {
        std::mt19937_64 rng(61);
        for (int i = 0; i < 100; ++i) {
            WorldState r = empty_field();
            PlayerState& me = put(r, Side::left, 9, random_point(rng));
            me.home_position = me.position + Vec2{uniform(rng, -8, 8), uniform(rng, -8, 8)};
            std::size_t expected = 0;
            for (const auto& t : unmark_grid(r, me.id(), ctx)) {
                if (in_field(t.position) && t.position.dist(me.home_position) <= ctx.unmark.home_radius) ++expected;
            }
            CHECK(generate_targets(r, me.id(), ctx).size() == expected);
        }
    }
    SUBCASE("everything crowded") {
        UnmarkContext tight = ctx;
        tight.unmark.step = 0.2;  // whole grid within 2 m
        put(s, Side::right, 4, {10.5, 5.0});
        CHECK(generate_targets(s, {Side::left, 9}, tight).empty());
    }
    SUBCASE("corner") {
        WorldState c = empty_field();
        put(c, Side::left, 9, {51.0, 33.0});
        auto targets = generate_targets(c, {Side::left, 9}, ctx);
        CHECK_FALSE(targets.empty());
        for (const auto& t : targets) CHECK(in_field(t.position));
    }
}

TEST_CASE("target score") {
    const UnmarkContext ctx;
    WorldState s = offense();
    UnmarkTarget t;
    t.position = {12.0, 5.0};

    SUBCASE("no opponents: every pass works") {
        double score = score_target(s, {Side::left, 6}, {Side::left, 9}, t, ctx);
        CHECK(t.feasible_pass_count == 8);
        double sum = 0.0;
        for (int k = 0; k < 8; ++k) sum += hand_field_value(t.position + unit_from_deg(45.0 * k) * 1.5);
        CHECK(score == doctest::Approx(sum / 8.0 + 0.5 * 10.0).epsilon(1e-12));
    }
    SUBCASE("opponent on the ball stops every pass") {
        put(s, Side::right, 4, {0.6, 0.0});
        CHECK(score_target(s, {Side::left, 6}, {Side::left, 9}, t, ctx) == -INFINITY);
        CHECK(t.feasible_pass_count == 0);
    }
    SUBCASE("more room scores higher") {
        WorldState near = s;
        WorldState far = s;
        put(near, Side::right, 4, {15.0, 5.0});
        put(far, Side::right, 4, {20.0, 5.0});
        UnmarkTarget a = t;
        UnmarkTarget b = t;
        double sa = score_target(near, {Side::left, 6}, {Side::left, 9}, a, ctx);
        double sb = score_target(far, {Side::left, 6}, {Side::left, 9}, b, ctx);
        REQUIRE(a.feasible_pass_count == b.feasible_pass_count);
        CHECK(sb > sa);
    }
}

TEST_CASE("choosing a target") {
    UnmarkContext ctx;
    WorldState s = offense();

    SUBCASE("single survivor") {
        auto grid = unmark_grid(s, {Side::left, 9}, ctx);
        s.player(Side::left, 9).home_position = grid[3].position;
        ctx.unmark.home_radius = 0.1;
        auto pick = choose_unmark_target(s, {Side::left, 9}, {Side::left, 6}, ctx);
        REQUIRE(pick);
        CHECK(*pick == grid[3].position);
    }
    SUBCASE("nothing feasible") {
        put(s, Side::right, 4, {0.6, 0.0});
        CHECK_FALSE(choose_unmark_target(s, {Side::left, 9}, {Side::left, 6}, ctx).has_value());
    }
    SUBCASE("passer cannot be the unmarker") {
        CHECK_THROWS_AS(choose_unmark_target(s, {Side::left, 9}, {Side::left, 9}, ctx), std::invalid_argument);
    }
}

TEST_CASE("chosen target is the best of a re-scan and respects the filters") {
    std::mt19937_64 rng(67);
    const UnmarkContext ctx;
    int chosen = 0;
    for (int i = 0; i < 60; ++i) {
        WorldState s = random_field(rng, 11, 11);
        put(s, Side::left, 6, s.ball.position + Vec2{0.4, 0.0});
        const PlayerId me{Side::left, 1 + static_cast<int>(rng() % 5) + 6};
        auto pick = choose_unmark_target(s, me, {Side::left, 6}, ctx);
        double best = -INFINITY;
        for (auto t : generate_targets(s, me, ctx)) best = std::max(best, score_target(s, {Side::left, 6}, me, t, ctx));
        if (!std::isfinite(best)) {
            CHECK_FALSE(pick.has_value());
            continue;
        }
        REQUIRE(pick);
        ++chosen;
        UnmarkTarget t;
        t.position = *pick;
        CHECK(score_target(s, {Side::left, 6}, me, t, ctx) == best);
        CHECK(pick->dist(s.player(me).home_position) <= ctx.unmark.home_radius);
        for (const auto& p : s.players) {
            if (p.active && p.id() != me) CHECK(p.position.dist(*pick) >= ctx.unmark.clearance);
        }
    }
    CHECK(chosen > 0);
}

TEST_CASE("openness weight does not reorder targets with equal openness") {
    UnmarkContext a;
    UnmarkContext b;
    b.unmark.w_open = 3.0;
    std::mt19937_64 rng(71);
    for (int i = 0; i < 30; ++i) {
        WorldState s = random_field(rng, 11, 0);  // no opponents: openness is the cap everywhere
        put(s, Side::left, 6, s.ball.position);
        CHECK(choose_unmark_target(s, {Side::left, 9}, {Side::left, 6}, a) ==
              choose_unmark_target(s, {Side::left, 9}, {Side::left, 6}, b));
    }
}
