#include "doctest.h"
#include "support.hpp"

#include <random>

#include "deskball/world.hpp"

using namespace deskball;
using namespace deskball::testing;

namespace {

Commands no_commands() { return Commands{}; }

} // namespace

TEST_CASE("ball rolls with decay when nobody acts") {
    WorldState s = empty_field();
    s.ball.velocity = {1.0, 0.0};
    WorldState n = step(s, no_commands(), 0);
    CHECK(n.ball.position.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n.ball.position.y == 0.0);
    CHECK(n.ball.velocity.x == doctest::Approx(0.94).epsilon(1e-12));
    CHECK(n.cycle == s.cycle + 1);
}

TEST_CASE("a still world stays put apart from the clock") {
    WorldState s = initial_state();
    kickoff_reset(s, std::nullopt);
    WorldState n = step(s, no_commands(), 0);
    CHECK(n.cycle == s.cycle + 1);
    CHECK(n.ball.position == s.ball.position);
    for (std::size_t i = 0; i < s.players.size(); ++i) CHECK(n.players[i].position == s.players[i].position);
}

TEST_CASE("crossing the right goal line inside the posts scores for left") {
    WorldState s = empty_field();
    s.ball.position = {52.4, 0.0};
    s.ball.velocity = {0.5, 0.0};
    WorldState n = step(s, no_commands(), 0);
    CHECK(n.score_left == 1);
    CHECK(n.score_right == 0);

    SUBCASE("wide of the post is no goal") {
        s.ball.position = {52.4, 10.0};
        WorldState m = step(s, no_commands(), 0);
        CHECK(m.score_left == 0);
    }
}

TEST_CASE("kickable boundary is inclusive") {
    PlayerState p;
    p.position = {0.0, 0.0};
    BallState b;
    b.position = {0.0, 0.0};
    CHECK(is_kickable(p, b));
    b.position = {1.085, 0.0};
    CHECK(is_kickable(p, b));
    b.position = {1.2, 0.0};
    CHECK_FALSE(is_kickable(p, b));
}

TEST_CASE("min_cycles_to_point") {
    PlayerState p;
    p.position = {0.0, 0.0};
    p.body_deg = 0.0;
    CHECK(min_cycles_to_point(p, {0.0, 0.0}) == 0);
    CHECK(min_cycles_to_point(p, {10.5, 0.0}) == 10);
    p.body_deg = quantize_deg(180.0);
    CHECK(min_cycles_to_point(p, {10.5, 0.0}) == 11);
}

TEST_CASE("min_cycles_to_moving_ball examples") {
    PlayerState p;
    p.position = {0.0, 0.0};
    BallState b;
    b.position = {0.5, 0.0};
    CHECK(min_cycles_to_moving_ball(p, b) == 0);

    p.position = {-50.0, -30.0};
    b.position = {50.0, 30.0};
    b.velocity = {3.0, 0.0};
    CHECK(min_cycles_to_moving_ball(p, b) == 50);
    CHECK(oracle_intercept(p, b) == 50);
}

TEST_CASE("a ball rolling away is never caught sooner than a still one") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        WorldState s = random_field(rng, 1, 0);
        const PlayerState& p = s.player(Side::left, 1);
        BallState still{s.ball.position, {}};
        Vec2 away = s.ball.position - p.position;
        if (away.length() < 1e-6) continue;
        BallState moving{s.ball.position, away * (uniform(rng, 0.1, 3.0) / away.length())};
        CHECK(min_cycles_to_moving_ball(p, still) <= min_cycles_to_moving_ball(p, moving));
    }
}

TEST_CASE("interception matches the cycle-scan oracle") {
    std::mt19937_64 rng(5);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        WorldState s = random_field(rng, 1, 0, true);
        const PlayerState& p = s.player(Side::left, 1);
        if (min_cycles_to_moving_ball(p, s.ball) != oracle_intercept(p, s.ball)) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("ball speed is capped after kicks") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        WorldState s = random_field(rng, 3, 3, true);
        Commands cmds{};
        for (auto& c : cmds) c = Command::kick(uniform(rng, 0.0, 150.0), uniform(rng, -180.0, 180.0));
        // Put a kicker next to the ball so some kicks land.
        s.player(Side::left, 1).position = s.ball.position + Vec2{0.5, 0.0};
        WorldState n = step(s, cmds, 0);
        CHECK(n.ball.velocity.length() <= kDefaultPhysics.ball_speed_max + 1e-9);
    }
}

TEST_CASE("mirroring is an involution and swaps the scores") {
    std::mt19937_64 rng(8);
    WorldState s = random_field(rng, 11, 11, true);
    s.score_left = 2;
    s.score_right = 1;
    WorldState m = mirrored(s);
    CHECK(m.score_left == 1);
    CHECK(m.score_right == 2);
    CHECK(m.ball.position == -s.ball.position);
    CHECK(state_hash(mirrored(m)) == state_hash(s));
}

TEST_CASE("stepping commutes with mirroring") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        WorldState s = random_field(rng, 11, 11, true);
        s.player(Side::left, 2).position = s.ball.position + Vec2{0.3, 0.2};
        Commands cmds{};
        for (auto& c : cmds) {
            switch (rng() % 4) {
            case 0: c = Command::dash(uniform(rng, 0, 100), quantize_deg(uniform(rng, -30, 30))); break;
            case 1: c = Command::turn(quantize_deg(uniform(rng, -180, 180))); break;
            case 2: c = Command::kick(uniform(rng, 0, 100), quantize_deg(uniform(rng, -180, 180))); break;
            default: break;
            }
        }
        Commands flipped{};
        for (int k = 0; k < kTeamSize; ++k) {
            flipped[static_cast<std::size_t>(k)] = mirrored(cmds[static_cast<std::size_t>(k + kTeamSize)]);
            flipped[static_cast<std::size_t>(k + kTeamSize)] = mirrored(cmds[static_cast<std::size_t>(k)]);
        }
        WorldState a = mirrored(step(s, cmds, 1));
        WorldState b = step(mirrored(s), flipped, 1);
        CHECK(state_hash(a) == state_hash(b));
    }
}

TEST_CASE("formation anchors stay on the pitch") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        Vec2 ball = random_point(rng);
        for (int u = 1; u <= kTeamSize; ++u) CHECK(in_field(formation_position(u, ball)));
    }
}
