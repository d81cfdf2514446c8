#include "doctest.h"
#include "support.hpp"

#include <algorithm>
#include <random>

#include "deskball/evaluator.hpp"

using namespace deskball;
using namespace deskball::testing;

namespace {

const OreTable kPaperTable{{10, 9, 5, 4, 3, 2, 1}};

OreTable random_table(std::mt19937_64& rng) {
    OreTable t;
    for (auto& p : t.penalties) p = uniform(rng, 0.0, 50.0);
    std::sort(t.penalties.begin(), t.penalties.end(), std::greater<>());
    return t;
}

} // namespace

TEST_CASE("field value examples") {
    WorldState s = empty_field();
    s.ball.position = {52.5, 0.0};
    CHECK(field_value(s, Side::left) == doctest::Approx(92.5).epsilon(1e-12));
    s.ball.position = {-52.5, 0.0};
    CHECK(field_value(s, Side::left) == doctest::Approx(-52.5).epsilon(1e-12));
    // The right team attacks -x.
    CHECK(field_value(s, Side::right) == doctest::Approx(92.5).epsilon(1e-12));
}

TEST_CASE("field value depends only on the ball") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        WorldState a = random_field(rng, 11, 11);
        WorldState b = random_field(rng, 4, 7);
        b.ball = a.ball;
        CHECK(field_value(a, Side::left) == field_value(b, Side::left));
        CHECK(field_value(a, Side::right) == field_value(b, Side::right));
        // Orientation: the same situation seen from the other half.
        CHECK(field_value(a, Side::left) == field_value(mirrored(a), Side::right));
    }
}

TEST_CASE("ore penalty lookup") {
    CHECK(ore_penalty(kPaperTable, 0) == 10.0);
    CHECK(ore_penalty(kPaperTable, 6) == 1.0);
    CHECK(ore_penalty(kPaperTable, 7) == 0.0);
    CHECK(ore_penalty(kPaperTable, 100) == 0.0);
    CHECK(ore_penalty(OreTable{}, 0) == 0.0);
    CHECK_THROWS_AS(ore_penalty(kPaperTable, -1), std::invalid_argument);
}

TEST_CASE("ore penalty is non-increasing and vanishes from cell 7 on") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        OreTable t = random_table(rng);
        REQUIRE(t.is_valid());
        for (int c = 0; c < 60; ++c) {
            CHECK(ore_penalty(t, c + 1) <= ore_penalty(t, c));
            if (c >= 7) CHECK(ore_penalty(t, c) == 0.0);
        }
    }
}

TEST_CASE("table validity") {
    CHECK(kPaperTable.is_valid());
    CHECK(OreTable{}.is_valid());
    CHECK_FALSE(OreTable{{10, 18, 5, 4, 3, 2, 1}}.is_valid());
    CHECK_FALSE(OreTable{{51, 0, 0, 0, 0, 0, 0}}.is_valid());
    CHECK_FALSE(OreTable{{5, 4, 3, 2, 1, 0, -1}}.is_valid());
}

TEST_CASE("evaluate_state examples") {
    WorldState s = empty_field();
    put(s, Side::left, 9, {10.0, 0.0});
    s.ball.position = {10.5, 0.0};
    const double fv = field_value(s, Side::left);

    SUBCASE("zero table is the field value") { CHECK(evaluate_state(s, Side::left, OreTable{}) == fv); }
    SUBCASE("no opponent at all") { CHECK(evaluate_state(s, Side::left, kPaperTable) == fv); }
    SUBCASE("opponent out of reach") {
        put(s, Side::right, 2, {-50.0, 30.0});
        REQUIRE(fastest_opponent_cycles(s, Side::left) >= 7);
        CHECK(evaluate_state(s, Side::left, kPaperTable) == fv);
    }
    SUBCASE("opponent on the ball") {
        put(s, Side::right, 2, {11.0, 0.0});
        CHECK(fastest_opponent_cycles(s, Side::left) == 0);
        CHECK(evaluate_state(s, Side::left, kPaperTable) == doctest::Approx(fv - 10.0).epsilon(1e-12));
    }
}

TEST_CASE("evaluate_state never exceeds the field value") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) {
        WorldState s = random_field(rng, 11, 11, true);
        OreTable t = random_table(rng);
        CHECK(evaluate_state(s, Side::left, t) <= field_value(s, Side::left));
        CHECK(evaluate_state(s, Side::right, t) <= field_value(s, Side::right));
    }
}

TEST_CASE("reversed field value") {
    CHECK(reversed_field_value({-52.5, 0.0}, Side::left) == doctest::Approx(92.5).epsilon(1e-12));
    CHECK(reversed_field_value({52.5, 0.0}, Side::right) == doctest::Approx(92.5).epsilon(1e-12));
    CHECK(reversed_field_value({-30.0, 10.0}, Side::left) == reversed_field_value({-30.0, -10.0}, Side::left));
    // Walking away from the defended goal beyond the bonus zone.
    double prev = reversed_field_value({-12.0, 0.0}, Side::left);
    for (double x = -11.0; x <= 52.5; x += 1.0) {
        double v = reversed_field_value({x, 0.0}, Side::left);
        CHECK(v < prev);
        prev = v;
    }
}
