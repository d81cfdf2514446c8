#pragma once

namespace deskball {

/// Simulation constants. Defaults follow the standard 2D soccer server.
struct Physics {
    double ball_decay = 0.94;
    double player_decay = 0.4;
    double player_speed_max = 1.05;  // m/cycle
    double player_accel_max = 1.0;   // m/cycle^2 at dash power 100
    double ball_speed_max = 3.0;     // m/cycle
    double kickable_area = 1.085;
    double half_length = 52.5;
    double half_width = 34.0;
    double goal_half_width = 7.01;
    double turn_threshold_deg = 30.0;
    double out_of_bounds_slack = 2.0;  // how far players may stray past the lines
    double stamina_max = 8000.0;
    double stamina_recovery = 45.0;    // per cycle
    double dash_cost_per_power = 1.0;
    int intercept_horizon = 50;

    bool operator==(const Physics&) const = default;
};

struct EvaluatorParams {
    double goal_bonus_radius = 40.0;
};

struct SearchBudget {
    int max_nodes = 300;
    int max_depth = 4;
};

struct PlannerParams {
    double lead_distance = 3.0;
    double dribble_step = 3.0;
    double dribble_speed = 0.7;   // m/cycle
    double pass_speed = 2.5;      // average pass speed used for predicted durations
    double pass_end_speed = 1.0;  // target ball speed at the receive point
    double shoot_range = 20.0;
    double shoot_lane_clearance = 2.0;
    SearchBudget budget;
};

struct DefenseParams {
    int curve_horizon = 30;
    double curve_radius = 3.0;
    int rechoose_period = 5;
    double block_home_radius = 15.0;
    double stamina_floor_fraction = 0.3;
    double mark_distance = 2.0;
    double mark_home_radius = 15.0;
};

struct UnmarkParams {
    double step = 1.5;
    double home_radius = 10.0;
    double clearance = 3.0;
    double receive_radius = 1.5;
    double w_open = 0.5;
    double openness_cap = 10.0;
    double min_speed_for_axis = 0.1;
    int replan_period = 5;  // cycles an unmarker keeps its target
};

struct PassnetParams {
    double prob_limit = 0.1;
    int max_tree_nodes = 10;
};

} // namespace deskball
