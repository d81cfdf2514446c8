#include "deskball/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

namespace deskball {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Field lists shared by the reader and the writer. P may be const.
template <class P, class F>
void physics_fields(P& p, F&& f) {
    f("ball_decay", p.ball_decay);
    f("player_decay", p.player_decay);
    f("player_speed_max", p.player_speed_max);
    f("player_accel_max", p.player_accel_max);
    f("ball_speed_max", p.ball_speed_max);
    f("kickable_area", p.kickable_area);
    f("half_length", p.half_length);
    f("half_width", p.half_width);
    f("goal_half_width", p.goal_half_width);
    f("turn_threshold_deg", p.turn_threshold_deg);
    f("out_of_bounds_slack", p.out_of_bounds_slack);
    f("stamina_max", p.stamina_max);
    f("stamina_recovery", p.stamina_recovery);
    f("dash_cost_per_power", p.dash_cost_per_power);
    f("intercept_horizon", p.intercept_horizon);
}

template <class P, class F>
void planner_fields(P& p, F&& f) {
    f("lead_distance", p.lead_distance);
    f("dribble_step", p.dribble_step);
    f("dribble_speed", p.dribble_speed);
    f("pass_speed", p.pass_speed);
    f("pass_end_speed", p.pass_end_speed);
    f("shoot_range", p.shoot_range);
    f("shoot_lane_clearance", p.shoot_lane_clearance);
}

template <class P, class F>
void budget_fields(P& p, F&& f) {
    f("max_nodes", p.max_nodes);
    f("max_depth", p.max_depth);
}

template <class P, class F>
void evaluator_fields(P& p, F&& f) {
    f("goal_bonus_radius", p.goal_bonus_radius);
}

template <class P, class F>
void defense_fields(P& p, F&& f) {
    f("curve_horizon", p.curve_horizon);
    f("curve_radius", p.curve_radius);
    f("rechoose_period", p.rechoose_period);
    f("block_home_radius", p.block_home_radius);
    f("stamina_floor_fraction", p.stamina_floor_fraction);
    f("mark_distance", p.mark_distance);
    f("mark_home_radius", p.mark_home_radius);
}

template <class P, class F>
void unmark_fields(P& p, F&& f) {
    f("step", p.step);
    f("home_radius", p.home_radius);
    f("clearance", p.clearance);
    f("receive_radius", p.receive_radius);
    f("w_open", p.w_open);
    f("openness_cap", p.openness_cap);
    f("min_speed_for_axis", p.min_speed_for_axis);
    f("replan_period", p.replan_period);
}

template <class P, class F>
void passnet_fields(P& p, F&& f) {
    f("prob_limit", p.prob_limit);
    f("max_tree_nodes", p.max_tree_nodes);
}

template <class P, class F>
void ga_fields(P& g, F&& f) {
    f("population_size", g.population_size);
    f("parents_drawn", g.parents_drawn);
    f("children", g.children);
    f("elite_kept", g.elite_kept);
    f("mutation_rate", g.mutation_rate);
    f("max_iterations", g.max_iterations);
    f("stagnation_limit", g.stagnation_limit);
    f("fitness_matches", g.fitness_matches);
    f("match_cycles", g.match_cycles);
    f("base_seed", g.base_seed);
    f("threads", g.threads);
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void read_value(const json& v, double& out, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(where, "expected a finite number");
}

void read_value(const json& v, int& out, const std::string& where) {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) fail(where, "out of range");
    out = static_cast<int>(x);
}

void read_value(const json& v, std::uint64_t& out, const std::string& where) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
        fail(where, "expected a non-negative integer");
    }
    out = v.get<std::uint64_t>();
}

void read_value(const json& v, bool& out, const std::string& where) {
    if (!v.is_boolean()) fail(where, "expected true or false");
    out = v.get<bool>();
}

void read_value(const json& v, std::string& out, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    out = v.get<std::string>();
}

// Reads an object whose keys must all be known to `fields`.
template <class P, class Fields>
void read_object(const json& j, P& target, const std::string& where, Fields fields) {
    if (!j.is_object()) fail(where, "expected an object");
    std::set<std::string> known;
    fields(target, [&](const char* key, auto& field) {
        known.insert(key);
        if (auto it = j.find(key); it != j.end()) read_value(*it, field, where + "." + key);
    });
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) fail(where, "unknown key '" + key + "'");
    }
}

template <class P, class Fields>
json write_object(const P& source, Fields fields) {
    json j = json::object();
    fields(source, [&](const char* key, const auto& field) { j[key] = field; });
    return j;
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

fs::path resolve(const fs::path& p, const fs::path& base_dir) {
    if (p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
}

unsigned worker_count(int threads, std::size_t tasks) {
    unsigned n = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

// Weights shared by every match a config plays.
std::shared_ptr<const MlpWeights> weights_for(const AgentConfig& cfg) {
    if (!cfg.unmark_passnet) return nullptr;
    return std::make_shared<const MlpWeights>(load_weights(*cfg.weights_path));
}

struct LoadedConfig {
    AgentConfig config;
    std::shared_ptr<const MlpWeights> weights;
};

// Plays one match with `home` on the side given by `home_on_left`.
PairMatch play(const LoadedConfig& home, const LoadedConfig& away, std::uint64_t seed, bool home_on_left,
               int max_cycles) {
    PairMatch m;
    m.seed = seed;
    m.home_on_left = home_on_left;
    if (home_on_left) {
        TeamAgent l(home.config, Side::left, home.weights);
        TeamAgent r(away.config, Side::right, away.weights);
        MatchResult res = run_match(l, r, seed, max_cycles);
        m.scored = res.goals_left;
        m.conceded = res.goals_right;
        m.trace_hash = res.trace_hash;
    } else {
        TeamAgent l(away.config, Side::left, away.weights);
        TeamAgent r(home.config, Side::right, home.weights);
        MatchResult res = run_match(l, r, seed, max_cycles);
        m.scored = res.goals_right;
        m.conceded = res.goals_left;
        m.trace_hash = res.trace_hash;
    }
    return m;
}

std::vector<PairStats> play_loaded(const std::vector<std::optional<std::pair<LoadedConfig, LoadedConfig>>>& loaded,
                                   std::vector<PairStats> stats, const TournamentSettings& settings) {
    const std::size_t per = static_cast<std::size_t>(settings.matches_per_pair);
    std::vector<std::size_t> live;
    for (std::size_t p = 0; p < loaded.size(); ++p) {
        if (loaded[p]) live.push_back(p);
        if (loaded[p]) stats[p].matches.resize(per);
    }
    std::vector<std::string> errors(live.size() * per);
    parallel_for(live.size() * per, settings.threads, [&](std::size_t task) {
        const std::size_t p = live[task / per];
        const int m = static_cast<int>(task % per);
        const auto& [home, away] = *loaded[p];
        try {
            stats[p].matches[static_cast<std::size_t>(m)] =
                play(home, away, tournament_seed(settings.base_seed, p, m), m % 2 == 0, settings.max_cycles);
        } catch (const std::exception& e) {
            errors[task] = e.what();
        }
    });
    for (std::size_t i = 0; i < live.size(); ++i) {
        for (std::size_t m = 0; m < per; ++m) {
            const std::string& e = errors[i * per + m];
            if (e.empty()) continue;
            stats[live[i]].error = e;
            stats[live[i]].matches.clear();
            break;
        }
    }
    return stats;
}

} // namespace

// --- agent configs -------------------------------------------------------------

AgentConfig config_from_json(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) fail("config", "expected an object");
    static const std::set<std::string> top = {"name",     "blocking", "ore",       "unmark_simple", "unmark_passnet",
                                              "passive",  "ore_table", "weights_path", "physics",   "planner",
                                              "budget",   "evaluator", "defense",   "unmark",        "passnet"};
    for (const auto& [key, value] : j.items()) {
        if (!top.count(key)) fail("config", "unknown key '" + key + "'");
    }
    AgentConfig cfg;
    auto get = [&](const char* key, auto& field) {
        if (auto it = j.find(key); it != j.end()) read_value(*it, field, std::string("config.") + key);
    };
    get("name", cfg.name);
    get("blocking", cfg.blocking);
    get("ore", cfg.ore);
    get("unmark_simple", cfg.unmark_simple);
    get("unmark_passnet", cfg.unmark_passnet);
    get("passive", cfg.passive);
    if (auto it = j.find("ore_table"); it != j.end()) {
        if (!it->is_array() || it->size() != OreTable::kSize) fail("config.ore_table", "expected 7 numbers");
        for (std::size_t i = 0; i < OreTable::kSize; ++i) {
            read_value((*it)[i], cfg.ore_table.penalties[i], "config.ore_table[" + std::to_string(i) + "]");
        }
    }
    if (auto it = j.find("weights_path"); it != j.end() && !it->is_null()) {
        std::string p;
        read_value(*it, p, "config.weights_path");
        cfg.weights_path = resolve(p, base_dir).string();
    }
    auto section = [&](const char* key, auto& target, auto fields) {
        if (auto it = j.find(key); it != j.end()) read_object(*it, target, std::string("config.") + key, fields);
    };
    section("physics", cfg.physics, [](auto& p, auto&& f) { physics_fields(p, f); });
    section("planner", cfg.planner, [](auto& p, auto&& f) { planner_fields(p, f); });
    section("budget", cfg.planner.budget, [](auto& p, auto&& f) { budget_fields(p, f); });
    section("evaluator", cfg.evaluator, [](auto& p, auto&& f) { evaluator_fields(p, f); });
    section("defense", cfg.defense, [](auto& p, auto&& f) { defense_fields(p, f); });
    section("unmark", cfg.unmark, [](auto& p, auto&& f) { unmark_fields(p, f); });
    section("passnet", cfg.passnet, [](auto& p, auto&& f) { passnet_fields(p, f); });
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        fail("config", e.what());
    }
    return cfg;
}

json config_to_json(const AgentConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["blocking"] = cfg.blocking;
    j["ore"] = cfg.ore;
    j["unmark_simple"] = cfg.unmark_simple;
    j["unmark_passnet"] = cfg.unmark_passnet;
    j["passive"] = cfg.passive;
    j["ore_table"] = cfg.ore_table.penalties;
    if (cfg.weights_path) j["weights_path"] = *cfg.weights_path;
    j["physics"] = write_object(cfg.physics, [](auto& p, auto&& f) { physics_fields(p, f); });
    j["planner"] = write_object(cfg.planner, [](auto& p, auto&& f) { planner_fields(p, f); });
    j["budget"] = write_object(cfg.planner.budget, [](auto& p, auto&& f) { budget_fields(p, f); });
    j["evaluator"] = write_object(cfg.evaluator, [](auto& p, auto&& f) { evaluator_fields(p, f); });
    j["defense"] = write_object(cfg.defense, [](auto& p, auto&& f) { defense_fields(p, f); });
    j["unmark"] = write_object(cfg.unmark, [](auto& p, auto&& f) { unmark_fields(p, f); });
    j["passnet"] = write_object(cfg.passnet, [](auto& p, auto&& f) { passnet_fields(p, f); });
    return j;
}

AgentConfig load_config(const fs::path& path) {
    json j = read_json_file(path);
    try {
        return config_from_json(j, path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void save_config(const AgentConfig& config, const fs::path& path) {
    std::ofstream out(path);
    out << config_to_json(config).dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

// --- tournaments -----------------------------------------------------------------

void TournamentSettings::validate() const {
    if (matches_per_pair < 1) throw ConfigError("matches_per_pair must be >= 1");
    if (max_cycles < 1) throw ConfigError("max_cycles must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
}

Tournament load_manifest(const fs::path& path) {
    json j = read_json_file(path);
    const std::string where = path.string();
    if (!j.is_object()) fail(where, "expected an object");
    Tournament t;
    for (const auto& [key, value] : j.items()) {
        if (key == "base_seed") read_value(value, t.settings.base_seed, where + ".base_seed");
        else if (key == "matches_per_pair") read_value(value, t.settings.matches_per_pair, where + ".matches_per_pair");
        else if (key == "max_cycles") read_value(value, t.settings.max_cycles, where + ".max_cycles");
        else if (key == "threads") read_value(value, t.settings.threads, where + ".threads");
        else if (key == "pairs") {
            if (!value.is_array()) fail(where + ".pairs", "expected an array");
            for (std::size_t i = 0; i < value.size(); ++i) {
                const json& p = value[i];
                const std::string pw = where + ".pairs[" + std::to_string(i) + "]";
                if (!p.is_object() || p.size() != 2 || !p.contains("home") || !p.contains("away")) {
                    fail(pw, "expected {home, away}");
                }
                PairSpec spec;
                read_value(p["home"], spec.home, pw + ".home");
                read_value(p["away"], spec.away, pw + ".away");
                spec.home = resolve(spec.home, path.parent_path()).string();
                spec.away = resolve(spec.away, path.parent_path()).string();
                t.pairs.push_back(std::move(spec));
            }
        } else {
            fail(where, "unknown key '" + key + "'");
        }
    }
    try {
        t.settings.validate();
    } catch (const ConfigError& e) {
        fail(where, e.what());
    }
    return t;
}

int PairStats::wins() const {
    return static_cast<int>(std::count_if(matches.begin(), matches.end(), [](const PairMatch& m) { return m.scored > m.conceded; }));
}

int PairStats::draws() const {
    return static_cast<int>(std::count_if(matches.begin(), matches.end(), [](const PairMatch& m) { return m.scored == m.conceded; }));
}

int PairStats::losses() const {
    return static_cast<int>(std::count_if(matches.begin(), matches.end(), [](const PairMatch& m) { return m.scored < m.conceded; }));
}

std::optional<double> PairStats::win_rate() const {
    const int decided = wins() + losses();
    if (decided == 0) return std::nullopt;
    return static_cast<double>(wins()) / decided;
}

double PairStats::mean_scored() const {
    if (matches.empty()) return 0.0;
    double s = 0.0;
    for (const auto& m : matches) s += m.scored;
    return s / static_cast<double>(matches.size());
}

double PairStats::mean_conceded() const {
    if (matches.empty()) return 0.0;
    double s = 0.0;
    for (const auto& m : matches) s += m.conceded;
    return s / static_cast<double>(matches.size());
}

std::uint64_t tournament_seed(std::uint64_t base_seed, std::size_t pair, int match) {
    return mix_seed(base_seed, pair, static_cast<std::uint64_t>(match / 2));
}

std::vector<PairStats> run_pairs(const std::vector<ConfigPair>& pairs, const TournamentSettings& settings) {
    settings.validate();
    std::vector<PairStats> stats(pairs.size());
    std::vector<std::optional<std::pair<LoadedConfig, LoadedConfig>>> loaded(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        stats[p].home = pairs[p].home.name;
        stats[p].away = pairs[p].away.name;
        try {
            if (!(pairs[p].home.physics == pairs[p].away.physics)) throw ConfigError("configs disagree on physics");
            loaded[p].emplace(LoadedConfig{pairs[p].home, weights_for(pairs[p].home)},
                              LoadedConfig{pairs[p].away, weights_for(pairs[p].away)});
        } catch (const std::exception& e) {
            stats[p].error = e.what();
        }
    }
    return play_loaded(loaded, std::move(stats), settings);
}

std::vector<PairStats> run_tournament(const Tournament& tournament) {
    tournament.settings.validate();
    const auto& pairs = tournament.pairs;
    std::vector<PairStats> stats(pairs.size());
    std::vector<std::optional<std::pair<LoadedConfig, LoadedConfig>>> loaded(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        stats[p].home = pairs[p].home;
        stats[p].away = pairs[p].away;
        try {
            AgentConfig home = load_config(pairs[p].home);
            AgentConfig away = load_config(pairs[p].away);
            if (!(home.physics == away.physics)) throw ConfigError("configs disagree on physics");
            auto hw = weights_for(home);
            auto aw = weights_for(away);
            loaded[p].emplace(LoadedConfig{std::move(home), hw}, LoadedConfig{std::move(away), aw});
        } catch (const std::exception& e) {
            stats[p].error = e.what();
        }
    }
    return play_loaded(loaded, std::move(stats), tournament.settings);
}

std::string format_goals(double scored, double conceded) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f(%.1f)", scored, conceded);
    return buf;
}

std::pair<double, double> parse_goals(const std::string& cell) {
    static const std::regex re(R"(^(\d+(?:\.\d+)?)\((\d+(?:\.\d+)?)\)$)");
    std::smatch m;
    if (!std::regex_match(cell, m, re)) throw std::invalid_argument("not a goals cell: '" + cell + "'");
    return {std::stod(m[1].str()), std::stod(m[2].str())};
}

void write_stats_table(std::ostream& out, const std::vector<PairStats>& stats) {
    out << "home\taway\tmatches\twins\tdraws\tlosses\twin_rate\tgoals\n";
    for (const auto& s : stats) {
        out << s.home << '\t' << s.away << '\t';
        if (s.error) {
            out << "error\t" << *s.error << '\n';
            continue;
        }
        out << s.matches.size() << '\t' << s.wins() << '\t' << s.draws() << '\t' << s.losses() << '\t';
        if (auto wr = s.win_rate()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", *wr);
            out << buf;
        } else {
            out << "undefined";
        }
        out << '\t' << format_goals(s.mean_scored(), s.mean_conceded()) << '\n';
    }
}

// --- GA --------------------------------------------------------------------------

namespace {

AgentConfig with_table(AgentConfig base, const Chromosome& c) {
    base.ore = true;
    base.ore_table = c.table();
    return base;
}

} // namespace

double match_fitness(const Chromosome& c, const GaConfig& cfg, const AgentConfig& base, const AgentConfig& opponent,
                     std::ostream* warn) {
    if (cfg.fitness_matches == 0) {
        if (warn) *warn << "warning: fitness_matches is 0, fitness defined as 0\n";
        return 0.0;
    }
    LoadedConfig home{with_table(base, c), weights_for(base)};
    LoadedConfig away{opponent, weights_for(opponent)};
    double total = 0.0;
    for (int m = 0; m < cfg.fitness_matches; ++m) {
        PairMatch r = play(home, away, tournament_seed(cfg.base_seed, 0, m), m % 2 == 0, cfg.match_cycles);
        total += r.scored - r.conceded;
    }
    return total / cfg.fitness_matches;
}

PopulationFitness match_population_fitness(const GaConfig& cfg, const AgentConfig& base, const AgentConfig& opponent,
                                           std::ostream* warn) {
    auto cache = std::make_shared<std::map<Chromosome, double>>();
    auto base_w = weights_for(base);
    auto opp_w = weights_for(opponent);
    auto warned = std::make_shared<bool>(false);
    return [=](const std::vector<Chromosome>& population) {
        if (cfg.fitness_matches == 0) {
            if (warn && !*warned) *warn << "warning: fitness_matches is 0, fitness defined as 0\n";
            *warned = true;
            return std::vector<double>(population.size(), 0.0);
        }
        std::vector<Chromosome> fresh;
        for (const auto& c : population) {
            if (!cache->count(c) && std::find(fresh.begin(), fresh.end(), c) == fresh.end()) fresh.push_back(c);
        }
        const std::size_t per = static_cast<std::size_t>(cfg.fitness_matches);
        std::vector<int> diff(fresh.size() * per);
        const LoadedConfig away{opponent, opp_w};
        parallel_for(diff.size(), cfg.threads, [&](std::size_t task) {
            const LoadedConfig home{with_table(base, fresh[task / per]), base_w};
            const int m = static_cast<int>(task % per);
            PairMatch r = play(home, away, tournament_seed(cfg.base_seed, 0, m), m % 2 == 0, cfg.match_cycles);
            diff[task] = r.scored - r.conceded;
        });
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            double total = 0.0;
            for (std::size_t m = 0; m < per; ++m) total += diff[i * per + m];
            (*cache)[fresh[i]] = total / static_cast<double>(per);
        }
        std::vector<double> out;
        out.reserve(population.size());
        for (const auto& c : population) out.push_back(cache->at(c));
        return out;
    };
}

GaJob load_ga_job(const fs::path& path) {
    json j = read_json_file(path);
    const std::string where = path.string();
    if (!j.is_object()) fail(where, "expected an object");
    GaJob job;
    json ga = json::object();
    for (const auto& [key, value] : j.items()) {
        std::string p;
        if (key == "base_config") {
            read_value(value, p, where + "." + key);
            job.base_config = resolve(p, path.parent_path());
        } else if (key == "opponent_config") {
            read_value(value, p, where + "." + key);
            job.opponent_config = resolve(p, path.parent_path());
        } else if (key == "history_path") {
            read_value(value, p, where + "." + key);
            job.history_path = resolve(p, path.parent_path());
        } else if (key == "output_config") {
            read_value(value, p, where + "." + key);
            job.output_config = resolve(p, path.parent_path());
        } else {
            ga[key] = value;
        }
    }
    read_object(ga, job.ga, where, [](auto& g, auto&& f) { ga_fields(g, f); });
    if (!j.contains("history_path")) job.history_path = resolve(job.history_path, path.parent_path());
    if (!j.contains("output_config")) job.output_config = resolve(job.output_config, path.parent_path());
    try {
        job.ga.validate();
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
    return job;
}

void write_history_csv(std::ostream& out, const std::vector<GenerationStats>& history) {
    out << "gen,best,mean\n";
    char buf[96];
    for (const auto& h : history) {
        std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g\n", h.generation, h.best, h.mean);
        out << buf;
    }
}

EvolveResult run_ga(const GaJob& job, std::ostream* progress) {
    AgentConfig base = job.base_config ? load_config(*job.base_config) : full_config(OreTable{});
    AgentConfig opponent = job.opponent_config ? load_config(*job.opponent_config) : baseline_config();
    if (!(base.physics == opponent.physics)) throw ConfigError("base and opponent configs disagree on physics");
    GenerationObserver observer;
    if (progress) {
        observer = [progress](int gen, const std::vector<Chromosome>&, const std::vector<double>& scores) {
            const double best = *std::max_element(scores.begin(), scores.end());
            *progress << "generation " << gen << " best " << best << '\n' << std::flush;
        };
    }
    EvolveResult result = evolve(job.ga, match_population_fitness(job.ga, base, opponent, progress), observer);

    std::ofstream hist(job.history_path);
    write_history_csv(hist, result.history);
    if (!hist) throw std::runtime_error("cannot write " + job.history_path.string());
    AgentConfig best = with_table(base, result.best);
    best.name = base.name + "-ga";
    save_config(best, job.output_config);
    return result;
}

// --- datasets --------------------------------------------------------------------

std::vector<bool> test_split(std::size_t rows) {
    std::vector<bool> is_test(rows, false);
    const auto n_test = static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(rows)));
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(rows);
    for (std::size_t i = 0; i < rows; ++i) keyed[i] = {mix_seed(0x5eedu, i), i};
    std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(n_test), keyed.end());
    for (std::size_t k = 0; k < n_test; ++k) is_test[keyed[k].second] = true;
    return is_test;
}

ExtractResult extract_dataset(const AgentConfig& config, const std::vector<AgentConfig>& opponents, int matches,
                              const fs::path& out_dir, std::uint64_t base_seed, int max_cycles) {
    if (matches < 1) throw std::invalid_argument("extract: matches must be >= 1");
    if (opponents.empty()) throw std::invalid_argument("extract: at least one opponent is required");
    const auto own_w = weights_for(config);

    std::vector<Sample> samples;
    for (int m = 0; m < matches; ++m) {
        const AgentConfig& opp = opponents[static_cast<std::size_t>(m) % opponents.size()];
        if (!(opp.physics == config.physics)) throw ConfigError("extract: opponent physics differ");
        const Side ours = m % 2 == 0 ? Side::left : Side::right;
        MatchOptions options;
        options.on_cycle = [&](const WorldState& before, const Commands&, const TeamDecision& left,
                               const TeamDecision& right) {
            const TeamDecision& d = ours == Side::left ? left : right;
            if (!d.holder || !d.action || !d.action->is_pass() || !d.action->receiver) return;
            samples.push_back(Sample{extract_features(before, ours, config.physics), *d.action->receiver});
        };
        TeamAgent own(config, ours, own_w);
        TeamAgent other(opp, opposite(ours), weights_for(opp));
        const std::uint64_t seed = tournament_seed(base_seed, 0, m);
        if (ours == Side::left) run_match(own, other, seed, max_cycles, options);
        else run_match(other, own, seed, max_cycles, options);
    }

    ExtractResult result;
    result.rows = samples.size();
    result.train_path = out_dir / "train.csv";
    result.test_path = out_dir / "test.csv";
    const fs::path train_tmp = out_dir / "train.csv.partial";
    const fs::path test_tmp = out_dir / "test.csv.partial";
    auto cleanup = [&] {
        std::error_code ec;
        fs::remove(train_tmp, ec);
        fs::remove(test_tmp, ec);
    };
    try {
        fs::create_directories(out_dir);
        std::ofstream train_out(train_tmp);
        std::ofstream test_out(test_tmp);
        if (!train_out || !test_out) throw std::runtime_error("cannot create dataset files in " + out_dir.string());
        DatasetWriter train(train_out);
        DatasetWriter test(test_out);
        const std::vector<bool> is_test = test_split(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) (is_test[i] ? test : train).write(samples[i]);
        train_out.flush();
        test_out.flush();
        if (!train.ok() || !test.ok() || !train_out || !test_out) {
            throw std::runtime_error("write failed in " + out_dir.string());
        }
        result.train_rows = train.rows();
        result.test_rows = test.rows();
        train_out.close();
        test_out.close();
        fs::rename(train_tmp, result.train_path);
        fs::rename(test_tmp, result.test_path);
    } catch (...) {
        cleanup();
        throw;
    }
    return result;
}

// --- weights verification -------------------------------------------------------

FeatureVector verify_probe(int k) {
    FeatureVector v{};
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::sin(0.37 * (k + 1) + 0.011 * static_cast<double>(i) * (k % 7 + 1));
    }
    return v;
}

WeightsReport verify_weights(const MlpWeights& weights) {
    validate_pass_network(weights);
    WeightsReport report;
    report.dims = weights.dims();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (int k = 0; k < kVerifyProbes; ++k) {
        const auto out = mlp_forward(weights, verify_probe(k));
        for (std::size_t c = 0; c < out.size(); ++c) {
            report.checksum += out[c] * static_cast<double>(c + 1);
            const auto bits = std::bit_cast<std::uint64_t>(out[c]);
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xffu;
                h *= 0x100000001b3ull;
            }
        }
    }
    report.digest = h;
    return report;
}

WeightsReport verify_weights(const fs::path& path) { return verify_weights(load_weights(path)); }

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const unsigned workers = worker_count(threads, n);
    std::vector<std::exception_ptr> errors(n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace deskball
