// deskball command-line front end.
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "deskball/harness.hpp"

using namespace deskball;

namespace {

// One machine-parsable line per failure: "error: <kind>: <message>".
int report(const char* kind, const std::string& message) {
    std::string line = message;
    for (char& c : line) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    std::cerr << "error: " << kind << ": " << line << '\n';
    return 1;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
    return out;
}

int cmd_match(const std::string& home_path, const std::string& away_path, std::uint64_t seed, int cycles,
              const std::string& state_log, const std::string& tree_log) {
    AgentConfig home = load_config(home_path);
    AgentConfig away = load_config(away_path);
    MatchOptions options;
    std::ofstream state_out;
    std::ofstream tree_out;
    if (!state_log.empty()) {
        state_out = open_out(state_log);
        options.state_log = &state_out;
    }
    if (!tree_log.empty()) {
        tree_out = open_out(tree_log);
        options.tree_log = &tree_out;
    }
    MatchResult r = run_match(home, away, seed, cycles, options);
    std::printf("%s %d - %d %s\n", home.name.c_str(), r.goals_left, r.goals_right, away.name.c_str());
    std::printf("seed %" PRIu64 " cycles %d trace %016" PRIx64 "\n", seed, r.cycles_played, r.trace_hash);
    if (state_out.is_open() && !state_out.flush()) throw std::ios_base::failure("state log write failed");
    if (tree_out.is_open() && !tree_out.flush()) throw std::ios_base::failure("tree log write failed");
    return 0;
}

int cmd_bench(const std::string& manifest, const std::string& output, int threads) {
    Tournament t = load_manifest(manifest);
    if (threads >= 0) t.settings.threads = threads;
    auto stats = run_tournament(t);
    std::ofstream out = open_out(output);
    write_stats_table(out, stats);
    write_stats_table(std::cout, stats);
    if (!out.flush()) throw std::ios_base::failure("cannot write " + output);
    int failed = 0;
    for (const auto& s : stats) failed += s.error ? 1 : 0;
    if (failed > 0) return report("tournament", std::to_string(failed) + " pair(s) failed, see " + output);
    return 0;
}

int cmd_ga(const std::string& job_path) {
    GaJob job = load_ga_job(job_path);
    EvolveResult r = run_ga(job, &std::cout);
    std::printf("best");
    for (int g : r.best.genes) std::printf(" %d", g);
    std::printf(" fitness %.4f\n", r.best_fitness);
    std::printf("history %s\nconfig %s\n", job.history_path.c_str(), job.output_config.c_str());
    return 0;
}

int cmd_extract(const std::string& config_path, int matches, const std::string& out_dir,
                const std::vector<std::string>& opponent_paths, std::uint64_t seed, int cycles) {
    AgentConfig cfg = load_config(config_path);
    std::vector<AgentConfig> opponents;
    for (const auto& p : opponent_paths) opponents.push_back(load_config(p));
    if (opponents.empty()) opponents.push_back(baseline_config());
    ExtractResult r = extract_dataset(cfg, opponents, matches, out_dir, seed, cycles);
    std::printf("rows %zu train %zu test %zu\n", r.rows, r.train_rows, r.test_rows);
    std::printf("%s\n%s\n", r.train_path.c_str(), r.test_path.c_str());
    return 0;
}

int cmd_verify(const std::string& path) {
    WeightsReport r = verify_weights(std::filesystem::path(path));
    std::printf("dims");
    for (std::size_t i = 0; i < r.dims.size(); ++i) std::printf("%c%d", i == 0 ? ' ' : ',', r.dims[i]);
    std::printf("\nprobes %d\nchecksum %.12f\ndigest %016" PRIx64 "\n", kVerifyProbes, r.checksum, r.digest);
    return 0;
}

int cmd_random_weights(const std::string& path, std::uint64_t seed, bool zero) {
    MlpWeights w = zero ? zero_pass_network() : random_pass_network(seed);
    save_weights(w, path);
    std::printf("%s\n", path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deskball: 2D soccer decision engine and match harness"};
    app.require_subcommand(1);

    std::string home, away, state_log, tree_log, manifest, output, job, config, out_dir, weights;
    std::uint64_t seed = 1;
    int cycles = kDefaultMatchCycles;
    int matches = 1;
    int threads = -1;
    bool zero = false;
    std::vector<std::string> opponents;

    auto* match = app.add_subcommand("match", "Play one match between two configs");
    match->add_option("home", home, "Left team config")->required();
    match->add_option("away", away, "Right team config")->required();
    match->add_option("--seed", seed, "Match seed");
    match->add_option("--cycles", cycles, "Cycles to play")->check(CLI::PositiveNumber);
    match->add_option("--state-log", state_log, "Write one line per cycle here");
    match->add_option("--tree-log", tree_log, "Write every chain-search tree here");

    auto* bench = app.add_subcommand("bench", "Run a tournament manifest");
    bench->add_option("manifest", manifest, "Tournament manifest")->required();
    bench->add_option("output", output, "Statistics table path")->required();
    bench->add_option("--threads", threads, "Override the manifest's worker count (0 = all cores)");

    auto* ga = app.add_subcommand("ga", "Tune the ORE table with the genetic algorithm");
    ga->add_option("job", job, "GA job file")->required();

    auto* extract = app.add_subcommand("extract", "Record pass samples into train/test CSVs");
    extract->add_option("config", config, "Recording team config")->required();
    extract->add_option("matches", matches, "Number of matches")->required();
    extract->add_option("out_dir", out_dir, "Output directory")->required();
    extract->add_option("--opponent", opponents, "Opponent config, repeatable (default: baseline)");
    extract->add_option("--seed", seed, "Base seed");
    extract->add_option("--cycles", cycles, "Cycles per match")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify-weights", "Check a weights file and print its probe checksum");
    verify->add_option("path", weights, "Weights file")->required();

    auto* rnd = app.add_subcommand("random-weights", "Write a valid random pass network");
    rnd->add_option("path", weights, "Output path")->required();
    rnd->add_option("--seed", seed, "Generator seed");
    rnd->add_flag("--zero", zero, "All-zero weights (uniform output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report("usage", e.what());
        return 2;
    }

    try {
        if (*match) return cmd_match(home, away, seed, cycles, state_log, tree_log);
        if (*bench) return cmd_bench(manifest, output, threads);
        if (*ga) return cmd_ga(job);
        if (*extract) return cmd_extract(config, matches, out_dir, opponents, seed, cycles);
        if (*verify) return cmd_verify(weights);
        if (*rnd) return cmd_random_weights(weights, seed, zero);
    } catch (const ConfigError& e) {
        return report("config", e.what());
    } catch (const WeightsError& e) {
        return report("weights", e.what());
    } catch (const std::ios_base::failure& e) {
        return report("io", e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return report("io", e.what());
    } catch (const std::invalid_argument& e) {
        return report("invalid", e.what());
    } catch (const std::exception& e) {
        return report("runtime", e.what());
    }
    return 0;
}
