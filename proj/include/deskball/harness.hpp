#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "deskball/agent.hpp"
#include "deskball/ga.hpp"
#include "deskball/match.hpp"
#include "json.hpp"

namespace deskball {

/// Bad config or manifest content. `what()` is a single line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- agent configs -------------------------------------------------------------

/// Unknown keys are rejected. A relative weights_path is resolved against
/// `base_dir`. Throws ConfigError.
AgentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const AgentConfig& config);

AgentConfig load_config(const std::filesystem::path& path);
void save_config(const AgentConfig& config, const std::filesystem::path& path);

// --- tournaments -----------------------------------------------------------------

struct TournamentSettings {
    std::uint64_t base_seed = 1;
    int matches_per_pair = 10;
    int max_cycles = kDefaultMatchCycles;
    int threads = 1;  // 0 uses the hardware concurrency

    void validate() const;
};

/// Config file paths for one pairing.
struct PairSpec {
    std::string home;
    std::string away;
};

struct Tournament {
    TournamentSettings settings;
    std::vector<PairSpec> pairs;
};

/// Pair paths are resolved against the manifest's directory.
Tournament load_manifest(const std::filesystem::path& path);

/// One match seen from the home config.
struct PairMatch {
    std::uint64_t seed = 0;
    bool home_on_left = true;
    int scored = 0;
    int conceded = 0;
    std::uint64_t trace_hash = 0;
    bool operator==(const PairMatch&) const = default;
};

struct PairStats {
    std::string home;
    std::string away;
    std::optional<std::string> error;  // set when the pair could not be played
    std::vector<PairMatch> matches;

    int wins() const;
    int draws() const;
    int losses() const;
    /// wins / (wins + losses); empty when every match was drawn.
    std::optional<double> win_rate() const;
    double mean_scored() const;
    double mean_conceded() const;
};

/// Seed of match `match` in pair `pair`. Matches 2k and 2k+1 share a seed
/// and swap sides.
std::uint64_t tournament_seed(std::uint64_t base_seed, std::size_t pair, int match);

struct ConfigPair {
    AgentConfig home;
    AgentConfig away;
};

/// Plays every pair. Results do not depend on the thread count.
std::vector<PairStats> run_pairs(const std::vector<ConfigPair>& pairs, const TournamentSettings& settings);

/// Loads each pair's configs; a pair that fails to load gets `error` set and
/// the others still run.
std::vector<PairStats> run_tournament(const Tournament& tournament);

/// `4.4(0.2)`: mean goals scored, conceded in parentheses.
std::string format_goals(double scored, double conceded);
/// Inverse of format_goals. Throws std::invalid_argument.
std::pair<double, double> parse_goals(const std::string& cell);

/// Whitespace-separated table, one row per pair.
void write_stats_table(std::ostream& out, const std::vector<PairStats>& stats);

// --- GA --------------------------------------------------------------------------

/// Average goal difference of `base` carrying `c` as its ORE table (ORE on)
/// against `opponent`. Every chromosome plays the same seeds. Zero matches
/// gives 0 and a warning on `warn`.
double match_fitness(const Chromosome& c, const GaConfig& cfg, const AgentConfig& base, const AgentConfig& opponent,
                     std::ostream* warn = nullptr);

/// Fitness for a whole population, parallel over `cfg.threads`, cached by chromosome.
PopulationFitness match_population_fitness(const GaConfig& cfg, const AgentConfig& base, const AgentConfig& opponent,
                                           std::ostream* warn = nullptr);

/// GA job file: GaConfig fields plus where to read and write things.
struct GaJob {
    GaConfig ga;
    std::optional<std::filesystem::path> base_config;  // full-featured agent when empty
    std::optional<std::filesystem::path> opponent_config;  // baseline when empty
    std::filesystem::path history_path = "ga_history.csv";
    std::filesystem::path output_config = "ga_best.json";
};

GaJob load_ga_job(const std::filesystem::path& path);

/// Runs the GA, writes `gen,best,mean` history and the base config carrying
/// the best table. `progress` receives one line per generation when set.
EvolveResult run_ga(const GaJob& job, std::ostream* progress = nullptr);

void write_history_csv(std::ostream& out, const std::vector<GenerationStats>& history);

// --- datasets --------------------------------------------------------------------

struct ExtractResult {
    std::size_t rows = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::filesystem::path train_path;
    std::filesystem::path test_path;
};

/// True when row `index` goes to the test split. Exactly round(0.15 n) of
/// n rows are test rows, picked by a fixed hash of the row index.
std::vector<bool> test_split(std::size_t rows);

/// Plays `matches` matches of `config` against the opponents in turn,
/// alternating sides, and records every pass `config`'s team kicks. Writes
/// train.csv and test.csv into `out_dir`; on failure nothing is left behind.
ExtractResult extract_dataset(const AgentConfig& config, const std::vector<AgentConfig>& opponents, int matches,
                              const std::filesystem::path& out_dir, std::uint64_t base_seed = 1,
                              int max_cycles = kDefaultMatchCycles);

// --- weights verification -------------------------------------------------------

inline constexpr int kVerifyProbes = 100;

/// Probe k: feature i is sin(0.37 (k + 1) + 0.011 i (k % 7 + 1)).
FeatureVector verify_probe(int k);

struct WeightsReport {
    std::vector<int> dims;
    double checksum = 0.0;     // sum over probes and classes of p * (class + 1); compare with a tolerance
    std::uint64_t digest = 0;  // FNV-1a over the output bits; same engine, same file, same digest
};

/// Throws WeightsError with the loader's message.
WeightsReport verify_weights(const std::filesystem::path& path);
WeightsReport verify_weights(const MlpWeights& weights);

/// Runs fn(i) for i in [0, n) over up to `threads` workers. The first
/// exception (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

} // namespace deskball
