#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "deskball/evaluator.hpp"

namespace deskball {

inline constexpr int kGeneCount = OreTable::kSize;
inline constexpr int kGeneMax = 50;

/// Integer genes; the chromosome is the OreTable the agent plays with.
struct Chromosome {
    std::array<int, kGeneCount> genes{};

    bool is_valid() const;
    OreTable table() const;
    bool operator==(const Chromosome&) const = default;
    auto operator<=>(const Chromosome&) const = default;
};

using GaRng = std::mt19937_64;

/// Clamps every gene to [0, 50], then walks left to right and replaces any
/// gene above its predecessor with max(0, predecessor - 1).
Chromosome repair(std::array<int, kGeneCount> genes);

/// Seven uniform draws on 0..50 sorted into non-increasing order.
Chromosome random_chromosome(GaRng& rng);

/// Uniform gene-wise crossover followed by repair.
Chromosome crossover(const Chromosome& a, const Chromosome& b, GaRng& rng);

/// Each gene is redrawn with probability `rate` inside the band left by its
/// neighbours, so the result stays valid.
Chromosome mutate(const Chromosome& c, GaRng& rng, double rate);

struct GaConfig {
    int population_size = 100;
    int parents_drawn = 160;
    int children = 80;
    int elite_kept = 20;
    double mutation_rate = 0.1;
    int max_iterations = 100;
    int stagnation_limit = 10;  // generations without a better best
    int fitness_matches = 10;
    int match_cycles = 6000;
    std::uint64_t base_seed = 1;
    int threads = 1;  // fitness workers; 0 uses the hardware concurrency

    /// Throws std::invalid_argument when sizes are inconsistent.
    void validate() const;
};

struct GenerationStats {
    int generation = 0;
    double best = 0.0;
    double mean = 0.0;
};

struct EvolveResult {
    Chromosome best;
    double best_fitness = 0.0;
    std::vector<GenerationStats> history;
};

/// Scores a whole population; results are in population order.
using PopulationFitness = std::function<std::vector<double>(const std::vector<Chromosome>&)>;

/// Called after each generation is scored, before the next one is bred.
using GenerationObserver =
    std::function<void(int generation, const std::vector<Chromosome>& population, const std::vector<double>& fitness)>;

/// Wraps a per-chromosome function; fitness of a chromosome seen before is
/// reused rather than recomputed.
PopulationFitness cached_fitness(std::function<double(const Chromosome&)> fn);

EvolveResult evolve(const GaConfig& cfg, const PopulationFitness& fitness, const GenerationObserver& observer = {});

} // namespace deskball
