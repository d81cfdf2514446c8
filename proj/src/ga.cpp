#include "deskball/ga.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace deskball {

namespace {

int uniform_int(GaRng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

} // namespace

bool Chromosome::is_valid() const {
    for (std::size_t i = 0; i < genes.size(); ++i) {
        if (genes[i] < 0 || genes[i] > kGeneMax) return false;
        if (i > 0 && genes[i] > genes[i - 1]) return false;
    }
    return true;
}

OreTable Chromosome::table() const {
    OreTable t;
    for (std::size_t i = 0; i < genes.size(); ++i) t.penalties[i] = genes[i];
    return t;
}

Chromosome repair(std::array<int, kGeneCount> genes) {
    for (auto& g : genes) g = std::clamp(g, 0, kGeneMax);
    for (std::size_t i = 1; i < genes.size(); ++i) {
        if (genes[i] > genes[i - 1]) genes[i] = std::max(0, genes[i - 1] - 1);
    }
    return Chromosome{genes};
}

Chromosome random_chromosome(GaRng& rng) {
    Chromosome c;
    for (auto& g : c.genes) g = uniform_int(rng, 0, kGeneMax);
    std::sort(c.genes.begin(), c.genes.end(), std::greater<>());
    return c;
}

Chromosome crossover(const Chromosome& a, const Chromosome& b, GaRng& rng) {
    std::array<int, kGeneCount> genes{};
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < genes.size(); ++i) genes[i] = coin(rng) ? a.genes[i] : b.genes[i];
    return repair(genes);
}

Chromosome mutate(const Chromosome& c, GaRng& rng, double rate) {
    Chromosome out = c;
    std::bernoulli_distribution flip(std::clamp(rate, 0.0, 1.0));
    for (std::size_t i = 0; i < out.genes.size(); ++i) {
        if (!flip(rng)) continue;
        int hi = i == 0 ? kGeneMax : out.genes[i - 1];
        int lo = i + 1 == out.genes.size() ? 0 : out.genes[i + 1];
        out.genes[i] = uniform_int(rng, lo, hi);
    }
    return out;
}

void GaConfig::validate() const {
    if (population_size < 1) throw std::invalid_argument("population_size must be >= 1");
    if (children < 0 || elite_kept < 0) throw std::invalid_argument("children and elite_kept must be >= 0");
    if (elite_kept + children != population_size) {
        throw std::invalid_argument("elite_kept + children must equal population_size");
    }
    if (parents_drawn != 2 * children) throw std::invalid_argument("parents_drawn must be twice children");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::invalid_argument("mutation_rate must be in [0, 1]");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (stagnation_limit < 1) throw std::invalid_argument("stagnation_limit must be >= 1");
    if (fitness_matches < 0) throw std::invalid_argument("fitness_matches must be >= 0");
    if (match_cycles < 1) throw std::invalid_argument("match_cycles must be >= 1");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

PopulationFitness cached_fitness(std::function<double(const Chromosome&)> fn) {
    auto cache = std::make_shared<std::map<Chromosome, double>>();
    return [fn = std::move(fn), cache](const std::vector<Chromosome>& population) {
        std::vector<double> out;
        out.reserve(population.size());
        for (const auto& c : population) {
            auto it = cache->find(c);
            if (it == cache->end()) it = cache->emplace(c, fn(c)).first;
            out.push_back(it->second);
        }
        return out;
    };
}

EvolveResult evolve(const GaConfig& cfg, const PopulationFitness& fitness, const GenerationObserver& observer) {
    cfg.validate();
    GaRng rng(cfg.base_seed);
    std::vector<Chromosome> population;
    population.reserve(static_cast<std::size_t>(cfg.population_size));
    for (int i = 0; i < cfg.population_size; ++i) population.push_back(random_chromosome(rng));

    EvolveResult result;
    bool have_best = false;
    int stagnant = 0;
    for (int gen = 0; gen < cfg.max_iterations; ++gen) {
        std::vector<double> scores = fitness(population);
        if (scores.size() != population.size()) throw std::logic_error("fitness returned the wrong number of scores");
        if (observer) observer(gen, population, scores);

        // Elites first: indices sorted by fitness, ties by position.
        std::vector<std::size_t> order(population.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

        const double gen_best = scores[order.front()];
        const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
        result.history.push_back(GenerationStats{gen, gen_best, mean});
        if (!have_best || gen_best > result.best_fitness) {
            result.best = population[order.front()];
            result.best_fitness = gen_best;
            have_best = true;
            stagnant = 0;
        } else if (++stagnant >= cfg.stagnation_limit) {
            break;
        }
        if (gen + 1 == cfg.max_iterations) break;

        const double lowest = *std::min_element(scores.begin(), scores.end());
        std::vector<double> weights(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) weights[i] = scores[i] - lowest + 1.0;
        std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

        std::vector<Chromosome> next;
        next.reserve(population.size());
        for (int e = 0; e < cfg.elite_kept; ++e) next.push_back(population[order[static_cast<std::size_t>(e)]]);
        for (int k = 0; k < cfg.children; ++k) {
            const Chromosome& a = population[pick(rng)];
            const Chromosome& b = population[pick(rng)];
            next.push_back(mutate(crossover(a, b, rng), rng, cfg.mutation_rate));
        }
        population = std::move(next);
    }
    return result;
}

} // namespace deskball
