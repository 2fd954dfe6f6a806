#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "samevo/genome.hpp"

namespace samevo {

struct Species {
    int species_id = 0;
    CppnGenome representative;
    std::vector<int> members;  // indices into the current population
    int staleness = 0;
    double best_fitness = -std::numeric_limits<double>::infinity();
};

struct EvolutionParams {
    int population_size = 50;
    int generations = 200;
    int n_inputs = 4;
    int n_outputs = 1;
    double compatibility_threshold = 3.0;
    double c_excess = 1.0;
    double c_disjoint = 1.0;
    double c_weight = 0.5;
    int max_stagnation = 25;
    double survival_threshold = 0.2;
    MutationParams mutation;
};

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    int n_species = 0;
    int best_connections = 0;
    int best_hidden_nodes = 0;
};

struct RunRecord {
    std::vector<GenerationStats> generations;
    CppnGenome champion;
    double champion_fitness = -std::numeric_limits<double>::infinity();
};

// Must be thread-safe: the engine evaluates genomes concurrently.
using FitnessFn = std::function<double(const CppnGenome&)>;

// First-fit assignment against previous-generation representatives, then
// against species founded during this pass. Empty species are dropped.
// species_id, representative, staleness and best_fitness survive across calls.
std::vector<Species> speciate(const std::vector<CppnGenome>& population,
                              std::vector<Species> species_prev,
                              const EvolutionParams& params);

// Adjusted fitness per member, aligned with sp.members: fitness / |members|.
std::vector<double> shared_fitness(const Species& sp, const std::vector<CppnGenome>& population);

// Largest-remainder allocation proportional to summed positive adjusted
// fitness. Stale species get 0 unless they hold the population best; the
// best genome's species always gets at least 1 slot.
std::vector<int> allocate_offspring(const std::vector<Species>& species,
                                    const std::vector<CppnGenome>& population,
                                    int population_size, int max_stagnation);

// Top survival_threshold of the species (min 1) breed. The species champion
// is copied unmodified when the species is large enough (>4) or when
// force_champion_copy is set (used to keep the population best alive).
std::vector<CppnGenome> reproduce(const Species& sp, const std::vector<CppnGenome>& population,
                                  int n_offspring, const EvolutionParams& params,
                                  InnovationRegistry& registry, Rng& rng,
                                  bool force_champion_copy = false);

RunRecord evolve(const FitnessFn& evaluator, const EvolutionParams& params, std::uint64_t seed);

// Header plus one row per generation; doubles at 17 significant digits.
std::string generation_stats_csv(const std::vector<GenerationStats>& generations);
std::string run_record_to_csv(const RunRecord& record);

} // namespace samevo
