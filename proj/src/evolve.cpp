#include "samevo/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace samevo {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double fitness_of(const CppnGenome& g) {
    return g.fitness ? *g.fitness : kNegInf;
}

// Highest fitness, lowest index on ties.
int best_index(const std::vector<CppnGenome>& population) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(population.size()); ++i) {
        if (fitness_of(population[i]) > fitness_of(population[best])) best = i;
    }
    return best;
}

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

void append_double(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

} // namespace

std::vector<Species> speciate(const std::vector<CppnGenome>& population,
                              std::vector<Species> species_prev,
                              const EvolutionParams& params) {
    if (population.empty()) throw std::invalid_argument("speciate: empty population");

    std::vector<Species> species = std::move(species_prev);
    for (auto& sp : species) sp.members.clear();
    int next_id = 0;
    for (const auto& sp : species) next_id = std::max(next_id, sp.species_id + 1);

    for (int i = 0; i < static_cast<int>(population.size()); ++i) {
        bool placed = false;
        for (auto& sp : species) {
            double delta = compatibility_distance(population[i], sp.representative,
                                                  params.c_excess, params.c_disjoint, params.c_weight);
            if (delta < params.compatibility_threshold) {
                sp.members.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) {
            Species fresh;
            fresh.species_id = next_id++;
            fresh.representative = population[i];
            fresh.members.push_back(i);
            species.push_back(std::move(fresh));
        }
    }

    std::erase_if(species, [](const Species& sp) { return sp.members.empty(); });
    return species;
}

std::vector<double> shared_fitness(const Species& sp, const std::vector<CppnGenome>& population) {
    std::vector<double> adjusted;
    adjusted.reserve(sp.members.size());
    for (int idx : sp.members) {
        adjusted.push_back(fitness_of(population[idx]) / static_cast<double>(sp.members.size()));
    }
    return adjusted;
}

std::vector<int> allocate_offspring(const std::vector<Species>& species,
                                    const std::vector<CppnGenome>& population,
                                    int population_size, int max_stagnation) {
    const int n = static_cast<int>(species.size());
    if (n == 0) throw std::invalid_argument("allocate_offspring: no species");

    int champion = best_index(population);
    int champion_species = -1;
    std::vector<bool> eligible(n, false);
    for (int s = 0; s < n; ++s) {
        bool holds_champion =
            std::find(species[s].members.begin(), species[s].members.end(), champion) !=
            species[s].members.end();
        if (holds_champion) champion_species = s;
        eligible[s] = species[s].staleness < max_stagnation || holds_champion;
    }
    if (std::none_of(eligible.begin(), eligible.end(), [](bool e) { return e; })) {
        // Defensive: the champion's species is exempt above, so this only
        // fires if the champion somehow has no species. Revive the best.
        int best_sp = 0;
        for (int s = 1; s < n; ++s) {
            if (species[s].best_fitness > species[best_sp].best_fitness) best_sp = s;
        }
        eligible[best_sp] = true;
        champion_species = best_sp;
    }

    // Negative and non-finite adjusted fitness contribute no growth pressure.
    std::vector<double> weight(n, 0.0);
    double total = 0.0;
    for (int s = 0; s < n; ++s) {
        if (!eligible[s]) continue;
        for (double f : shared_fitness(species[s], population)) {
            if (std::isfinite(f) && f > 0.0) weight[s] += f;
        }
        total += weight[s];
    }
    if (total <= 0.0) {
        for (int s = 0; s < n; ++s) weight[s] = eligible[s] ? 1.0 : 0.0;
        total = std::accumulate(weight.begin(), weight.end(), 0.0);
    }

    // Largest-remainder rounding, ties broken by species_id.
    std::vector<int> counts(n, 0);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (int s = 0; s < n; ++s) {
        double quota = weight[s] / total * population_size;
        counts[s] = static_cast<int>(std::floor(quota));
        assigned += counts[s];
        if (eligible[s]) remainders.push_back({quota - counts[s], s});
    }
    std::sort(remainders.begin(), remainders.end(),
              [&](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first > b.first;
                  return species[a.second].species_id < species[b.second].species_id;
              });
    for (int k = 0; assigned < population_size; ++k) {
        ++counts[remainders[k % remainders.size()].second];
        ++assigned;
    }

    if (champion_species >= 0 && counts[champion_species] == 0) {
        int donor = -1;
        for (int s = 0; s < n; ++s) {
            if (counts[s] > 0 && (donor < 0 || counts[s] > counts[donor])) donor = s;
        }
        --counts[donor];
        ++counts[champion_species];
    }
    return counts;
}

std::vector<CppnGenome> reproduce(const Species& sp, const std::vector<CppnGenome>& population,
                                  int n_offspring, const EvolutionParams& params,
                                  InnovationRegistry& registry, Rng& rng,
                                  bool force_champion_copy) {
    std::vector<CppnGenome> offspring;
    if (n_offspring <= 0) return offspring;
    offspring.reserve(n_offspring);

    // Fitness-descending member order, population index breaking ties.
    std::vector<int> ranked = sp.members;
    std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
        double fa = fitness_of(population[a]);
        double fb = fitness_of(population[b]);
        if (fa != fb) return fa > fb;
        return a < b;
    });

    int pool_size = std::max(1, round_half_up(params.survival_threshold *
                                              static_cast<double>(ranked.size())));
    pool_size = std::min(pool_size, static_cast<int>(ranked.size()));

    int bred = 0;
    if (force_champion_copy || static_cast<int>(sp.members.size()) > 4) {
        offspring.push_back(population[ranked[0]]);
        ++bred;
    }
    for (; bred < n_offspring; ++bred) {
        CppnGenome child;
        if (pool_size == 1) {
            child = population[ranked[0]];
            child.fitness.reset();
        } else {
            int ia = rng.uniform_int(pool_size);
            int ib = rng.uniform_int(pool_size - 1);
            if (ib >= ia) ++ib;
            child = crossover(population[ranked[ia]], population[ranked[ib]], rng);
        }
        offspring.push_back(mutate(child, params.mutation, registry, rng));
    }
    offspring.resize(n_offspring);
    return offspring;
}

RunRecord evolve(const FitnessFn& evaluator, const EvolutionParams& params, std::uint64_t seed) {
    if (params.population_size < 1 || params.generations < 1) {
        throw std::invalid_argument("evolve: population_size and generations must be positive");
    }
    Rng rng(seed);
    InnovationRegistry registry;

    std::vector<CppnGenome> population;
    population.reserve(params.population_size);
    for (int i = 0; i < params.population_size; ++i) {
        population.push_back(make_minimal_genome(params.n_inputs, params.n_outputs,
                                                 params.mutation.dictionary, registry, rng));
    }

    std::vector<Species> species;
    RunRecord record;

    for (int gen = 0; gen < params.generations; ++gen) {
        const int pop_n = static_cast<int>(population.size());
        std::vector<double> fitness(pop_n, kNegInf);
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < pop_n; ++i) {
            double f = kNegInf;
            try {
                f = evaluator(population[i]);
            } catch (...) {
                f = kNegInf;
            }
            if (std::isnan(f)) f = kNegInf;
            fitness[i] = f;
        }
        for (int i = 0; i < pop_n; ++i) population[i].fitness = fitness[i];

        species = speciate(population, std::move(species), params);
        for (auto& sp : species) {
            double best = kNegInf;
            for (int idx : sp.members) best = std::max(best, fitness_of(population[idx]));
            if (best > sp.best_fitness) {
                sp.best_fitness = best;
                sp.staleness = 0;
            } else {
                ++sp.staleness;
            }
        }

        int champ = best_index(population);
        double best_f = fitness_of(population[champ]);
        double mean_f = 0.0;
        for (const auto& g : population) mean_f += fitness_of(g);
        mean_f /= static_cast<double>(population.size());
        record.generations.push_back({gen, best_f, mean_f, static_cast<int>(species.size()),
                                      population[champ].count_enabled_connections(),
                                      population[champ].count_hidden()});
        if (best_f > record.champion_fitness) {
            record.champion = population[champ];
            record.champion_fitness = best_f;
        }
        if (gen + 1 == params.generations) break;

        auto counts = allocate_offspring(species, population, params.population_size,
                                         params.max_stagnation);
        for (auto& sp : species) {
            sp.representative = population[sp.members[rng.uniform_int(sp.members.size())]];
        }
        registry.begin_generation();
        std::vector<CppnGenome> next;
        next.reserve(params.population_size);
        for (std::size_t s = 0; s < species.size(); ++s) {
            bool holds_champion = std::find(species[s].members.begin(), species[s].members.end(),
                                            champ) != species[s].members.end();
            auto kids = reproduce(species[s], population, counts[s], params, registry, rng,
                                  holds_champion);
            for (auto& k : kids) next.push_back(std::move(k));
        }
        population = std::move(next);
    }
    return record;
}

std::string generation_stats_csv(const std::vector<GenerationStats>& generations) {
    std::string out = "generation,best_fitness,mean_fitness,n_species,best_connections,best_hidden_nodes\n";
    for (const auto& g : generations) {
        out += std::to_string(g.generation);
        out += ',';
        append_double(out, g.best_fitness);
        out += ',';
        append_double(out, g.mean_fitness);
        out += ',';
        out += std::to_string(g.n_species);
        out += ',';
        out += std::to_string(g.best_connections);
        out += ',';
        out += std::to_string(g.best_hidden_nodes);
        out += '\n';
    }
    return out;
}

std::string run_record_to_csv(const RunRecord& record) {
    return generation_stats_csv(record.generations);
}

} // namespace samevo
