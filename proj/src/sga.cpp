#include "samevo/sga.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace samevo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double fitness_of(const SgaIndividual& ind) {
    return ind.fitness ? *ind.fitness : kNegInf;
}

} // namespace

SgaIndividual sga_init(Rng& rng, int rows, int cols) {
    if (rows < 1 || cols < 1) throw ConfigError("sga matrix dims must be positive");
    SgaIndividual ind;
    ind.rows = rows;
    ind.cols = cols;
    ind.matrix.resize(static_cast<std::size_t>(rows) * cols);
    for (auto& v : ind.matrix) v = rng.uniform(-kTwoPi, kTwoPi);
    return ind;
}

std::pair<SgaIndividual, SgaIndividual> sga_two_point_crossover(const SgaIndividual& a,
                                                                const SgaIndividual& b, Rng& rng,
                                                                double rate) {
    if (a.rows != b.rows || a.cols != b.cols) throw ConfigError("sga crossover shape mismatch");
    SgaIndividual ca = a;
    SgaIndividual cb = b;
    ca.fitness.reset();
    cb.fitness.reset();
    if (rng.bernoulli(rate)) {
        const int n = static_cast<int>(a.matrix.size());
        int i = rng.uniform_int(n + 1);
        int j = rng.uniform_int(n + 1);
        int lo = std::min(i, j);
        int hi = std::max(i, j);
        for (int k = lo; k < hi; ++k) std::swap(ca.matrix[k], cb.matrix[k]);
    }
    return {std::move(ca), std::move(cb)};
}

SgaIndividual sga_mutate(const SgaIndividual& ind, Rng& rng, double rate) {
    SgaIndividual out = ind;
    out.fitness.reset();
    if (rng.bernoulli(rate)) {
        int idx = rng.uniform_int(static_cast<int>(out.matrix.size()));
        out.matrix[idx] = rng.uniform(-kTwoPi, kTwoPi);
    }
    return out;
}

PhaseField sga_decode(const SgaIndividual& ind, const Sam& sam) {
    if (ind.rows != sam.nx || ind.cols != sam.ny * sam.nz) {
        throw ConfigError("sga matrix shape does not match the canvas");
    }
    PhaseField field(sam.nx, sam.ny, sam.nz);
    for (int x = 0; x < sam.nx; ++x) {
        for (int y = 0; y < sam.ny; ++y) {
            for (int z = 0; z < sam.nz; ++z) {
                if (sam.at(x, y, z) == kEmpty) continue;
                field.at(x, y, z) = ind.at(x, y * sam.nz + z);
            }
        }
    }
    return field;
}

SgaRunRecord sga_evolve(const SgaFitnessFn& evaluator, const SgaParams& params, std::uint64_t seed) {
    if (params.population_size < 2 || params.generations < 1) {
        throw std::invalid_argument("sga_evolve: population_size >= 2 and generations >= 1 required");
    }
    Rng rng(seed);

    std::vector<SgaIndividual> population;
    population.reserve(params.population_size);
    for (int i = 0; i < params.population_size; ++i) {
        population.push_back(sga_init(rng, params.rows, params.cols));
    }

    auto tournament = [&](const std::vector<SgaIndividual>& pop) {
        int best = rng.uniform_int(static_cast<int>(pop.size()));
        for (int k = 1; k < params.tournament_size; ++k) {
            int challenger = rng.uniform_int(static_cast<int>(pop.size()));
            if (fitness_of(pop[challenger]) > fitness_of(pop[best])) best = challenger;
        }
        return best;
    };

    SgaRunRecord record;
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

        int champ = 0;
        double mean_f = 0.0;
        for (int i = 0; i < pop_n; ++i) {
            if (fitness[i] > fitness[champ]) champ = i;
            mean_f += fitness[i];
        }
        mean_f /= static_cast<double>(pop_n);
        record.generations.push_back({gen, fitness[champ], mean_f, 1, 0, 0});
        if (fitness[champ] > record.champion_fitness) {
            record.champion = population[champ];
            record.champion_fitness = fitness[champ];
        }
        if (gen + 1 == params.generations) break;

        std::vector<SgaIndividual> next;
        next.reserve(params.population_size);
        next.push_back(population[champ]);
        while (static_cast<int>(next.size()) < params.population_size) {
            const SgaIndividual& pa = population[tournament(population)];
            const SgaIndividual& pb = population[tournament(population)];
            auto [ca, cb] = sga_two_point_crossover(pa, pb, rng, params.crossover_rate);
            next.push_back(sga_mutate(ca, rng, params.mutation_rate));
            if (static_cast<int>(next.size()) < params.population_size) {
                next.push_back(sga_mutate(cb, rng, params.mutation_rate));
            }
        }
        population = std::move(next);
    }
    return record;
}

std::string sga_individual_to_csv(const SgaIndividual& ind) {
    std::string out;
    char buf[64];
    for (int r = 0; r < ind.rows; ++r) {
        for (int c = 0; c < ind.cols; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", ind.at(r, c));
            if (c > 0) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

SgaIndividual sga_individual_from_csv(const std::string& text) {
    SgaIndividual ind;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                double v = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("invalid real '" + cell + "'", line_no);
            }
        }
        if (ind.cols == 0) {
            ind.cols = static_cast<int>(row.size());
        } else if (static_cast<int>(row.size()) != ind.cols) {
            throw ParseError("ragged row", line_no);
        }
        ind.matrix.insert(ind.matrix.end(), row.begin(), row.end());
        ++ind.rows;
    }
    if (ind.rows == 0) throw ParseError("empty individual", 1);
    return ind;
}

} // namespace samevo
