#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "samevo/evolve.hpp"
#include "samevo/sam.hpp"

namespace samevo {

// Direct phase-offset encoding: rows are x slices, columns flatten (y,z)
// as y*Z + z. All elements stay in [-2pi, 2pi].
struct SgaIndividual {
    int rows = 0;
    int cols = 0;
    std::vector<double> matrix;  // row-major
    std::optional<double> fitness;

    double at(int r, int c) const { return matrix[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return matrix[static_cast<std::size_t>(r) * cols + c]; }
};

struct SgaParams {
    int population_size = 50;
    int generations = 200;
    int rows = kCanvasMaxX;
    int cols = kCanvasMaxY * kCanvasMaxZ;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    int tournament_size = 3;
};

SgaIndividual sga_init(Rng& rng, int rows, int cols);

// With probability rate, two cuts over the flattened matrix swap the middle
// segment; otherwise the children are plain copies.
std::pair<SgaIndividual, SgaIndividual> sga_two_point_crossover(const SgaIndividual& a,
                                                                const SgaIndividual& b, Rng& rng,
                                                                double rate = 0.9);

// With probability rate, exactly one uniformly chosen element is resampled
// from U(-2pi, 2pi).
SgaIndividual sga_mutate(const SgaIndividual& ind, Rng& rng, double rate = 0.1);

// Voxel (x,y,z) reads matrix[x][y*Z + z]. Empty voxels are ignored but the
// matrix must cover the whole canvas.
PhaseField sga_decode(const SgaIndividual& ind, const Sam& sam);

using SgaFitnessFn = std::function<double(const SgaIndividual&)>;

struct SgaRunRecord {
    std::vector<GenerationStats> generations;
    SgaIndividual champion;
    double champion_fitness = -std::numeric_limits<double>::infinity();
};

// Generational GA: tournament selection (size 3), elitism of 1.
SgaRunRecord sga_evolve(const SgaFitnessFn& evaluator, const SgaParams& params, std::uint64_t seed);

// Flat CSV, one matrix row per line, 17 significant digits.
std::string sga_individual_to_csv(const SgaIndividual& ind);
SgaIndividual sga_individual_from_csv(const std::string& text);

} // namespace samevo
