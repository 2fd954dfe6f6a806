#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "samevo/controller.hpp"
#include "samevo/evolve.hpp"
#include "samevo/metrics.hpp"

namespace samevo {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::Neat;
    Dictionary dictionary = Dictionary::FD;
    std::string sam_set = "nf";          // "nf", "nw", or "custom"
    std::vector<std::string> sam_paths;  // morphology files for "custom"
    std::vector<Sam> sams_inline;        // when nonempty, used as-is
    int runs = 20;
    int generations = 200;
    int population = 50;
    std::uint64_t master_seed = 1;
    std::string out_dir;
    MaterialParams material;
    double duration = 1.0;
    double dt = 0.0;  // 0 selects the simulator default
    int sample_every = 8;
    int workers = 0;  // 0 keeps the OpenMP default
};

// Deterministic built-in morphology sets, nine members each on a shared
// 10x5x5 canvas: "nf" mixes striped, pyramidal and lightly carved blocks,
// "nw" is all randomly carved blocks.
std::vector<Sam> builtin_sam_set(const std::string& name);

// Inline SAMs, else loaded custom paths, else the built-in set. Loaded SAMs
// are validated.
std::vector<Sam> resolve_sams(const ExperimentConfig& config);

struct MetricsBundle {
    std::vector<double> mean_best;          // per generation, across runs
    std::vector<double> ci_best;            // empty for a single run
    std::vector<double> mean_best_so_far;
    std::vector<double> ci_best_so_far;
    std::vector<double> champion_fitness;   // per run
    std::vector<double> champion_aptitude;  // empty unless the SAM list has 9 entries
    std::vector<ComplexityReport> complexity;  // per run; empty for SGA
    std::map<ActivationId, double> histogram;  // over champions; empty for SGA
};

// Executes the configured runs (parallel across runs, evaluations inside a
// run parallel when runs do not saturate the team), then writes config.txt,
// the SAMs used, per-run stats CSVs, champion files, metrics.csv,
// champions.csv, activation_histogram.csv and fitness.svg into out_dir.
// Output bytes depend only on the config, not on worker count.
MetricsBundle run_experiment(const ExperimentConfig& config);

// Rebuilds metrics.csv, fitness.svg and (when champion genomes are present)
// activation_histogram.csv from the run artifacts found in in_dir.
void write_report(const std::string& in_dir, const std::string& out_dir);

} // namespace samevo
