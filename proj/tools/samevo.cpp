#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "samevo/experiment.hpp"

namespace {

int run_evolve(const samevo::ExperimentConfig& config) {
    const samevo::MetricsBundle bundle = samevo::run_experiment(config);
    std::cout << "wrote " << config.runs << " run(s) to " << config.out_dir << "\n";
    if (!bundle.mean_best_so_far.empty()) {
        std::cout << "final mean best-so-far fitness: " << bundle.mean_best_so_far.back()
                  << " m\n";
    }
    return 0;
}

int run_simulate(const std::string& sam_path, const std::string& phases_path, double duration,
                 double dt, int sample_every, double youngs, const std::string& out_path) {
    const samevo::Sam sam = samevo::load_sam(sam_path);
    const auto errors = samevo::validate(sam);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "invalid morphology: " << e << "\n";
        return 1;
    }
    const samevo::PhaseField phases = samevo::load_phase_field(phases_path);
    samevo::MaterialParams mat;
    mat.youngs_modulus = youngs;
    const samevo::SimTrace trace = samevo::simulate(sam, phases, mat, duration, sample_every, dt);
    std::ofstream out(out_path, std::ios::binary);
    if (!out || !(out << samevo::trace_to_csv(trace))) {
        std::cerr << "cannot write " << out_path << "\n";
        return 1;
    }
    std::cout << "wrote " << trace.samples.size() << " samples to " << out_path << "\n";
    std::cout << "max upward-bending displacement: " << samevo::fitness_from_trace(trace)
              << " m\n";
    return 0;
}

int run_gen_sam(const std::string& kind, std::uint64_t seed, int nx, int ny, int nz,
                const std::string& out_path) {
    samevo::Sam sam;
    if (kind == "striped") {
        sam = samevo::generate_striped_diagonal(nx, ny, nz, seed);
    } else if (kind == "pyramidal") {
        sam = samevo::generate_pyramidal(nx, ny, nz);
    } else {
        sam = samevo::generate_fragmented(nx, ny, nz, seed);
    }
    samevo::save_sam(sam, out_path);
    std::cout << "wrote " << nx << "x" << ny << "x" << nz << " morphology ("
              << sam.count_nonzero() << " voxels, " << sam.count_contractile()
              << " contractile) to " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuroevolution of phase-offset controllers for voxel soft actuators"};
    app.require_subcommand(1);

    std::string algorithm = "neat";
    std::string dictionary = "fd";
    std::string sam_set = "nf";
    std::vector<std::string> sam_paths;
    std::string evolve_out;
    int runs = 20, generations = 200, population = 50, workers = 0, sample_every = 8;
    std::uint64_t seed = 1;
    double duration = 1.0, dt = 0.0, youngs = 5e6;

    auto* evolve_cmd = app.add_subcommand("evolve", "Run replicated evolutionary experiments");
    evolve_cmd->add_option("--algorithm", algorithm, "neat, hyperneat or sga")
        ->check(CLI::IsMember({"neat", "hyperneat", "sga"}));
    evolve_cmd->add_option("--dictionary", dictionary, "activation dictionary")
        ->check(CLI::IsMember({"fd", "rd"}));
    evolve_cmd->add_option("--sam-set", sam_set, "built-in morphology set")
        ->check(CLI::IsMember({"nf", "nw"}));
    evolve_cmd->add_option("--sam", sam_paths, "custom morphology file (repeatable)");
    evolve_cmd->add_option("--runs", runs, "independent runs")->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--generations", generations)->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--population", population)->check(CLI::Range(2, 100000));
    evolve_cmd->add_option("--seed", seed, "master seed");
    evolve_cmd->add_option("--out", evolve_out, "output directory");
    evolve_cmd->add_option("--duration", duration, "simulated seconds per evaluation");
    evolve_cmd->add_option("--dt", dt, "timestep, 0 = auto");
    evolve_cmd->add_option("--youngs", youngs, "Young's modulus in Pa");
    evolve_cmd->add_option("--sample-every", sample_every, "trace sampling stride")
        ->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--workers", workers, "thread count, 0 = default");
    std::string config_path;
    evolve_cmd->add_option("--config", config_path,
                           "key=value file mirroring the flags; flags override");

    std::string sim_sam, sim_phases, sim_out;
    double sim_duration = 1.0, sim_dt = 0.0, sim_youngs = 5e6;
    int sim_sample_every = 8;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one morphology + phase field");
    simulate_cmd->add_option("--sam", sim_sam, "morphology file")->required();
    simulate_cmd->add_option("--phases", sim_phases, "phase field file")->required();
    simulate_cmd->add_option("--duration", sim_duration, "simulated seconds");
    simulate_cmd->add_option("--dt", sim_dt, "timestep, 0 = auto");
    simulate_cmd->add_option("--youngs", sim_youngs, "Young's modulus in Pa");
    simulate_cmd->add_option("--sample-every", sim_sample_every)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--out", sim_out, "trace CSV path")->required();

    std::string gen_kind, gen_out;
    std::uint64_t gen_seed = 1;
    int gen_nx = 10, gen_ny = 5, gen_nz = 5;
    auto* gen_cmd = app.add_subcommand("gen-sam", "Generate a morphology");
    gen_cmd->add_option("--kind", gen_kind, "striped, pyramidal or fragmented")
        ->required()
        ->check(CLI::IsMember({"striped", "pyramidal", "fragmented"}));
    gen_cmd->add_option("--seed", gen_seed);
    gen_cmd->add_option("--nx", gen_nx)->check(CLI::Range(1, samevo::kCanvasMaxX));
    gen_cmd->add_option("--ny", gen_ny)->check(CLI::Range(1, samevo::kCanvasMaxY));
    gen_cmd->add_option("--nz", gen_nz)->check(CLI::Range(1, samevo::kCanvasMaxZ));
    gen_cmd->add_option("--out", gen_out, "morphology file path")->required();

    std::string report_in, report_out;
    auto* report_cmd = app.add_subcommand("report", "Rebuild metrics and plots from run files");
    report_cmd->add_option("--in", report_in, "experiment directory")->required();
    report_cmd->add_option("--out", report_out, "report directory")->required();

    CLI11_PARSE(app, argc, argv);

    // CLI11 only applies config files on the top-level app, so evolve's
    // file is parsed by hand; a key is skipped when its flag was given.
    auto apply_evolve_config = [&](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw samevo::ConfigError("cannot open config file " + path);
        auto trim = [](std::string s) {
            const char* ws = " \t\r\n";
            const auto b = s.find_first_not_of(ws);
            if (b == std::string::npos) return std::string();
            return s.substr(b, s.find_last_not_of(ws) - b + 1);
        };
        auto flag_given = [&](const std::string& name) { return evolve_cmd->count(name) > 0; };
        std::vector<std::string> cfg_sams;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw samevo::ConfigError("config line " + std::to_string(lineno) +
                                          ": expected key=value");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            try {
                if (key == "algorithm") {
                    if (!flag_given("--algorithm")) algorithm = value;
                } else if (key == "dictionary") {
                    if (!flag_given("--dictionary")) dictionary = value;
                } else if (key == "sam-set") {
                    if (!flag_given("--sam-set")) sam_set = value;
                } else if (key == "sam") {
                    cfg_sams.push_back(value);
                } else if (key == "runs") {
                    if (!flag_given("--runs")) runs = std::stoi(value);
                } else if (key == "generations") {
                    if (!flag_given("--generations")) generations = std::stoi(value);
                } else if (key == "population") {
                    if (!flag_given("--population")) population = std::stoi(value);
                } else if (key == "seed") {
                    if (!flag_given("--seed")) seed = std::stoull(value);
                } else if (key == "out") {
                    if (!flag_given("--out")) evolve_out = value;
                } else if (key == "duration") {
                    if (!flag_given("--duration")) duration = std::stod(value);
                } else if (key == "dt") {
                    if (!flag_given("--dt")) dt = std::stod(value);
                } else if (key == "youngs") {
                    if (!flag_given("--youngs")) youngs = std::stod(value);
                } else if (key == "sample-every") {
                    if (!flag_given("--sample-every")) sample_every = std::stoi(value);
                } else if (key == "workers") {
                    if (!flag_given("--workers")) workers = std::stoi(value);
                } else {
                    throw samevo::ConfigError("config line " + std::to_string(lineno) +
                                              ": unknown key " + key);
                }
            } catch (const std::invalid_argument&) {
                throw samevo::ConfigError("config line " + std::to_string(lineno) +
                                          ": bad value for " + key);
            } catch (const std::out_of_range&) {
                throw samevo::ConfigError("config line " + std::to_string(lineno) +
                                          ": bad value for " + key);
            }
        }
        if (sam_paths.empty() && !cfg_sams.empty()) sam_paths = cfg_sams;
    };

    try {
        if (evolve_cmd->parsed()) {
            if (!config_path.empty()) apply_evolve_config(config_path);
            samevo::ExperimentConfig config;
            config.algorithm = samevo::algorithm_from_name(algorithm);
            config.dictionary = samevo::dictionary_from_name(dictionary);
            config.sam_set = sam_paths.empty() ? sam_set : "custom";
            config.sam_paths = sam_paths;
            config.runs = runs;
            config.generations = generations;
            config.population = population;
            config.master_seed = seed;
            config.out_dir = evolve_out;
            config.duration = duration;
            config.dt = dt;
            config.material.youngs_modulus = youngs;
            config.sample_every = sample_every;
            config.workers = workers;
            return run_evolve(config);
        }
        if (simulate_cmd->parsed()) {
            return run_simulate(sim_sam, sim_phases, sim_duration, sim_dt, sim_sample_every,
                                sim_youngs, sim_out);
        }
        if (gen_cmd->parsed()) {
            return run_gen_sam(gen_kind, gen_seed, gen_nx, gen_ny, gen_nz, gen_out);
        }
        if (report_cmd->parsed()) {
            samevo::write_report(report_in, report_out);
            std::cout << "wrote report to " << report_out << "\n";
            return 0;
        }
    } catch (const samevo::SimulationDiverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
