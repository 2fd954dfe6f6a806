#include "samevo/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "samevo/svg.hpp"

namespace samevo {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void ensure_writable_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    const fs::path probe = dir / ".write_probe";
    {
        std::ofstream out(probe, std::ios::binary);
        if (!out || !(out << "x")) {
            throw IoError("output directory not writable: " + dir.string());
        }
    }
    fs::remove(probe, ec);
}

void append_distinct(std::vector<Sam>& sams, Sam candidate) {
    for (const Sam& existing : sams) {
        if (existing == candidate) return;
    }
    sams.push_back(std::move(candidate));
}

std::vector<std::vector<double>> best_so_far_curves(const std::vector<std::vector<double>>& best) {
    std::vector<std::vector<double>> out = best;
    for (auto& run : out) {
        for (std::size_t g = 1; g < run.size(); ++g) run[g] = std::max(run[g], run[g - 1]);
    }
    return out;
}

std::string metrics_csv(const std::vector<int>& generation_numbers,
                        const std::vector<std::vector<double>>& best_per_run) {
    const auto so_far = best_so_far_curves(best_per_run);
    const std::size_t n_runs = best_per_run.size();
    const std::size_t len = best_per_run.front().size();
    std::string csv = "generation,mean_best,ci95_best,mean_best_so_far,ci95_best_so_far\n";
    CiCurve best_ci, so_far_ci;
    if (n_runs >= 2) {
        best_ci = ci95(best_per_run);
        so_far_ci = ci95(so_far);
    }
    for (std::size_t g = 0; g < len; ++g) {
        double sum_best = 0.0, sum_so_far = 0.0;
        for (std::size_t r = 0; r < n_runs; ++r) {
            sum_best += best_per_run[r][g];
            sum_so_far += so_far[r][g];
        }
        csv += std::to_string(generation_numbers[g]);
        csv += ',';
        csv += fmt17(n_runs >= 2 ? best_ci.mean[g] : sum_best / static_cast<double>(n_runs));
        csv += ',';
        if (n_runs >= 2) csv += fmt17(best_ci.half_width[g]);
        csv += ',';
        csv += fmt17(n_runs >= 2 ? so_far_ci.mean[g] : sum_so_far / static_cast<double>(n_runs));
        csv += ',';
        if (n_runs >= 2) csv += fmt17(so_far_ci.half_width[g]);
        csv += '\n';
    }
    return csv;
}

std::string fitness_svg_text(const std::string& title,
                             const std::vector<std::vector<double>>& best_per_run) {
    const auto so_far = best_so_far_curves(best_per_run);
    const std::size_t n_runs = best_per_run.size();
    SvgSeries best_series{"best per generation", "#2a7f2a", {}, {}};
    SvgSeries so_far_series{"best so far", "#1f4e9c", {}, {}};
    if (n_runs >= 2) {
        const CiCurve a = ci95(best_per_run);
        best_series.mean = a.mean;
        best_series.half_width = a.half_width;
        const CiCurve b = ci95(so_far);
        so_far_series.mean = b.mean;
        so_far_series.half_width = b.half_width;
    } else {
        best_series.mean = best_per_run.front();
        so_far_series.mean = so_far.front();
    }
    return render_line_chart_svg(title, "generation", "fitness (m)",
                                 {best_series, so_far_series});
}

std::string histogram_csv(const std::map<ActivationId, double>& histogram,
                          const std::vector<ActivationId>& order) {
    std::string csv = "activation,percent\n";
    for (ActivationId id : order) {
        const auto it = histogram.find(id);
        csv += activation_name(id);
        csv += ',';
        csv += fmt17(it == histogram.end() ? 0.0 : it->second);
        csv += '\n';
    }
    return csv;
}

std::string config_echo(const ExperimentConfig& config, const std::vector<Sam>& sams) {
    std::string text;
    text += "algorithm = " + algorithm_name(config.algorithm) + "\n";
    text += std::string("dictionary = ") + dictionary_name(config.dictionary) + "\n";
    text += "sam-set = " + config.sam_set + "\n";
    for (std::size_t i = 0; i < sams.size(); ++i) {
        text += "sam = sams/sam_" + std::to_string(i) + ".txt\n";
    }
    text += "runs = " + std::to_string(config.runs) + "\n";
    text += "generations = " + std::to_string(config.generations) + "\n";
    text += "population = " + std::to_string(config.population) + "\n";
    text += "seed = " + std::to_string(config.master_seed) + "\n";
    text += "duration = " + fmt17(config.duration) + "\n";
    text += "dt = " + fmt17(config.dt) + "\n";
    text += "youngs = " + fmt17(config.material.youngs_modulus) + "\n";
    text += "sample-every = " + std::to_string(config.sample_every) + "\n";
    return text;
}

struct RunOutcome {
    std::vector<GenerationStats> generations;
    ControllerSource champion;
    double champion_fitness = 0.0;
};

RunOutcome execute_run(const ExperimentConfig& config, const std::vector<Sam>& sams,
                       std::uint64_t seed) {
    const double inv_n = 1.0 / static_cast<double>(sams.size());
    RunOutcome outcome;
    if (config.algorithm == Algorithm::Sga) {
        SgaParams params;
        params.population_size = config.population;
        params.generations = config.generations;
        params.rows = sams.front().nx;
        params.cols = sams.front().ny * sams.front().nz;
        const SgaFitnessFn fn = [&](const SgaIndividual& ind) {
            double sum = 0.0;
            for (const Sam& sam : sams) {
                sum += evaluate(sga_decode(ind, sam), sam, config.material, config.duration,
                                config.dt, config.sample_every)
                           .fitness;
            }
            return sum * inv_n;
        };
        SgaRunRecord record = sga_evolve(fn, params, seed);
        outcome.generations = std::move(record.generations);
        outcome.champion = make_sga_source(std::move(record.champion));
        outcome.champion_fitness = record.champion_fitness;
        return outcome;
    }

    EvolutionParams params;
    params.population_size = config.population;
    params.generations = config.generations;
    params.n_inputs = 4;
    params.n_outputs = config.algorithm == Algorithm::Hyperneat ? 2 : 1;
    params.mutation.dictionary = config.dictionary;
    const SubstrateLayout layout = make_substrate_layout();
    const FitnessFn fn = [&](const CppnGenome& genome) {
        double sum = 0.0;
        if (config.algorithm == Algorithm::Hyperneat) {
            const SubstrateNet net = build_substrate(genome, layout);
            for (const Sam& sam : sams) {
                sum += evaluate(decode_with_substrate(net, sam), sam, config.material,
                                config.duration, config.dt, config.sample_every)
                           .fitness;
            }
        } else {
            for (const Sam& sam : sams) {
                sum += evaluate(decode_cppn_direct(genome, sam), sam, config.material,
                                config.duration, config.dt, config.sample_every)
                           .fitness;
            }
        }
        return sum * inv_n;
    };
    RunRecord record = evolve(fn, params, seed);
    outcome.generations = std::move(record.generations);
    outcome.champion_fitness = record.champion_fitness;
    outcome.champion = config.algorithm == Algorithm::Hyperneat
                           ? make_hyperneat_source(std::move(record.champion))
                           : make_neat_source(std::move(record.champion));
    return outcome;
}

} // namespace

std::vector<Sam> builtin_sam_set(const std::string& name) {
    constexpr int kNx = 10, kNy = 5, kNz = 5;
    std::vector<Sam> sams;
    if (name == "nf") {
        for (std::uint64_t seed = 101; seed < 131 && sams.size() < 3; ++seed) {
            append_distinct(sams, generate_striped_diagonal(kNx, kNy, kNz, seed));
        }
        append_distinct(sams, generate_pyramidal(kNx, kNy, kNz));
        for (std::uint64_t seed = 141; seed < 241 && sams.size() < 9; ++seed) {
            append_distinct(sams, generate_fragmented(kNx, kNy, kNz, seed));
        }
    } else if (name == "nw") {
        for (std::uint64_t seed = 211; seed < 311 && sams.size() < 9; ++seed) {
            append_distinct(sams, generate_fragmented(kNx, kNy, kNz, seed));
        }
    } else {
        throw ConfigError("unknown SAM set: " + name + " (expected nf or nw)");
    }
    if (sams.size() != 9) throw ConfigError("builtin SAM set did not reach nine members");
    return sams;
}

std::vector<Sam> resolve_sams(const ExperimentConfig& config) {
    if (!config.sams_inline.empty()) return config.sams_inline;
    if (config.sam_set == "custom" || !config.sam_paths.empty()) {
        if (config.sam_paths.empty()) {
            throw ConfigError("custom SAM set selected but no paths given");
        }
        std::vector<Sam> sams;
        for (const std::string& path : config.sam_paths) {
            Sam sam = load_sam(path);
            const auto errors = validate(sam);
            if (!errors.empty()) throw ConfigError(path + ": " + errors.front());
            sams.push_back(std::move(sam));
        }
        return sams;
    }
    return builtin_sam_set(config.sam_set);
}

MetricsBundle run_experiment(const ExperimentConfig& config) {
    if (config.runs < 1) throw ConfigError("runs must be >= 1");
    if (config.generations < 1) throw ConfigError("generations must be >= 1");
    if (config.population < 2) throw ConfigError("population must be >= 2");
    if (config.out_dir.empty()) throw ConfigError("output directory required");

    const std::vector<Sam> sams = resolve_sams(config);
    if (sams.empty()) throw ConfigError("no morphologies to evolve against");
    if (config.algorithm == Algorithm::Sga) {
        for (const Sam& sam : sams) {
            if (sam.nx != sams.front().nx || sam.ny != sams.front().ny ||
                sam.nz != sams.front().nz) {
                throw ConfigError("sga needs one canvas shape across the SAM set");
            }
        }
    }

#ifdef _OPENMP
    if (config.workers > 0) omp_set_num_threads(config.workers);
#endif

    const fs::path out_dir(config.out_dir);
    ensure_writable_dir(out_dir);
    ensure_writable_dir(out_dir / "sams");

    const int n_runs = config.runs;
    std::vector<RunOutcome> outcomes(n_runs);
    if (n_runs == 1) {
        outcomes[0] = execute_run(config, sams, derive_seed(config.master_seed, 0));
    } else {
        std::vector<std::exception_ptr> errors(n_runs);
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < n_runs; ++r) {
            try {
                outcomes[r] = execute_run(config, sams, derive_seed(config.master_seed, r));
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
        for (const auto& error : errors) {
            if (error) std::rethrow_exception(error);
        }
    }

    MetricsBundle bundle;
    std::vector<std::vector<double>> best_per_run(n_runs);
    std::vector<int> generation_numbers;
    for (int r = 0; r < n_runs; ++r) {
        for (const GenerationStats& gs : outcomes[r].generations) {
            best_per_run[r].push_back(gs.best_fitness);
        }
        bundle.champion_fitness.push_back(outcomes[r].champion_fitness);
    }
    for (const GenerationStats& gs : outcomes[0].generations) {
        generation_numbers.push_back(gs.generation);
    }

    const auto so_far = best_so_far_curves(best_per_run);
    if (n_runs >= 2) {
        const CiCurve a = ci95(best_per_run);
        bundle.mean_best = a.mean;
        bundle.ci_best = a.half_width;
        const CiCurve b = ci95(so_far);
        bundle.mean_best_so_far = b.mean;
        bundle.ci_best_so_far = b.half_width;
    } else {
        bundle.mean_best.assign(best_per_run.front().begin(), best_per_run.front().end());
        bundle.mean_best_so_far.assign(so_far.front().begin(), so_far.front().end());
    }

    if (sams.size() == 9) {
        for (int r = 0; r < n_runs; ++r) {
            bundle.champion_aptitude.push_back(
                aptitude(outcomes[r].champion, sams, config.material, config.duration, config.dt));
        }
    }
    std::vector<CppnGenome> champion_genomes;
    if (config.algorithm != Algorithm::Sga) {
        for (int r = 0; r < n_runs; ++r) {
            const CppnGenome& genome = source_genome(outcomes[r].champion);
            bundle.complexity.push_back(complexity_report(config.algorithm, genome));
            champion_genomes.push_back(genome);
        }
        bundle.histogram = activation_histogram(champion_genomes);
    }

    write_text_file(out_dir / "config.txt", config_echo(config, sams));
    for (std::size_t i = 0; i < sams.size(); ++i) {
        save_sam(sams[i], (out_dir / "sams" / ("sam_" + std::to_string(i) + ".txt")).string());
    }
    for (int r = 0; r < n_runs; ++r) {
        const std::string tag = std::to_string(r);
        write_text_file(out_dir / ("run_" + tag + ".csv"),
                        generation_stats_csv(outcomes[r].generations));
        if (config.algorithm == Algorithm::Sga) {
            write_text_file(out_dir / ("champion_" + tag + ".csv"),
                            sga_individual_to_csv(source_individual(outcomes[r].champion)));
        } else {
            write_text_file(out_dir / ("champion_" + tag + ".json"),
                            genome_to_json(source_genome(outcomes[r].champion)));
            if (config.algorithm == Algorithm::Hyperneat) {
                write_text_file(
                    out_dir / ("substrate_" + tag + ".json"),
                    substrate_to_json(build_substrate(source_genome(outcomes[r].champion),
                                                      make_substrate_layout())));
            }
        }
    }
    write_text_file(out_dir / "metrics.csv", metrics_csv(generation_numbers, best_per_run));

    std::string champions = "run,champion_fitness,connections,hidden_nodes,aptitude\n";
    for (int r = 0; r < n_runs; ++r) {
        champions += std::to_string(r);
        champions += ',';
        champions += fmt17(bundle.champion_fitness[r]);
        champions += ',';
        if (!bundle.complexity.empty()) champions += std::to_string(bundle.complexity[r].connections);
        champions += ',';
        if (!bundle.complexity.empty()) {
            champions += std::to_string(bundle.complexity[r].hidden_nodes);
        }
        champions += ',';
        if (!bundle.champion_aptitude.empty()) champions += fmt17(bundle.champion_aptitude[r]);
        champions += '\n';
    }
    write_text_file(out_dir / "champions.csv", champions);

    if (config.algorithm != Algorithm::Sga) {
        write_text_file(out_dir / "activation_histogram.csv",
                        histogram_csv(bundle.histogram, dictionary_members(config.dictionary)));
    }
    const std::string title =
        algorithm_name(config.algorithm) + std::string(" / ") + dictionary_name(config.dictionary);
    write_text_file(out_dir / "fitness.svg", fitness_svg_text(title, best_per_run));
    return bundle;
}

void write_report(const std::string& in_dir, const std::string& out_dir) {
    const fs::path in(in_dir);
    std::vector<std::vector<double>> best_per_run;
    std::vector<int> generation_numbers;
    std::vector<CppnGenome> champions;
    for (int r = 0;; ++r) {
        const fs::path run_csv = in / ("run_" + std::to_string(r) + ".csv");
        if (!fs::exists(run_csv)) break;
        const std::string text = read_text_file(run_csv);
        std::istringstream lines(text);
        std::string line;
        int line_no = 1;
        if (!std::getline(lines, line) || line.rfind("generation,", 0) != 0) {
            throw ParseError("bad run CSV header in " + run_csv.string(), line_no);
        }
        std::vector<double> best;
        std::vector<int> gens;
        while (std::getline(lines, line)) {
            ++line_no;
            if (line.empty()) continue;
            std::istringstream fields(line);
            std::string gen_field, best_field;
            if (!std::getline(fields, gen_field, ',') || !std::getline(fields, best_field, ',')) {
                throw ParseError("bad run CSV row in " + run_csv.string(), line_no);
            }
            try {
                gens.push_back(std::stoi(gen_field));
                best.push_back(std::stod(best_field));
            } catch (const std::exception&) {
                throw ParseError("bad number in " + run_csv.string(), line_no);
            }
        }
        if (best.empty()) throw ParseError("empty run CSV: " + run_csv.string(), line_no);
        if (!best_per_run.empty() && best.size() != best_per_run.front().size()) {
            throw ParseError("run CSVs differ in length under " + in_dir, line_no);
        }
        if (best_per_run.empty()) generation_numbers = gens;
        best_per_run.push_back(std::move(best));

        const fs::path champion_json = in / ("champion_" + std::to_string(r) + ".json");
        if (fs::exists(champion_json)) {
            champions.push_back(genome_from_json(read_text_file(champion_json)));
        }
    }
    if (best_per_run.empty()) throw IoError("no run CSVs found in " + in_dir);

    std::string title = fs::path(in_dir).filename().string();
    std::vector<ActivationId> order;
    const fs::path config_txt = in / "config.txt";
    if (fs::exists(config_txt)) {
        std::istringstream lines(read_text_file(config_txt));
        std::string line;
        std::string algorithm, dictionary;
        while (std::getline(lines, line)) {
            std::istringstream kv(line);
            std::string key, eq, value;
            if (kv >> key >> eq >> value && eq == "=") {
                if (key == "algorithm") algorithm = value;
                if (key == "dictionary") dictionary = value;
            }
        }
        if (!algorithm.empty() && !dictionary.empty()) {
            title = algorithm + " / " + dictionary;
            order = dictionary_members(dictionary_from_name(dictionary));
        }
    }

    const fs::path out(out_dir);
    ensure_writable_dir(out);
    write_text_file(out / "metrics.csv", metrics_csv(generation_numbers, best_per_run));
    write_text_file(out / "fitness.svg", fitness_svg_text(title, best_per_run));
    if (!champions.empty()) {
        const auto histogram = activation_histogram(champions);
        if (order.empty()) {
            for (const auto& [id, share] : histogram) order.push_back(id);
        }
        write_text_file(out / "activation_histogram.csv", histogram_csv(histogram, order));
    }
}

} // namespace samevo
