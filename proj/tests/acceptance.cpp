#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "samevo/experiment.hpp"

using namespace samevo;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNoBudget = 1e30;

MaterialParams desk_material() {
    MaterialParams mat;
    mat.youngs_modulus = 1e4;
    return mat;
}

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
    void expect(bool condition, const std::string& why) {
        if (!condition) fail(why);
    }
};

int g_failures = 0;

void report(int index, const char* name, const Outcome& outcome, double seconds, double budget) {
    const bool in_budget = seconds <= budget;
    const bool ok = outcome.ok && in_budget;
    std::string note;
    if (!outcome.ok) note = ": " + outcome.detail;
    if (!in_budget) note += std::string(note.empty() ? ": " : "; ") + "over time budget";
    std::printf("%s: criterion %d (%s) [%.1fs]%s\n", ok ? "PASS" : "FAIL", index, name, seconds,
                note.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

template <typename Fn>
void run_criterion(int index, const char* name, double budget, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        fn(outcome);
    } catch (const std::exception& e) {
        outcome.fail(std::string("unexpected exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(index, name, outcome, seconds, budget);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CppnGenome grow_genome(Rng& rng, InnovationRegistry& registry, int n_outputs, int max_mutations) {
    MutationParams params;
    CppnGenome g = make_minimal_genome(4, n_outputs, Dictionary::FD, registry, rng);
    const int n = static_cast<int>(rng.uniform_int(max_mutations + 1));
    for (int i = 0; i < n; ++i) g = mutate(g, params, registry, rng);
    return g;
}

// Gene alignment straight from the distance definition: innovations beyond
// the other parent's maximum are excess, other unmatched ones disjoint.
double delta_oracle(const CppnGenome& a, const CppnGenome& b, double c1, double c2, double c3) {
    std::map<int, double> wa, wb;
    for (const ConnectionGene& c : a.connections) wa[c.innovation] = c.weight;
    for (const ConnectionGene& c : b.connections) wb[c.innovation] = c.weight;
    const int max_a = wa.empty() ? -1 : wa.rbegin()->first;
    const int max_b = wb.empty() ? -1 : wb.rbegin()->first;
    int excess = 0, disjoint = 0, matches = 0;
    double weight_diff = 0.0;
    for (const auto& [innovation, weight] : wa) {
        auto it = wb.find(innovation);
        if (it != wb.end()) {
            ++matches;
            weight_diff += std::fabs(weight - it->second);
        } else if (innovation > max_b) {
            ++excess;
        } else {
            ++disjoint;
        }
    }
    for (const auto& [innovation, weight] : wb) {
        if (wa.count(innovation)) continue;
        if (innovation > max_a) {
            ++excess;
        } else {
            ++disjoint;
        }
    }
    double n = static_cast<double>(std::max(wa.size(), wb.size()));
    if (wa.size() < 20 && wb.size() < 20) n = 1.0;
    const double wbar = matches > 0 ? weight_diff / matches : 0.0;
    return c1 * excess / n + c2 * disjoint / n + c3 * wbar;
}

void criterion_1(Outcome& out) {
    Rng rng(1001);
    InnovationRegistry registry;
    std::vector<CppnGenome> pool;
    while (pool.size() < 200) {
        CppnGenome g = grow_genome(rng, registry, 1, 8);
        if (g.connections.size() <= 15) pool.push_back(std::move(g));
    }
    for (int pair = 0; pair < 1000; ++pair) {
        const CppnGenome& a = pool[rng.uniform_int(pool.size())];
        const CppnGenome& b = pool[rng.uniform_int(pool.size())];
        const double got = compatibility_distance(a, b, 1.0, 1.0, 0.5);
        const double want = delta_oracle(a, b, 1.0, 1.0, 0.5);
        if (std::fabs(got - want) > 1e-12) {
            out.fail("pair " + std::to_string(pair) + ": distance " + std::to_string(got) +
                     " vs oracle " + std::to_string(want));
            return;
        }
    }
}

void check_speciation(Outcome& out, const std::vector<CppnGenome>& population,
                      const std::vector<Species>& species, const EvolutionParams& params) {
    std::vector<int> seen(population.size(), 0);
    for (const Species& sp : species) {
        out.expect(!sp.members.empty(), "empty species kept");
        for (int idx : sp.members) {
            out.expect(idx >= 0 && idx < static_cast<int>(population.size()), "member out of range");
            ++seen[idx];
            const double delta = compatibility_distance(population[idx], sp.representative,
                                                        params.c_excess, params.c_disjoint,
                                                        params.c_weight);
            out.expect(delta < params.compatibility_threshold + 1e-12,
                       "member at distance " + std::to_string(delta) + " from its representative");
        }
    }
    for (int count : seen) out.expect(count == 1, "population is not partitioned");
}

void criterion_2(Outcome& out) {
    Rng rng(2002);
    EvolutionParams params;
    MutationParams mutation;
    for (int trial = 0; trial < 100 && out.ok; ++trial) {
        InnovationRegistry registry;
        const int n = 12 + static_cast<int>(rng.uniform_int(20));
        std::vector<CppnGenome> population;
        for (int i = 0; i < n; ++i) {
            CppnGenome g = make_minimal_genome(4, 1, Dictionary::FD, registry, rng);
            const int n_mut = static_cast<int>(rng.uniform_int(15));
            for (int k = 0; k < n_mut; ++k) g = mutate(g, mutation, registry, rng);
            population.push_back(std::move(g));
        }
        std::vector<Species> species = speciate(population, {}, params);
        check_speciation(out, population, species, params);

        registry.begin_generation();
        for (CppnGenome& g : population) g = mutate(g, mutation, registry, rng);
        species = speciate(population, std::move(species), params);
        check_speciation(out, population, species, params);
    }
}

void criterion_3(Outcome& out) {
    Rng rng(3003);
    const SubstrateLayout layout = make_substrate_layout();
    std::vector<std::array<double, 2>> coords;
    for (const auto& layer : layout.layers) {
        coords.insert(coords.end(), layer.begin(), layer.end());
    }
    for (int i = 0; i < 10000 && out.ok; ++i) {
        InnovationRegistry registry;
        const CppnGenome cppn = grow_genome(rng, registry, 2, 12);
        const SubstrateNet net = build_substrate(cppn, layout);
        out.expect(net.count_hidden() == 13,
                   "hidden count " + std::to_string(net.count_hidden()));
        for (const SubstrateConnection& conn : net.connections) {
            out.expect(conn.weight >= -3.0 && conn.weight <= 3.0,
                       "weight " + std::to_string(conn.weight) + " out of band");
            const auto& src = coords[conn.src];
            const auto& dst = coords[conn.dst];
            const std::array<double, 4> q{dst[0], dst[1], src[0], src[1]};
            const double raw = cppn_forward(cppn, q)[0];
            out.expect(std::fabs(raw) >= 0.2,
                       "kept connection with raw output " + std::to_string(raw));
        }
    }
}

void criterion_4(Outcome& out) {
    Rng rng(4004);
    const SubstrateLayout layout = make_substrate_layout();
    Sam sam;
    for (int i = 0; i < 10000 && out.ok; ++i) {
        if (i % 500 == 0) {
            const std::uint64_t seed = rng.uniform_int(1 << 20);
            sam = (i / 500) % 2 == 0 ? generate_striped_diagonal(10, 5, 5, seed)
                                     : generate_fragmented(8, 4, 4, seed);
        }
        InnovationRegistry registry;
        PhaseField field;
        if (i % 3 == 0) {
            field = decode_cppn_direct(grow_genome(rng, registry, 1, 10), sam);
        } else if (i % 3 == 1) {
            const CppnGenome cppn = grow_genome(rng, registry, 2, 10);
            field = decode_with_substrate(build_substrate(cppn, layout), sam);
        } else {
            field = sga_decode(sga_init(rng, sam.nx, sam.ny * sam.nz), sam);
        }
        for (double v : field.values) {
            out.expect(std::isfinite(v) && v >= -kTwoPi && v <= kTwoPi,
                       "phase offset " + std::to_string(v) + " escapes [-2pi, 2pi]");
        }
    }
}

void criterion_5(Outcome& out) {
    // (a) one free node on one spring: measured period vs 2 pi sqrt(m / k).
    {
        const double k = 100.0, m = 1.0, l0 = 0.1;
        LatticeState st;
        st.pos = {{0.0, 0.0, 0.0}, {l0 + 0.01, 0.0, 0.0}};
        st.vel = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
        st.mass = {1.0, m};
        st.fixed = {1, 0};
        st.springs = {{0, 1, l0, k, false, 0.0}};
        st.incidence = {{{0, 1.0}}, {{0, -1.0}}};
        st.k_max = k;
        st.m_min = m;
        MaterialParams mat;
        mat.damping_zeta = 0.0;
        const double dt = 0.002;
        double first = -1.0, last = -1.0;
        int crossings = 0;
        double prev = st.pos[1][0] - l0;
        for (int i = 0; i < 4000; ++i) {
            step(st, dt, mat);
            const double disp = st.pos[1][0] - l0;
            if (prev < 0.0 && disp >= 0.0) {
                const double t = st.time - dt * disp / (disp - prev);
                if (first < 0.0) first = t;
                last = t;
                ++crossings;
            }
            prev = disp;
        }
        const double expected = kTwoPi * std::sqrt(m / k);
        if (crossings < 2) {
            out.fail("oscillator never completed a cycle");
        } else {
            const double period = (last - first) / (crossings - 1);
            out.expect(std::fabs(period - expected) <= 0.02 * expected,
                       "period " + std::to_string(period) + " vs " + std::to_string(expected));
        }
    }

    // (b) free undamped passive lattice conserves momentum.
    {
        Sam sam(2, 2, 2);
        for (auto& v : sam.voxels) v = kPassive;
        MaterialParams mat = desk_material();
        mat.damping_zeta = 0.0;
        LatticeState st = build_lattice(sam, mat);
        std::fill(st.fixed.begin(), st.fixed.end(), 0);
        Rng rng(55);
        for (auto& v : st.vel)
            for (double& c : v) c = rng.uniform(-1e-3, 1e-3);
        std::array<double, 3> p0{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < st.pos.size(); ++i)
            for (int c = 0; c < 3; ++c) p0[c] += st.mass[i] * st.vel[i][c];
        const int n_steps = 10000;
        const double dt = st.default_dt();
        for (int i = 0; i < n_steps; ++i) step(st, dt, mat);
        std::array<double, 3> p1{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < st.pos.size(); ++i)
            for (int c = 0; c < 3; ++c) p1[c] += st.mass[i] * st.vel[i][c];
        for (int c = 0; c < 3; ++c) {
            out.expect(std::fabs(p1[c] - p0[c]) <= 1e-9 * n_steps,
                       "momentum drifted by " + std::to_string(std::fabs(p1[c] - p0[c])));
        }
    }

    // (c) mirroring the body and phases about y mirrors the trace.
    {
        Sam sam = generate_striped_diagonal(6, 5, 4, 3);
        Sam mirrored(sam.nx, sam.ny, sam.nz);
        PhaseField phases(sam.nx, sam.ny, sam.nz);
        PhaseField mirrored_phases(sam.nx, sam.ny, sam.nz);
        Rng rng(66);
        for (int x = 0; x < sam.nx; ++x) {
            for (int y = 0; y < sam.ny; ++y) {
                for (int z = 0; z < sam.nz; ++z) {
                    if (sam.at(x, y, z) == kContractile) {
                        phases.at(x, y, z) = rng.uniform(-kTwoPi, kTwoPi);
                    }
                }
            }
        }
        for (int x = 0; x < sam.nx; ++x) {
            for (int y = 0; y < sam.ny; ++y) {
                for (int z = 0; z < sam.nz; ++z) {
                    mirrored.at(x, y, z) = sam.at(x, sam.ny - 1 - y, z);
                    mirrored_phases.at(x, y, z) = phases.at(x, sam.ny - 1 - y, z);
                }
            }
        }
        MaterialParams mat = desk_material();
        const SimTrace base = simulate(sam, phases, mat, 0.2);
        const SimTrace flip = simulate(mirrored, mirrored_phases, mat, 0.2);
        const double span_y = sam.ny * mat.voxel_edge;
        for (std::size_t i = 0; i < base.samples.size(); ++i) {
            out.expect(base.samples[i].t == flip.samples[i].t, "sample times differ");
            const auto& cb = base.samples[i].centroid;
            const auto& cf = flip.samples[i].centroid;
            out.expect(std::fabs(cb[0] - cf[0]) <= 1e-7, "x centroid broke mirror symmetry");
            out.expect(std::fabs((span_y - cb[1]) - cf[1]) <= 1e-7,
                       "y centroid broke mirror symmetry");
            out.expect(std::fabs(cb[2] - cf[2]) <= 1e-7, "z centroid broke mirror symmetry");
        }
    }

    // (d) a fully passive body never scores.
    {
        Sam sam(3, 2, 2);
        for (auto& v : sam.voxels) v = kPassive;
        const SimTrace trace = simulate(sam, PhaseField(3, 2, 2), desk_material(), 0.1);
        out.expect(fitness_from_trace(trace) == 0.0, "all-passive fitness is nonzero");
    }
}

void criterion_6(Outcome& out) {
    Rng rng(6006);
    MaterialParams mat = desk_material();
    std::uint64_t sam_seed = 900;
    for (int draw = 0; draw < 50 && out.ok; ++draw) {
        std::vector<Sam> sams;
        for (int j = 0; j < 9; ++j) {
            sams.push_back(j % 2 == 0 ? generate_striped_diagonal(6, 4, 4, sam_seed++)
                                      : generate_fragmented(6, 4, 4, sam_seed++));
        }
        InnovationRegistry registry;
        ControllerSource source;
        if (draw % 3 == 0) {
            source = make_neat_source(grow_genome(rng, registry, 1, 10));
        } else if (draw % 3 == 1) {
            source = make_hyperneat_source(grow_genome(rng, registry, 2, 10));
        } else {
            source = make_sga_source(sga_init(rng, 6, 16));
        }
        double mean = 0.0;
        for (const Sam& sam : sams) mean += evaluate(source, sam, mat, 0.05).fitness;
        mean /= 9.0;
        const double got = aptitude(source, sams, mat, 0.05);
        out.expect(std::fabs(got - mean) <= 1e-12,
                   "draw " + std::to_string(draw) + ": aptitude " + std::to_string(got) +
                       " vs mean " + std::to_string(mean));
    }
}

ExperimentConfig determinism_config(Algorithm algorithm, const fs::path& out_dir, int workers) {
    ExperimentConfig config;
    config.algorithm = algorithm;
    config.sams_inline = {generate_striped_diagonal(10, 4, 4, 7)};
    config.runs = 3;
    config.generations = 20;
    config.population = 12;
    config.master_seed = 42;
    config.material = desk_material();
    config.duration = 0.25;
    config.out_dir = out_dir.string();
    config.workers = workers;
    return config;
}

void criterion_7(Outcome& out) {
    const fs::path a = fresh_dir("samevo_acc_det_w1");
    const fs::path b = fresh_dir("samevo_acc_det_w4");
    const fs::path c = fresh_dir("samevo_acc_det_w1_again");
    run_experiment(determinism_config(Algorithm::Neat, a, 1));
    run_experiment(determinism_config(Algorithm::Neat, b, 4));
    run_experiment(determinism_config(Algorithm::Neat, c, 1));
    out.expect(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"),
               "metrics differ between workers 1 and 4");
    out.expect(slurp(a / "metrics.csv") == slurp(c / "metrics.csv"),
               "metrics differ between repeats");
    out.expect(!slurp(a / "metrics.csv").empty(), "empty metrics CSV");
    out.expect(slurp(a / "champions.csv") == slurp(b / "champions.csv"),
               "champion tables differ between workers 1 and 4");

    for (Algorithm algorithm : {Algorithm::Sga, Algorithm::Hyperneat}) {
        const std::string tag = algorithm_name(algorithm);
        const fs::path d1 = fresh_dir("samevo_acc_det_" + tag + "_w1");
        const fs::path d4 = fresh_dir("samevo_acc_det_" + tag + "_w4");
        ExperimentConfig small = determinism_config(algorithm, d1, 1);
        small.runs = 2;
        small.generations = 3;
        small.population = 6;
        run_experiment(small);
        small.out_dir = d4.string();
        small.workers = 4;
        run_experiment(small);
        out.expect(slurp(d1 / "metrics.csv") == slurp(d4 / "metrics.csv"),
                   tag + " metrics differ between workers 1 and 4");
    }
}

struct BenchRecord {
    std::vector<double> final_best;     // per seed
    std::vector<CppnGenome> champions;  // NEAT and HyperNEAT only
};

std::map<Algorithm, BenchRecord> g_bench;

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void criterion_8(Outcome& out) {
    const Sam sam = generate_striped_diagonal(10, 5, 5, 101);
    const MaterialParams mat = desk_material();
    const double duration = 0.25;
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    g_bench.clear();

    for (std::uint64_t seed : seeds) {
        EvolutionParams params;
        params.population_size = 20;
        params.generations = 30;

        params.n_outputs = 1;
        const FitnessFn neat_fn = [&](const CppnGenome& g) {
            return evaluate(decode_cppn_direct(g, sam), sam, mat, duration).fitness;
        };
        RunRecord neat = evolve(neat_fn, params, seed);
        g_bench[Algorithm::Neat].final_best.push_back(neat.champion_fitness);
        g_bench[Algorithm::Neat].champions.push_back(neat.champion);

        params.n_outputs = 2;
        const SubstrateLayout layout = make_substrate_layout();
        const FitnessFn hyper_fn = [&](const CppnGenome& g) {
            return evaluate(decode_with_substrate(build_substrate(g, layout), sam), sam, mat,
                            duration)
                .fitness;
        };
        RunRecord hyper = evolve(hyper_fn, params, seed);
        g_bench[Algorithm::Hyperneat].final_best.push_back(hyper.champion_fitness);
        g_bench[Algorithm::Hyperneat].champions.push_back(hyper.champion);

        SgaParams sga_params;
        sga_params.population_size = 20;
        sga_params.generations = 30;
        sga_params.rows = sam.nx;
        sga_params.cols = sam.ny * sam.nz;
        const SgaFitnessFn sga_fn = [&](const SgaIndividual& ind) {
            return evaluate(sga_decode(ind, sam), sam, mat, duration).fitness;
        };
        SgaRunRecord sga = sga_evolve(sga_fn, sga_params, seed);
        g_bench[Algorithm::Sga].final_best.push_back(sga.champion_fitness);
    }

    const double m_neat = median(g_bench[Algorithm::Neat].final_best);
    const double m_hyper = median(g_bench[Algorithm::Hyperneat].final_best);
    const double m_sga = median(g_bench[Algorithm::Sga].final_best);
    out.expect(m_neat >= m_sga, "median NEAT " + std::to_string(m_neat) + " < median SGA " +
                                    std::to_string(m_sga));
    out.expect(m_neat >= m_hyper, "median NEAT " + std::to_string(m_neat) +
                                      " < median HyperNEAT " + std::to_string(m_hyper));
    int neat_wins = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (g_bench[Algorithm::Neat].final_best[i] > g_bench[Algorithm::Sga].final_best[i]) {
            ++neat_wins;
        }
    }
    out.expect(neat_wins >= 4,
               "NEAT beat SGA on only " + std::to_string(neat_wins) + " of 5 seeds");
}

void criterion_9(Outcome& out) {
    const auto& neat = g_bench[Algorithm::Neat];
    const auto& hyper = g_bench[Algorithm::Hyperneat];
    if (neat.champions.size() != 5 || hyper.champions.size() != 5) {
        out.fail("benchmark artifacts from criterion 8 are missing");
        return;
    }
    double neat_conns = 0.0, neat_hidden = 0.0, hyper_conns = 0.0;
    for (const CppnGenome& champion : neat.champions) {
        const ComplexityReport r = complexity_report(Algorithm::Neat, champion);
        neat_conns += r.connections;
        neat_hidden += r.hidden_nodes;
    }
    for (const CppnGenome& champion : hyper.champions) {
        hyper_conns += complexity_report(Algorithm::Hyperneat, champion).connections;
    }
    neat_conns /= 5.0;
    neat_hidden /= 5.0;
    hyper_conns /= 5.0;
    out.expect(neat_conns < hyper_conns,
               "mean NEAT connections " + std::to_string(neat_conns) +
                   " not below mean substrate connections " + std::to_string(hyper_conns));
    out.expect(neat_hidden < 13.0,
               "mean NEAT hidden nodes " + std::to_string(neat_hidden) + " not below 13");
}

void criterion_10(Outcome& out) {
    const Sam sam = generate_striped_diagonal(6, 4, 4, 1);
    const MaterialParams mat = desk_material();
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        EvolutionParams params;
        params.population_size = 20;
        params.generations = 1;
        const FitnessFn fn = [&](const CppnGenome& g) {
            return evaluate(decode_cppn_direct(g, sam), sam, mat, 0.05).fitness;
        };
        const RunRecord record = evolve(fn, params, seed);
        const ComplexityReport r = complexity_report(Algorithm::Neat, record.champion);
        out.expect(r.connections == 4, "generation-0 champion has " +
                                           std::to_string(r.connections) + " connections");
        out.expect(r.hidden_nodes == 0, "generation-0 champion has " +
                                            std::to_string(r.hidden_nodes) + " hidden nodes");
        out.expect(record.generations.size() == 1, "unexpected generation count");
        out.expect(record.generations[0].best_connections == 4, "stats disagree on connections");
        out.expect(record.generations[0].best_hidden_nodes == 0, "stats disagree on hidden nodes");
    }
}

} // namespace

int main() {
    run_criterion(1, "compatibility distance matches the alignment oracle", 5.0, criterion_1);
    run_criterion(2, "speciation partitions within the threshold", 10.0, criterion_2);
    run_criterion(3, "substrate weights, threshold and hidden count", 30.0, criterion_3);
    run_criterion(4, "decoded phase offsets stay in [-2pi, 2pi]", 60.0, criterion_4);
    run_criterion(5, "simulator physics sanity", 60.0, criterion_5);
    run_criterion(6, "aptitude equals the nine-body mean", kNoBudget, criterion_6);
    run_criterion(7, "byte-identical metrics across worker counts", 600.0, criterion_7);
    run_criterion(8, "desk-scale ranking neat >= sga and neat >= hyperneat", 1800.0, criterion_8);
    run_criterion(9, "champion complexity stays below the substrate's", kNoBudget, criterion_9);
    run_criterion(10, "evolution starts from the minimal topology", kNoBudget, criterion_10);

    if (g_failures == 0) {
        std::printf("all 10 criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
