#include "samevo/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "samevo/activation.hpp"

namespace samevo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double axis_coord(int c, int extent) {
    if (extent <= 1) return 0.0;
    return 2.0 * c / (extent - 1.0) - 1.0;
}

double material_value(std::uint8_t code) {
    if (code == kPassive) return 0.5;
    if (code == kContractile) return 1.0;
    return 0.0;
}

double clamp_phase(double v) {
    if (!std::isfinite(v)) return 0.0;
    return std::clamp(v, -kTwoPi, kTwoPi);
}

} // namespace

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "neat") return Algorithm::Neat;
    if (name == "hyperneat") return Algorithm::Hyperneat;
    if (name == "sga") return Algorithm::Sga;
    throw ConfigError("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Neat: return "neat";
        case Algorithm::Hyperneat: return "hyperneat";
        case Algorithm::Sga: return "sga";
    }
    throw ConfigError("unknown algorithm enum value");
}

std::array<double, 4> controller_query_point(const Sam& sam, int x, int y, int z) {
    return {axis_coord(x, sam.nx), axis_coord(y, sam.ny), axis_coord(z, sam.nz),
            material_value(sam.at(x, y, z))};
}

PhaseField decode_cppn_direct(const CppnGenome& genome, const Sam& sam) {
    PhaseField field(sam.nx, sam.ny, sam.nz);
    for (int x = 0; x < sam.nx; ++x) {
        for (int y = 0; y < sam.ny; ++y) {
            for (int z = 0; z < sam.nz; ++z) {
                if (sam.at(x, y, z) == kEmpty) continue;
                const auto q = controller_query_point(sam, x, y, z);
                field.at(x, y, z) = clamp_phase(cppn_forward(genome, q)[0]);
            }
        }
    }
    return field;
}

PhaseField decode_with_substrate(const SubstrateNet& net, const Sam& sam) {
    PhaseField field(sam.nx, sam.ny, sam.nz);
    for (int x = 0; x < sam.nx; ++x) {
        for (int y = 0; y < sam.ny; ++y) {
            for (int z = 0; z < sam.nz; ++z) {
                if (sam.at(x, y, z) == kEmpty) continue;
                const auto q = controller_query_point(sam, x, y, z);
                field.at(x, y, z) = clamp_phase(substrate_forward(net, q));
            }
        }
    }
    return field;
}

ControllerSource make_neat_source(CppnGenome genome) {
    return {Algorithm::Neat, std::move(genome)};
}

ControllerSource make_hyperneat_source(CppnGenome genome) {
    return {Algorithm::Hyperneat, std::move(genome)};
}

ControllerSource make_sga_source(SgaIndividual individual) {
    return {Algorithm::Sga, std::move(individual)};
}

const CppnGenome& source_genome(const ControllerSource& source) {
    const auto* genome = std::get_if<CppnGenome>(&source.payload);
    if (genome == nullptr) throw ConfigError("controller source does not hold a genome");
    return *genome;
}

const SgaIndividual& source_individual(const ControllerSource& source) {
    const auto* ind = std::get_if<SgaIndividual>(&source.payload);
    if (ind == nullptr) throw ConfigError("controller source does not hold an SGA individual");
    return *ind;
}

PhaseField decode_controller(const ControllerSource& source, const Sam& sam) {
    switch (source.algorithm) {
        case Algorithm::Neat:
            return decode_cppn_direct(source_genome(source), sam);
        case Algorithm::Hyperneat:
            return decode_with_substrate(build_substrate(source_genome(source), make_substrate_layout()),
                                         sam);
        case Algorithm::Sga:
            return sga_decode(source_individual(source), sam);
    }
    throw ConfigError("unknown algorithm enum value");
}

PhaseField decode_controller(Algorithm algorithm, const CppnGenome& genome, const Sam& sam) {
    if (algorithm == Algorithm::Neat) return decode_cppn_direct(genome, sam);
    if (algorithm == Algorithm::Hyperneat) {
        return decode_with_substrate(build_substrate(genome, make_substrate_layout()), sam);
    }
    throw ConfigError("decode_controller: a genome decodes under neat or hyperneat only");
}

EvalResult evaluate(const PhaseField& phases, const Sam& sam, const MaterialParams& mat,
                    double duration, double dt, int sample_every) {
    try {
        const SimTrace trace = simulate(sam, phases, mat, duration, sample_every, dt);
        return {fitness_from_trace(trace), false};
    } catch (const SimulationDiverged&) {
        return {0.0, true};
    }
}

EvalResult evaluate(const ControllerSource& source, const Sam& sam, const MaterialParams& mat,
                    double duration, double dt, int sample_every) {
    return evaluate(decode_controller(source, sam), sam, mat, duration, dt, sample_every);
}

} // namespace samevo
