#pragma once

#include <array>
#include <string>
#include <variant>

#include "samevo/genome.hpp"
#include "samevo/sam.hpp"
#include "samevo/sga.hpp"
#include "samevo/sim.hpp"
#include "samevo/substrate.hpp"

namespace samevo {

enum class Algorithm { Neat, Hyperneat, Sga };

Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm algorithm);

// Query point for voxel (x,y,z): coordinates normalized to [-1,1] per axis
// (single-layer axes map to 0) plus the material channel {1 -> 0.5, 3 -> 1}.
std::array<double, 4> controller_query_point(const Sam& sam, int x, int y, int z);

// One CPPN evaluation per nonzero voxel; output clamped to [-2pi, 2pi],
// non-finite outputs decode as 0.
PhaseField decode_cppn_direct(const CppnGenome& genome, const Sam& sam);

// Substrate pass per nonzero voxel over the same query points.
PhaseField decode_with_substrate(const SubstrateNet& net, const Sam& sam);

// A champion plus the algorithm that produced it, so downstream metrics know
// how to decode it.
struct ControllerSource {
    Algorithm algorithm = Algorithm::Neat;
    std::variant<CppnGenome, SgaIndividual> payload;
};

ControllerSource make_neat_source(CppnGenome genome);
ControllerSource make_hyperneat_source(CppnGenome genome);
ControllerSource make_sga_source(SgaIndividual individual);

const CppnGenome& source_genome(const ControllerSource& source);
const SgaIndividual& source_individual(const ControllerSource& source);

// NEAT queries the CPPN directly, HyperNEAT builds the substrate once and
// runs it per voxel, SGA reads its phase matrix.
PhaseField decode_controller(const ControllerSource& source, const Sam& sam);
PhaseField decode_controller(Algorithm algorithm, const CppnGenome& genome, const Sam& sam);

struct EvalResult {
    double fitness = 0.0;
    bool diverged = false;
};

// decode -> simulate -> fitness_from_trace. A diverging simulation scores 0
// with the flag set instead of propagating.
EvalResult evaluate(const PhaseField& phases, const Sam& sam, const MaterialParams& mat,
                    double duration, double dt = 0.0, int sample_every = 8);
EvalResult evaluate(const ControllerSource& source, const Sam& sam, const MaterialParams& mat,
                    double duration, double dt = 0.0, int sample_every = 8);

} // namespace samevo
