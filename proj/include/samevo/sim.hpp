#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "samevo/sam.hpp"

namespace samevo {

struct SimulationDiverged : std::runtime_error {
    double time;
    explicit SimulationDiverged(double t)
        : std::runtime_error("simulation diverged at t = " + std::to_string(t) + " s"), time(t) {}
};

struct MaterialParams {
    double poisson_ratio = 0.35;
    double youngs_modulus = 5e6;  // Pa
    double static_friction = 1.0;   // stored for forward compatibility; no
    double dynamic_friction = 0.5;  // ground-contact model acts on them
    double actuation_amplitude = 0.5;  // volumetric fraction
    double actuation_frequency = 4.0;  // Hz
    double density = 1000.0;  // kg/m^3
    double voxel_edge = 0.01;  // m
    double damping_zeta = 0.1;
    bool gravity = false;

    // +-50% volume maps to an isotropic linear strain of (1.5)^(1/3) - 1.
    double linear_strain() const { return std::cbrt(1.0 + actuation_amplitude) - 1.0; }
};

struct Spring {
    int a = 0;
    int b = 0;
    double rest0 = 0.0;
    double k = 0.0;
    bool active = false;
    double phase = 0.0;
};

struct LatticeState {
    std::vector<std::array<double, 3>> pos;
    std::vector<std::array<double, 3>> vel;
    std::vector<double> mass;
    std::vector<char> fixed;
    std::vector<Spring> springs;
    double time = 0.0;
    long long step_count = 0;

    // Per node: (spring index, +1 when the node is endpoint a, -1 for b),
    // ascending spring index. Gives the gather kernel the same per-node
    // summation order as the serial scatter.
    std::vector<std::vector<std::pair<int, double>>> incidence;
    std::vector<int> free_face_nodes;  // nodes on the max-x corner plane
    double k_max = 0.0;
    double m_min = 0.0;

    // Reused per step; not part of the semantic state.
    std::vector<std::array<double, 3>> spring_force_scratch;

    double stable_dt_bound() const { return 0.5 * std::sqrt(m_min / k_max); }
    double default_dt() const { return 0.25 * std::sqrt(m_min / k_max); }
};

struct TraceSample {
    double t = 0.0;
    std::array<double, 3> centroid{};
};

struct SimTrace {
    std::vector<TraceSample> samples;
    int voxel_count = 0;
    std::uint64_t config_hash = 0;
};

// Corner-node lattice: one node per voxel corner (shared), axial springs on
// voxel edges, two diagonals per face. Springs bordering a contractile voxel
// are active and carry the mean phase of their bordering contractile voxels.
// Nodes on the x=0 plane are fixed.
LatticeState build_lattice(const Sam& sam, const MaterialParams& mat, const PhaseField& phases);
LatticeState build_lattice(const Sam& sam, const MaterialParams& mat);

// L0 for passive springs; L0 * (1 + strain * sin(2 pi f t + phase)) for
// active ones.
double rest_length(const Spring& spring, double t, const MaterialParams& mat);

enum class StepKernel { Serial, Parallel };

// Semi-implicit Euler step. Both kernels produce bit-identical states; the
// parallel one distributes the per-spring and per-node loops over OpenMP.
void step_serial(LatticeState& state, double dt, const MaterialParams& mat);
void step_parallel(LatticeState& state, double dt, const MaterialParams& mat);
void step(LatticeState& state, double dt, const MaterialParams& mat,
          StepKernel kernel = StepKernel::Parallel);

std::array<double, 3> free_face_centroid(const LatticeState& state);

// dt = 0 selects default_dt(). Samples the free-end face centroid at t = 0
// and then every sample_every steps (plus the final step).
SimTrace simulate(const Sam& sam, const PhaseField& phases, const MaterialParams& mat,
                  double duration, int sample_every = 8, double dt = 0.0,
                  StepKernel kernel = StepKernel::Parallel);

// Max planar (y,z) displacement over samples whose z did not drop below the
// start; the t=0 sample always qualifies, so a downward-only trace scores 0.
double fitness_from_trace(const SimTrace& trace);

// Unconstrained variant: max planar displacement over all samples.
double trace_max_planar_displacement(const SimTrace& trace);

std::uint64_t sim_config_hash(const MaterialParams& mat, double duration, double dt);

// Header line carries voxel_count and the config hash, then t,cx,cy,cz rows.
std::string trace_to_csv(const SimTrace& trace);

} // namespace samevo
