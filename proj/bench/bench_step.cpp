#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "samevo/rng.hpp"
#include "samevo/sim.hpp"

using namespace samevo;

namespace {

PhaseField random_phases(const Sam& sam, std::uint64_t seed) {
    Rng rng(seed);
    PhaseField field(sam.nx, sam.ny, sam.nz);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int x = 0; x < sam.nx; ++x) {
        for (int y = 0; y < sam.ny; ++y) {
            for (int z = 0; z < sam.nz; ++z) {
                if (sam.at(x, y, z) == kContractile) {
                    field.at(x, y, z) = rng.uniform(-two_pi, two_pi);
                }
            }
        }
    }
    return field;
}

double time_steps(LatticeState& state, int n_steps, double dt, const MaterialParams& mat,
                  StepKernel kernel) {
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < n_steps; ++i) step(state, dt, mat, kernel);
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

bool states_identical(const LatticeState& a, const LatticeState& b) {
    return a.pos == b.pos && a.vel == b.vel;
}

} // namespace

int main(int argc, char** argv) {
    const int n_steps = argc > 1 ? std::atoi(argv[1]) : 4000;
    MaterialParams mat;
    mat.youngs_modulus = 1e4;

    const Sam sam = generate_striped_diagonal(16, 8, 8, 7);
    const PhaseField phases = random_phases(sam, 11);
    LatticeState serial_state = build_lattice(sam, mat, phases);
    LatticeState parallel_state = serial_state;
    const double dt = serial_state.default_dt();

    std::printf("lattice: %zu nodes, %zu springs, dt = %.3e s, %d steps\n",
                serial_state.pos.size(), serial_state.springs.size(), dt, n_steps);

    const double t_serial = time_steps(serial_state, n_steps, dt, mat, StepKernel::Serial);
    const double t_parallel = time_steps(parallel_state, n_steps, dt, mat, StepKernel::Parallel);

    std::printf("%-10s %10.4f s  %12.0f steps/s\n", "serial", t_serial, n_steps / t_serial);
    std::printf("%-10s %10.4f s  %12.0f steps/s  (%.2fx)\n", "parallel", t_parallel,
                n_steps / t_parallel, t_serial / t_parallel);

    if (!states_identical(serial_state, parallel_state)) {
        std::printf("kernel mismatch: serial and parallel states differ\n");
        return 1;
    }
    std::printf("states bit-identical after %d steps\n", n_steps);
    return 0;
}
