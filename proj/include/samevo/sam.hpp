#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "samevo/activation.hpp"
#include "samevo/rng.hpp"

namespace samevo {

struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& msg, int line_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

inline constexpr int kCanvasMaxX = 20;
inline constexpr int kCanvasMaxY = 8;
inline constexpr int kCanvasMaxZ = 8;

inline constexpr std::uint8_t kEmpty = 0;
inline constexpr std::uint8_t kPassive = 1;
inline constexpr std::uint8_t kContractile = 3;

// Simulated actuator morphology: a material-code grid. Index order is
// (x * ny + y) * nz + z.
struct Sam {
    int nx = 0;
    int ny = 0;
    int nz = 0;
    std::vector<std::uint8_t> voxels;

    Sam() = default;
    Sam(int nx_, int ny_, int nz_)
        : nx(nx_), ny(ny_), nz(nz_),
          voxels(static_cast<std::size_t>(nx_) * ny_ * nz_, kEmpty) {}

    bool inside(int x, int y, int z) const {
        return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
    }
    std::uint8_t at(int x, int y, int z) const {
        return voxels[(static_cast<std::size_t>(x) * ny + y) * nz + z];
    }
    std::uint8_t& at(int x, int y, int z) {
        return voxels[(static_cast<std::size_t>(x) * ny + y) * nz + z];
    }

    int count_nonzero() const;
    int count_contractile() const;

    bool operator==(const Sam&) const = default;
};

// Scalar per-voxel field over the same grid, used for phase offsets.
struct PhaseField {
    int nx = 0;
    int ny = 0;
    int nz = 0;
    std::vector<double> values;

    PhaseField() = default;
    PhaseField(int nx_, int ny_, int nz_)
        : nx(nx_), ny(ny_), nz(nz_),
          values(static_cast<std::size_t>(nx_) * ny_ * nz_, 0.0) {}

    double at(int x, int y, int z) const {
        return values[(static_cast<std::size_t>(x) * ny + y) * nz + z];
    }
    double& at(int x, int y, int z) {
        return values[(static_cast<std::size_t>(x) * ny + y) * nz + z];
    }
};

// Empty list means the sam is valid. Each violation names the rule and the
// offending coordinates.
std::vector<std::string> validate(const Sam& sam);

// Contractile body with empty diagonal stripes of period 3 along x+y running
// through the full z extent, wrapped in a passive enclosure.
Sam generate_striped_diagonal(int nx, int ny, int nz, std::uint64_t seed);

// Contractile cross-section grows monotonically from a thin bottom (low z)
// to a wide top. Deterministic.
Sam generate_pyramidal(int nx, int ny, int nz);

// Solid contractile block with connectivity-preserving random carving so the
// body keeps a significant internal discontinuity.
Sam generate_fragmented(int nx, int ny, int nz, std::uint64_t seed);

// Passive side walls hugging the contractile body: for every grid column, a
// wall voxel just past each y/z extreme of the contractile cells in that
// column. Cells outside the grid are skipped; nonzero cells never change.
Sam add_passive_enclosure(const Sam& sam);

Sam load_sam(const std::string& path);
void save_sam(const Sam& sam, const std::string& path);

PhaseField load_phase_field(const std::string& path);
void save_phase_field(const PhaseField& field, const std::string& path);

} // namespace samevo
