#include "samevo/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numbers>

namespace samevo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGravityZ = -9.81;

// Force on endpoint a; endpoint b receives the exact negation.
inline std::array<double, 3> spring_end_force(const LatticeState& st, const Spring& s,
                                              double t, const MaterialParams& mat) {
    const auto& pa = st.pos[s.a];
    const auto& pb = st.pos[s.b];
    double dx = pb[0] - pa[0];
    double dy = pb[1] - pa[1];
    double dz = pb[2] - pa[2];
    double len = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (len < 1e-12) return {0.0, 0.0, 0.0};
    double scale = s.k * (len - rest_length(s, t, mat)) / len;
    return {dx * scale, dy * scale, dz * scale};
}

// Returns false when the node state turned non-finite.
inline bool integrate_node(LatticeState& st, int i, double dt, const MaterialParams& mat,
                           const std::vector<std::array<double, 3>>& spring_force) {
    double fx = 0.0, fy = 0.0, fz = 0.0;
    for (const auto& [si, sign] : st.incidence[i]) {
        fx += sign * spring_force[si][0];
        fy += sign * spring_force[si][1];
        fz += sign * spring_force[si][2];
    }
    double m = st.mass[i];
    double c = 2.0 * mat.damping_zeta * std::sqrt(st.k_max * m);
    fx -= c * st.vel[i][0];
    fy -= c * st.vel[i][1];
    fz -= c * st.vel[i][2];
    if (mat.gravity) fz += m * kGravityZ;

    st.vel[i][0] += fx / m * dt;
    st.vel[i][1] += fy / m * dt;
    st.vel[i][2] += fz / m * dt;
    st.pos[i][0] += st.vel[i][0] * dt;
    st.pos[i][1] += st.vel[i][1] * dt;
    st.pos[i][2] += st.vel[i][2] * dt;
    return std::isfinite(st.pos[i][0]) && std::isfinite(st.pos[i][1]) &&
           std::isfinite(st.pos[i][2]);
}

void check_dt(const LatticeState& st, double dt) {
    if (dt <= 0.0) throw ConfigError("dt must be positive");
    if (dt > st.stable_dt_bound() * (1.0 + 1e-9)) {
        throw ConfigError("dt exceeds stability bound 0.5*sqrt(m_min/k_max)");
    }
}

void step_impl(LatticeState& st, double dt, const MaterialParams& mat, bool parallel) {
    check_dt(st, dt);
    const int ns = static_cast<int>(st.springs.size());
    const int nn = static_cast<int>(st.pos.size());
    auto& sf = st.spring_force_scratch;
    sf.resize(ns);

    int ok = 1;
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int s = 0; s < ns; ++s) sf[s] = spring_end_force(st, st.springs[s], st.time, mat);
#pragma omp parallel for schedule(static) reduction(& : ok)
        for (int i = 0; i < nn; ++i) {
            if (!st.fixed[i]) ok &= integrate_node(st, i, dt, mat, sf) ? 1 : 0;
        }
    } else {
        for (int s = 0; s < ns; ++s) sf[s] = spring_end_force(st, st.springs[s], st.time, mat);
        for (int i = 0; i < nn; ++i) {
            if (!st.fixed[i]) ok &= integrate_node(st, i, dt, mat, sf) ? 1 : 0;
        }
    }
    if (!ok) throw SimulationDiverged(static_cast<double>(st.step_count + 1) * dt);
    ++st.step_count;
    st.time = static_cast<double>(st.step_count) * dt;
}

} // namespace

LatticeState build_lattice(const Sam& sam, const MaterialParams& mat) {
    return build_lattice(sam, mat, PhaseField(sam.nx, sam.ny, sam.nz));
}

LatticeState build_lattice(const Sam& sam, const MaterialParams& mat, const PhaseField& phases) {
    if (phases.nx != sam.nx || phases.ny != sam.ny || phases.nz != sam.nz) {
        throw ConfigError("phase field dims do not match the SAM");
    }
    if (sam.count_nonzero() == 0) throw ConfigError("SAM has no voxels");
    bool anchored = false;
    for (int y = 0; y < sam.ny && !anchored; ++y) {
        for (int z = 0; z < sam.nz && !anchored; ++z) {
            if (sam.at(0, y, z) != kEmpty) anchored = true;
        }
    }
    if (!anchored) throw ConfigError("SAM has no voxel on the x=0 plane; nothing anchors");

    const int cx = sam.nx + 1, cy = sam.ny + 1, cz = sam.nz + 1;
    auto corner_key = [&](int i, int j, int k) { return (i * cy + j) * cz + k; };
    std::vector<int> corner_id(static_cast<std::size_t>(cx) * cy * cz, -1);

    const double edge = mat.voxel_edge;
    const double voxel_mass = mat.density * edge * edge * edge;

    LatticeState st;
    int max_i = 0;
    for (int i = 0; i < cx; ++i) {
        for (int j = 0; j < cy; ++j) {
            for (int k = 0; k < cz; ++k) {
                bool used = false;
                for (int dx = -1; dx <= 0 && !used; ++dx) {
                    for (int dy = -1; dy <= 0 && !used; ++dy) {
                        for (int dz = -1; dz <= 0 && !used; ++dz) {
                            int vx = i + dx, vy = j + dy, vz = k + dz;
                            if (sam.inside(vx, vy, vz) && sam.at(vx, vy, vz) != kEmpty) used = true;
                        }
                    }
                }
                if (!used) continue;
                corner_id[corner_key(i, j, k)] = static_cast<int>(st.pos.size());
                st.pos.push_back({i * edge, j * edge, k * edge});
                st.vel.push_back({0.0, 0.0, 0.0});
                st.mass.push_back(0.0);
                st.fixed.push_back(i == 0 ? 1 : 0);
                max_i = std::max(max_i, i);
            }
        }
    }
    for (int i = 0; i < cx; ++i) {
        for (int j = 0; j < cy; ++j) {
            for (int k = 0; k < cz; ++k) {
                int id = corner_id[corner_key(i, j, k)];
                if (id >= 0 && i == max_i) st.free_face_nodes.push_back(id);
            }
        }
    }

    const double k_axial = mat.youngs_modulus * edge;
    const double k_diag = k_axial * mat.poisson_ratio / (1.0 - mat.poisson_ratio);

    std::map<std::pair<int, int>, int> spring_index;
    std::vector<double> phase_sum;
    std::vector<int> phase_count;

    // Local corner numbering c = di*4 + dj*2 + dk. Axial edges first, then
    // two diagonals per face.
    struct LocalSpring {
        int ca, cb;
        bool diagonal;
    };
    static const LocalSpring kLocal[] = {
        {0, 4, false}, {2, 6, false}, {1, 5, false}, {3, 7, false},  // x edges
        {0, 2, false}, {4, 6, false}, {1, 3, false}, {5, 7, false},  // y edges
        {0, 1, false}, {4, 5, false}, {2, 3, false}, {6, 7, false},  // z edges
        {0, 3, true},  {2, 1, true},                                 // face x = 0
        {4, 7, true},  {6, 5, true},                                 // face x = 1
        {0, 5, true},  {4, 1, true},                                 // face y = 0
        {2, 7, true},  {6, 3, true},                                 // face y = 1
        {0, 6, true},  {4, 2, true},                                 // face z = 0
        {1, 7, true},  {5, 3, true},                                 // face z = 1
    };

    for (int x = 0; x < sam.nx; ++x) {
        for (int y = 0; y < sam.ny; ++y) {
            for (int z = 0; z < sam.nz; ++z) {
                std::uint8_t code = sam.at(x, y, z);
                if (code == kEmpty) continue;
                int corners[8];
                for (int c = 0; c < 8; ++c) {
                    int i = x + (c >> 2), j = y + ((c >> 1) & 1), k = z + (c & 1);
                    corners[c] = corner_id[corner_key(i, j, k)];
                    st.mass[corners[c]] += voxel_mass / 8.0;
                }
                bool contractile = code == kContractile;
                double phase = contractile ? phases.at(x, y, z) : 0.0;
                for (const auto& ls : kLocal) {
                    int a = corners[ls.ca], b = corners[ls.cb];
                    std::pair<int, int> key = std::minmax(a, b);
                    auto [it, fresh] = spring_index.try_emplace(key, static_cast<int>(st.springs.size()));
                    if (fresh) {
                        // Rest length from the actual endpoint positions, with
                        // the force kernel's own arithmetic, so an unactuated
                        // lattice is in bit-exact equilibrium.
                        const auto& pa = st.pos[key.first];
                        const auto& pb = st.pos[key.second];
                        const double ddx = pb[0] - pa[0];
                        const double ddy = pb[1] - pa[1];
                        const double ddz = pb[2] - pa[2];
                        const double rest = std::sqrt(ddx * ddx + ddy * ddy + ddz * ddz);
                        st.springs.push_back({key.first, key.second, rest,
                                              ls.diagonal ? k_diag : k_axial, false, 0.0});
                        phase_sum.push_back(0.0);
                        phase_count.push_back(0);
                    }
                    if (contractile) {
                        int si = it->second;
                        st.springs[si].active = true;
                        phase_sum[si] += phase;
                        ++phase_count[si];
                    }
                }
            }
        }
    }
    for (std::size_t s = 0; s < st.springs.size(); ++s) {
        if (phase_count[s] > 0) st.springs[s].phase = phase_sum[s] / phase_count[s];
    }

    st.incidence.resize(st.pos.size());
    for (int s = 0; s < static_cast<int>(st.springs.size()); ++s) {
        st.incidence[st.springs[s].a].push_back({s, 1.0});
        st.incidence[st.springs[s].b].push_back({s, -1.0});
    }

    st.k_max = k_axial;
    st.m_min = *std::min_element(st.mass.begin(), st.mass.end());
    return st;
}

double rest_length(const Spring& spring, double t, const MaterialParams& mat) {
    if (!spring.active) return spring.rest0;
    double strain = mat.linear_strain();
    return spring.rest0 *
           (1.0 + strain * std::sin(kTwoPi * mat.actuation_frequency * t + spring.phase));
}

void step_serial(LatticeState& state, double dt, const MaterialParams& mat) {
    step_impl(state, dt, mat, false);
}

void step_parallel(LatticeState& state, double dt, const MaterialParams& mat) {
    step_impl(state, dt, mat, true);
}

void step(LatticeState& state, double dt, const MaterialParams& mat, StepKernel kernel) {
    step_impl(state, dt, mat, kernel == StepKernel::Parallel);
}

std::array<double, 3> free_face_centroid(const LatticeState& state) {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (int id : state.free_face_nodes) {
        c[0] += state.pos[id][0];
        c[1] += state.pos[id][1];
        c[2] += state.pos[id][2];
    }
    double n = static_cast<double>(state.free_face_nodes.size());
    return {c[0] / n, c[1] / n, c[2] / n};
}

SimTrace simulate(const Sam& sam, const PhaseField& phases, const MaterialParams& mat,
                  double duration, int sample_every, double dt, StepKernel kernel) {
    if (duration <= 0.0) throw ConfigError("duration must be positive");
    if (sample_every < 1) throw ConfigError("sample_every must be at least 1");
    for (int x = 0; x < sam.nx; ++x) {
        for (int y = 0; y < sam.ny; ++y) {
            for (int z = 0; z < sam.nz; ++z) {
                if (sam.at(x, y, z) == kContractile &&
                    std::fabs(phases.at(x, y, z)) > kTwoPi + 1e-12) {
                    throw ConfigError("phase offset outside [-2pi, 2pi]");
                }
            }
        }
    }

    LatticeState st = build_lattice(sam, mat, phases);
    if (dt == 0.0) dt = st.default_dt();
    check_dt(st, dt);
    int n_steps = static_cast<int>(std::ceil(duration / dt - 1e-9));

    SimTrace trace;
    trace.voxel_count = sam.count_nonzero();
    trace.config_hash = sim_config_hash(mat, duration, dt);
    trace.samples.push_back({0.0, free_face_centroid(st)});
    for (int s = 1; s <= n_steps; ++s) {
        step(st, dt, mat, kernel);
        if (s % sample_every == 0 || s == n_steps) {
            trace.samples.push_back({st.time, free_face_centroid(st)});
        }
    }
    return trace;
}

double fitness_from_trace(const SimTrace& trace) {
    if (trace.samples.empty()) throw ConfigError("empty trace");
    const auto& origin = trace.samples.front().centroid;
    double best = 0.0;
    for (const auto& s : trace.samples) {
        if (s.centroid[2] < origin[2]) continue;
        double dy = s.centroid[1] - origin[1];
        double dz = s.centroid[2] - origin[2];
        best = std::max(best, std::sqrt(dy * dy + dz * dz));
    }
    return best;
}

double trace_max_planar_displacement(const SimTrace& trace) {
    if (trace.samples.empty()) throw ConfigError("empty trace");
    const auto& origin = trace.samples.front().centroid;
    double best = 0.0;
    for (const auto& s : trace.samples) {
        double dy = s.centroid[1] - origin[1];
        double dz = s.centroid[2] - origin[2];
        best = std::max(best, std::sqrt(dy * dy + dz * dz));
    }
    return best;
}

std::uint64_t sim_config_hash(const MaterialParams& mat, double duration, double dt) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "nu=%.17g E=%.17g fs=%.17g fd=%.17g amp=%.17g freq=%.17g rho=%.17g "
                  "edge=%.17g zeta=%.17g g=%d duration=%.17g dt=%.17g",
                  mat.poisson_ratio, mat.youngs_modulus, mat.static_friction, mat.dynamic_friction,
                  mat.actuation_amplitude, mat.actuation_frequency, mat.density, mat.voxel_edge,
                  mat.damping_zeta, mat.gravity ? 1 : 0, duration, dt);
    std::uint64_t h = 1469598103934665603ull;
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 1099511628211ull;
    }
    return h;
}

std::string trace_to_csv(const SimTrace& trace) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "# voxel_count=%d config_hash=%016llx\n",
                  trace.voxel_count, static_cast<unsigned long long>(trace.config_hash));
    std::string out = buf;
    out += "t,cx,cy,cz\n";
    for (const auto& s : trace.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", s.t, s.centroid[0],
                      s.centroid[1], s.centroid[2]);
        out += buf;
    }
    return out;
}

} // namespace samevo
