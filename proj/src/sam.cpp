#include "samevo/sam.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <sstream>

namespace samevo {

namespace {

std::string coord(int x, int y, int z) {
    return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
}

// Count of nonzero cells reachable from the first nonzero cell, 6-neighbor.
int reachable_nonzero(const Sam& sam) {
    int start_x = -1, start_y = -1, start_z = -1;
    for (int x = 0; x < sam.nx && start_x < 0; ++x) {
        for (int y = 0; y < sam.ny && start_x < 0; ++y) {
            for (int z = 0; z < sam.nz && start_x < 0; ++z) {
                if (sam.at(x, y, z) != kEmpty) {
                    start_x = x;
                    start_y = y;
                    start_z = z;
                }
            }
        }
    }
    if (start_x < 0) return 0;

    std::vector<char> seen(sam.voxels.size(), 0);
    auto idx = [&](int x, int y, int z) {
        return (static_cast<std::size_t>(x) * sam.ny + y) * sam.nz + z;
    };
    std::queue<std::array<int, 3>> frontier;
    frontier.push({start_x, start_y, start_z});
    seen[idx(start_x, start_y, start_z)] = 1;
    int count = 0;
    constexpr int kSteps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    while (!frontier.empty()) {
        auto [x, y, z] = frontier.front();
        frontier.pop();
        ++count;
        for (const auto& s : kSteps) {
            int nx = x + s[0], ny = y + s[1], nz = z + s[2];
            if (!sam.inside(nx, ny, nz) || sam.at(nx, ny, nz) == kEmpty) continue;
            if (!seen[idx(nx, ny, nz)]) {
                seen[idx(nx, ny, nz)] = 1;
                frontier.push({nx, ny, nz});
            }
        }
    }
    return count;
}

bool sam_is_sound(const Sam& sam) {
    int nonzero = sam.count_nonzero();
    if (nonzero == 0) return false;
    bool anchored = false;
    for (int y = 0; y < sam.ny && !anchored; ++y) {
        for (int z = 0; z < sam.nz && !anchored; ++z) {
            if (sam.at(0, y, z) != kEmpty) anchored = true;
        }
    }
    return anchored && reachable_nonzero(sam) == nonzero;
}

void require_dims(int nx, int ny, int nz, int min_y, int min_z) {
    if (nx < 1 || ny < min_y || nz < min_z) {
        throw ConfigError("sam dims too small: need x >= 1, y >= " + std::to_string(min_y) +
                          ", z >= " + std::to_string(min_z));
    }
    if (nx > kCanvasMaxX || ny > kCanvasMaxY || nz > kCanvasMaxZ) {
        throw ConfigError("sam dims exceed canvas 20x8x8");
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::array<int, 3> parse_dims_line(const std::vector<std::string>& lines) {
    if (lines.empty()) throw ParseError("empty file", 1);
    std::istringstream head(lines[0]);
    int nx = 0, ny = 0, nz = 0;
    std::string extra;
    if (!(head >> nx >> ny >> nz) || (head >> extra)) {
        throw ParseError("expected header 'X Y Z'", 1);
    }
    if (nx < 1 || ny < 1 || nz < 1 || nx > kCanvasMaxX || ny > kCanvasMaxY || nz > kCanvasMaxZ) {
        throw ParseError("dims out of canvas bounds 20x8x8", 1);
    }
    return {nx, ny, nz};
}

} // namespace

int Sam::count_nonzero() const {
    return static_cast<int>(std::count_if(voxels.begin(), voxels.end(),
                                          [](std::uint8_t v) { return v != kEmpty; }));
}

int Sam::count_contractile() const {
    return static_cast<int>(std::count(voxels.begin(), voxels.end(), kContractile));
}

std::vector<std::string> validate(const Sam& sam) {
    std::vector<std::string> violations;
    if (sam.nx < 1 || sam.ny < 1 || sam.nz < 1 ||
        sam.voxels.size() != static_cast<std::size_t>(sam.nx) * sam.ny * sam.nz) {
        violations.push_back("dims/storage mismatch");
        return violations;
    }
    if (sam.nx > kCanvasMaxX || sam.ny > kCanvasMaxY || sam.nz > kCanvasMaxZ) {
        violations.push_back("dims exceed canvas 20x8x8");
    }

    for (int x = 0; x < sam.nx; ++x) {
        for (int y = 0; y < sam.ny; ++y) {
            for (int z = 0; z < sam.nz; ++z) {
                std::uint8_t v = sam.at(x, y, z);
                if (v != kEmpty && v != kPassive && v != kContractile) {
                    violations.push_back("material code " + std::to_string(v) + " at " + coord(x, y, z));
                }
            }
        }
    }

    bool anchored = false;
    for (int y = 0; y < sam.ny && !anchored; ++y) {
        for (int z = 0; z < sam.nz && !anchored; ++z) {
            if (sam.at(0, y, z) != kEmpty) anchored = true;
        }
    }
    if (!anchored) violations.push_back("no voxel on the x=0 anchor plane");

    int nonzero = sam.count_nonzero();
    if (nonzero > 0) {
        int reached = reachable_nonzero(sam);
        if (reached != nonzero) {
            violations.push_back("body not 6-connected: " + std::to_string(reached) + " of " +
                                 std::to_string(nonzero) + " voxels reachable");
        }
    }
    return violations;
}

Sam generate_striped_diagonal(int nx, int ny, int nz, std::uint64_t seed) {
    require_dims(nx, ny, nz, 3, 3);
    Rng rng(seed);
    int offset = rng.uniform_int(3);

    Sam sam(nx, ny, nz);
    for (int x = 0; x < nx; ++x) {
        for (int y = 1; y < ny - 1; ++y) {
            if ((x + y + offset) % 3 == 0) continue;
            for (int z = 1; z < nz - 1; ++z) sam.at(x, y, z) = kContractile;
        }
    }
    return add_passive_enclosure(sam);
}

Sam generate_pyramidal(int nx, int ny, int nz) {
    require_dims(nx, ny, nz, 4, 4);
    Sam sam(nx, ny, nz);
    const int z_lo = 1;
    const int z_hi = nz - 2;
    const int w_max = ny - 2;
    for (int z = z_lo; z <= z_hi; ++z) {
        int width = 1 + (w_max - 1) * (z - z_lo) / (z_hi - z_lo);
        int y0 = (ny - width) / 2;
        for (int x = 0; x < nx; ++x) {
            for (int y = y0; y < y0 + width; ++y) sam.at(x, y, z) = kContractile;
        }
    }
    return add_passive_enclosure(sam);
}

Sam generate_fragmented(int nx, int ny, int nz, std::uint64_t seed) {
    require_dims(nx, ny, nz, 3, 3);
    Rng rng(seed);

    Sam sam(nx, ny, nz);
    std::vector<std::array<int, 3>> block;
    for (int x = 0; x < nx; ++x) {
        for (int y = 1; y < ny - 1; ++y) {
            for (int z = 1; z < nz - 1; ++z) {
                sam.at(x, y, z) = kContractile;
                block.push_back({x, y, z});
            }
        }
    }

    double target_fraction = 0.32 + 0.08 * rng.uniform();
    int target = static_cast<int>(std::floor(target_fraction * static_cast<double>(block.size())));

    for (std::size_t i = block.size(); i > 1; --i) {
        std::swap(block[i - 1], block[rng.uniform_int(i)]);
    }

    int carved = 0;
    for (const auto& [x, y, z] : block) {
        if (carved >= target) break;
        sam.at(x, y, z) = kEmpty;
        if (sam_is_sound(sam)) {
            ++carved;
        } else {
            sam.at(x, y, z) = kContractile;
        }
    }
    return add_passive_enclosure(sam);
}

Sam add_passive_enclosure(const Sam& sam) {
    Sam out = sam;
    auto place = [&](int x, int y, int z) {
        if (out.inside(x, y, z) && out.at(x, y, z) == kEmpty) out.at(x, y, z) = kPassive;
    };
    for (int x = 0; x < sam.nx; ++x) {
        for (int y = 0; y < sam.ny; ++y) {
            int lo = -1, hi = -1;
            for (int z = 0; z < sam.nz; ++z) {
                if (sam.at(x, y, z) == kContractile) {
                    if (lo < 0) lo = z;
                    hi = z;
                }
            }
            if (lo >= 0) {
                place(x, y, lo - 1);
                place(x, y, hi + 1);
            }
        }
        for (int z = 0; z < sam.nz; ++z) {
            int lo = -1, hi = -1;
            for (int y = 0; y < sam.ny; ++y) {
                if (sam.at(x, y, z) == kContractile) {
                    if (lo < 0) lo = y;
                    hi = y;
                }
            }
            if (lo >= 0) {
                place(x, lo - 1, z);
                place(x, hi + 1, z);
            }
        }
    }
    return out;
}

Sam load_sam(const std::string& path) {
    auto lines = read_lines(path);
    auto [nx, ny, nz] = parse_dims_line(lines);

    Sam sam(nx, ny, nz);
    std::size_t ln = 1;  // 0-based index into lines; reported 1-based
    for (int z = 0; z < nz; ++z) {
        if (z > 0) {
            if (ln >= lines.size() || !is_blank(lines[ln])) {
                throw ParseError("expected blank line between blocks", static_cast<int>(ln + 1));
            }
            ++ln;
        }
        for (int y = 0; y < ny; ++y, ++ln) {
            if (ln >= lines.size()) throw ParseError("unexpected end of file", static_cast<int>(ln + 1));
            const std::string& row = lines[ln];
            std::size_t len = row.size();
            while (len > 0 && std::isspace(static_cast<unsigned char>(row[len - 1]))) --len;
            if (len != static_cast<std::size_t>(nx)) {
                throw ParseError("expected " + std::to_string(nx) + " digits", static_cast<int>(ln + 1));
            }
            for (int x = 0; x < nx; ++x) {
                char c = row[x];
                if (c < '0' || c > '9') {
                    throw ParseError("invalid material character '" + std::string(1, c) + "'",
                                     static_cast<int>(ln + 1));
                }
                sam.at(x, y, z) = static_cast<std::uint8_t>(c - '0');
            }
        }
    }
    for (; ln < lines.size(); ++ln) {
        if (!is_blank(lines[ln])) throw ParseError("trailing content", static_cast<int>(ln + 1));
    }
    return sam;
}

void save_sam(const Sam& sam, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << sam.nx << ' ' << sam.ny << ' ' << sam.nz << '\n';
    for (int z = 0; z < sam.nz; ++z) {
        if (z > 0) out << '\n';
        for (int y = 0; y < sam.ny; ++y) {
            for (int x = 0; x < sam.nx; ++x) out << static_cast<char>('0' + sam.at(x, y, z));
            out << '\n';
        }
    }
}

PhaseField load_phase_field(const std::string& path) {
    auto lines = read_lines(path);
    auto [nx, ny, nz] = parse_dims_line(lines);

    PhaseField field(nx, ny, nz);
    std::size_t ln = 1;
    for (int z = 0; z < nz; ++z) {
        if (z > 0) {
            if (ln >= lines.size() || !is_blank(lines[ln])) {
                throw ParseError("expected blank line between blocks", static_cast<int>(ln + 1));
            }
            ++ln;
        }
        for (int y = 0; y < ny; ++y, ++ln) {
            if (ln >= lines.size()) throw ParseError("unexpected end of file", static_cast<int>(ln + 1));
            std::istringstream row(lines[ln]);
            for (int x = 0; x < nx; ++x) {
                double v;
                if (!(row >> v)) {
                    throw ParseError("expected " + std::to_string(nx) + " reals",
                                     static_cast<int>(ln + 1));
                }
                field.at(x, y, z) = v;
            }
            std::string extra;
            if (row >> extra) throw ParseError("trailing content in row", static_cast<int>(ln + 1));
        }
    }
    for (; ln < lines.size(); ++ln) {
        if (!is_blank(lines[ln])) throw ParseError("trailing content", static_cast<int>(ln + 1));
    }
    return field;
}

void save_phase_field(const PhaseField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << field.nx << ' ' << field.ny << ' ' << field.nz << '\n';
    char buf[64];
    for (int z = 0; z < field.nz; ++z) {
        if (z > 0) out << '\n';
        for (int y = 0; y < field.ny; ++y) {
            for (int x = 0; x < field.nx; ++x) {
                std::snprintf(buf, sizeof(buf), "%.17g", field.at(x, y, z));
                out << (x > 0 ? " " : "") << buf;
            }
            out << '\n';
        }
    }
}

} // namespace samevo
