#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "samevo/sam.hpp"
#include "test_util.hpp"

using namespace samevo;

namespace {

// Contractile pattern of the striped generator, recovered from the output.
int infer_stripe_offset(const Sam& sam) {
    for (int o = 0; o < 3; ++o) {
        bool ok = true;
        for (int x = 0; x < sam.nx && ok; ++x) {
            for (int y = 0; y < sam.ny && ok; ++y) {
                for (int z = 0; z < sam.nz && ok; ++z) {
                    bool in_region = y >= 1 && y <= sam.ny - 2 && z >= 1 && z <= sam.nz - 2;
                    bool expect = in_region && (x + y + o) % 3 != 0;
                    ok = (sam.at(x, y, z) == kContractile) == expect;
                }
            }
        }
        if (ok) return o;
    }
    return -1;
}

std::string write_temp(const std::string& name, const std::string& text) {
    auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << text;
    return path;
}

} // namespace

TEST_CASE("a single anchored passive voxel is valid") {
    Sam sam(1, 1, 1);
    sam.at(0, 0, 0) = kPassive;
    CHECK(validate(sam).empty());
    CHECK(sam.count_nonzero() == 1);
    CHECK(sam.count_contractile() == 0);
}

TEST_CASE("corner-touching voxels violate 6-connectivity") {
    Sam sam(2, 2, 2);
    sam.at(0, 0, 0) = kContractile;
    sam.at(1, 1, 1) = kContractile;
    auto violations = validate(sam);
    REQUIRE_FALSE(violations.empty());
    bool mentions_connectivity = false;
    for (const auto& v : violations)
        mentions_connectivity |= v.find("connected") != std::string::npos;
    CHECK(mentions_connectivity);
}

TEST_CASE("unknown material codes are reported") {
    Sam sam(1, 1, 1);
    sam.at(0, 0, 0) = 2;
    auto violations = validate(sam);
    REQUIRE_FALSE(violations.empty());
    CHECK(violations[0].find("material code 2") != std::string::npos);
}

TEST_CASE("a body without an anchor-plane voxel is invalid") {
    Sam sam(2, 1, 1);
    sam.at(1, 0, 0) = kContractile;
    auto violations = validate(sam);
    REQUIRE_FALSE(violations.empty());
    bool mentions_anchor = false;
    for (const auto& v : violations) mentions_anchor |= v.find("anchor") != std::string::npos;
    CHECK(mentions_anchor);
}

TEST_CASE("all generators emit valid morphologies") {
    for (std::uint64_t seed : {1ULL, 2ULL, 5ULL, 9ULL}) {
        CHECK(validate(generate_striped_diagonal(10, 5, 5, seed)).empty());
        CHECK(validate(generate_fragmented(10, 5, 5, seed)).empty());
        CHECK(validate(generate_striped_diagonal(20, 8, 8, seed)).empty());
        CHECK(validate(generate_fragmented(20, 8, 8, seed)).empty());
    }
    CHECK(validate(generate_pyramidal(10, 5, 5)).empty());
    CHECK(validate(generate_pyramidal(20, 8, 8)).empty());
}

TEST_CASE("striped bodies carry period-3 diagonal stripes") {
    for (std::uint64_t seed : {1ULL, 4ULL, 7ULL}) {
        auto sam = generate_striped_diagonal(12, 6, 6, seed);
        int offset = infer_stripe_offset(sam);
        REQUIRE(offset >= 0);

        // Stripe cells never hold contractile material, and at least one
        // interior stripe cell stays empty all the way through z.
        bool empty_stripe_column = false;
        for (int x = 0; x < sam.nx; ++x) {
            for (int y = 1; y <= sam.ny - 2; ++y) {
                if ((x + y + offset) % 3 != 0) continue;
                bool all_empty = true;
                for (int z = 1; z <= sam.nz - 2; ++z) {
                    CHECK(sam.at(x, y, z) != kContractile);
                    all_empty &= sam.at(x, y, z) == kEmpty;
                }
                empty_stripe_column |= all_empty;
            }
        }
        CHECK(empty_stripe_column);
    }
}

TEST_CASE("striped generation is seed-deterministic") {
    CHECK(generate_striped_diagonal(10, 5, 5, 42) == generate_striped_diagonal(10, 5, 5, 42));
    std::set<int> offsets;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        offsets.insert(infer_stripe_offset(generate_striped_diagonal(10, 5, 5, seed)));
    }
    CHECK(offsets == std::set<int>{0, 1, 2});
}

TEST_CASE("pyramidal cross-sections widen monotonically with z") {
    auto sam = generate_pyramidal(10, 5, 5);
    CHECK(sam == generate_pyramidal(10, 5, 5));

    std::vector<int> per_z(sam.nz, 0);
    for (int x = 0; x < sam.nx; ++x)
        for (int y = 0; y < sam.ny; ++y)
            for (int z = 0; z < sam.nz; ++z)
                if (sam.at(x, y, z) == kContractile) ++per_z[z];

    int lo = 1, hi = sam.nz - 2;
    for (int z = lo; z < hi; ++z) CHECK(per_z[z] <= per_z[z + 1]);
    CHECK(per_z[lo] > 0);
    CHECK(per_z[lo] < per_z[hi]);
}

TEST_CASE("fragmented bodies keep holes in a known band") {
    int in_band = 0;
    std::vector<Sam> sams;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto sam = generate_fragmented(10, 5, 5, seed);
        CHECK(validate(sam).empty());
        sams.push_back(sam);

        int block = 0, holes = 0;
        for (int x = 0; x < sam.nx; ++x) {
            for (int y = 1; y <= sam.ny - 2; ++y) {
                for (int z = 1; z <= sam.nz - 2; ++z) {
                    ++block;
                    if (sam.at(x, y, z) != kContractile) ++holes;
                }
            }
        }
        double fraction = static_cast<double>(holes) / block;
        if (fraction >= 0.3 && fraction <= 0.5) ++in_band;
    }
    CHECK(in_band == 100);

    // Distinct seeds almost always give distinct bodies.
    int distinct = 0;
    for (std::size_t i = 0; i < sams.size(); ++i) {
        bool dup = false;
        for (std::size_t j = 0; j < i; ++j) dup |= (sams[i] == sams[j]);
        distinct += !dup;
    }
    CHECK(distinct >= 99);
}

TEST_CASE("enclosure is idempotent") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        auto sam = generate_fragmented(10, 5, 5, seed);
        CHECK(add_passive_enclosure(sam) == sam);
    }
    auto striped = generate_striped_diagonal(10, 5, 5, 4);
    CHECK(add_passive_enclosure(striped) == striped);
    auto pyramid = generate_pyramidal(10, 5, 5);
    CHECK(add_passive_enclosure(pyramid) == pyramid);
}

TEST_CASE("enclosure shells a bare contractile voxel on its exposed faces") {
    Sam bare(3, 3, 3);
    bare.at(0, 0, 0) = kContractile;
    auto shelled = add_passive_enclosure(bare);
    CHECK(shelled.count_contractile() == 1);
    CHECK(shelled.at(0, 0, 0) == kContractile);
    CHECK(shelled.at(0, 1, 0) == kPassive);
    CHECK(shelled.at(0, 0, 1) == kPassive);
    CHECK(shelled.count_nonzero() == 3);
}

TEST_CASE("save and load round-trip every generator") {
    auto dir = testutil::fresh_dir("samevo_sam_roundtrip");
    std::vector<Sam> sams = {generate_striped_diagonal(10, 5, 5, 1), generate_pyramidal(12, 6, 6),
                             generate_fragmented(20, 8, 8, 5)};
    Sam tiny(1, 1, 1);
    tiny.at(0, 0, 0) = kPassive;
    sams.push_back(tiny);
    for (std::size_t i = 0; i < sams.size(); ++i) {
        auto path = (dir / ("sam_" + std::to_string(i) + ".txt")).string();
        save_sam(sams[i], path);
        CHECK(load_sam(path) == sams[i]);
    }
}

TEST_CASE("oversized dims are rejected at line one") {
    auto path = write_temp("samevo_sam_overs266.txt", "21 8 8\n");
    try {
        load_sam(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(std::string(e.what()).find("canvas") != std::string::npos);
    }
}

TEST_CASE("parse errors carry line numbers") {
    auto empty = write_temp("samevo_sam_empty.txt", "");
    CHECK_THROWS_AS(load_sam(empty), ParseError);

    auto badrow = write_temp("samevo_sam_badrow.txt", "2 2 1\n33\n3\n\n33\n33\n");
    try {
        load_sam(badrow);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line >= 2);
    }

    auto badchar = write_temp("samevo_sam_badchar.txt", "1 1 1\nq\n");
    CHECK_THROWS_AS(load_sam(badchar), ParseError);

    CHECK_THROWS_AS(load_sam((std::filesystem::temp_directory_path() /
                              "samevo_definitely_missing.txt").string()),
                    ParseError);
}

TEST_CASE("phase fields round-trip exactly") {
    auto dir = testutil::fresh_dir("samevo_phase_roundtrip");
    PhaseField field(3, 2, 2);
    Rng rng(13);
    for (auto& v : field.values) v = rng.uniform(-6.28, 6.28);
    auto path = (dir / "phases.txt").string();
    save_phase_field(field, path);
    auto back = load_phase_field(path);
    CHECK(back.nx == 3);
    CHECK(back.ny == 2);
    CHECK(back.nz == 2);
    CHECK(back.values == field.values);
}
