#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "mds/dynsys.hpp"

using namespace mds;

namespace {

DynSys load(const std::string& file) {
    std::ifstream in(std::string(DATA_DIR) + "/" + file);
    REQUIRE(in.good());
    auto sys = DynSys::from_json(nlohmann::json::parse(in));
    sys.validate();
    return sys;
}

// independent subset-scan oracle for bi-invariance: closed under every
// sigma_i and every sigma_i-preimage
std::vector<std::vector<int>> bi_invariant_oracle(const DynSys& sys) {
    std::vector<std::vector<int>> out;
    const int m = sys.size();
    for (int mask = 0; mask < (1 << m); ++mask) {
        bool ok = true;
        for (int i = 0; i < sys.n() && ok; ++i)
            for (int x = 0; x < m && ok; ++x) {
                bool in_a = mask & (1 << x);
                bool image_in = mask & (1 << sys.apply(i, x));
                if (in_a != image_in) ok = false;  // closed both ways
            }
        if (!ok) continue;
        std::vector<int> set;
        for (int x = 0; x < m; ++x)
            if (mask & (1 << x)) set.push_back(x);
        out.push_back(set);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

}  // namespace

TEST_CASE("validation names the offending entry") {
    DynSys sys;
    sys.name = "bad";
    sys.points = {"a", "b"};
    sys.maps = {{0, 5}};
    CHECK_THROWS_WITH_AS(sys.validate(),
                         doctest::Contains("(i=0, x=1)"), std::invalid_argument);
    sys.maps = {};
    CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
    sys.points = {};
    sys.maps = {{0}};
    CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
}

TEST_CASE("json round trip") {
    DynSys p3 = load("p3.json");
    CHECK(p3.name == "P3");
    CHECK(p3.size() == 3);
    CHECK(p3.n() == 2);
    DynSys again = DynSys::from_json(p3.to_json());
    CHECK(again.points == p3.points);
    CHECK(again.maps == p3.maps);
    CHECK_THROWS_AS(DynSys::from_json(nlohmann::json{{"name", "x"}}),
                    std::invalid_argument);
}

TEST_CASE("word application composes right to left") {
    DynSys p3 = load("p3.json");
    // sigma_{12} = sigma_1 o sigma_2 (letters 0-based: {0,1})
    for (int x = 0; x < 3; ++x)
        CHECK(p3.apply_word({0, 1}, x) == p3.apply(0, p3.apply(1, x)));
    CHECK(p3.apply_word({}, 2) == 2);
}

TEST_CASE("range deficiency") {
    auto rd = range_deficiency(load("p3.json"));
    CHECK(rd.surjective);
    CHECK(rd.deficiency.empty());
    rd = range_deficiency(load("ns.json"));
    CHECK(!rd.surjective);
    CHECK(rd.deficiency == std::vector<int>{1});
    CHECK(rd.range_union == std::vector<int>{0});
}

TEST_CASE("orbits") {
    DynSys p3 = load("p3.json");
    CHECK(forward_orbit(p3, 0) == std::vector<int>{0});
    CHECK(forward_orbit(p3, 1) == std::vector<int>{0, 1});
    CHECK(forward_orbit(p3, 2) == std::vector<int>{0, 2});
    CHECK(full_orbit(p3, 1) == std::vector<int>{0, 1, 2});
    DynSys fs2 = load("fs2.json");
    CHECK(forward_orbit(fs2, 0) == std::vector<int>{0, 1});
    CHECK(forward_orbit(fs2, 1) == std::vector<int>{0, 1});
}

TEST_CASE("invariant set lattices of the running example") {
    DynSys p3 = load("p3.json");
    std::vector<std::vector<int>> expect{{}, {0}, {0, 1}, {0, 2}, {0, 1, 2}};
    CHECK(invariant_sets(p3) == expect);
    std::vector<std::vector<int>> expect_bi{{}, {0, 1, 2}};
    CHECK(bi_invariant_sets(p3) == expect_bi);
}

TEST_CASE("invariant set guard refuses huge scans") {
    DynSys big;
    big.name = "big";
    for (int i = 0; i < 25; ++i) big.points.push_back("p" + std::to_string(i));
    big.maps = {std::vector<int>(25, 0)};
    CHECK_THROWS_AS(invariant_sets(big), std::invalid_argument);
}

TEST_CASE("bi-invariant sets match the subset-scan oracle exhaustively") {
    for (int m = 1; m <= 3; ++m)
        for (const auto& sys : enumerate_systems(m, 2))
            CHECK(bi_invariant_sets(sys) == bi_invariant_oracle(sys));
}

TEST_CASE("minimality") {
    auto r = is_minimal(load("p3.json"));
    CHECK(!r.minimal);
    CHECK(r.witness_point == 0);
    CHECK(r.witness_set == std::vector<int>{0});
    CHECK(is_minimal(load("fs2.json")).minimal);
    CHECK(is_minimal(load("sw2.json")).minimal);
    CHECK(!is_minimal(load("ns.json")).minimal);
    CHECK(is_minimal(load("pt2.json")).minimal);
}

TEST_CASE("minimality implies surjectivity on the exhaustive suite") {
    for (int m = 1; m <= 3; ++m)
        for (const auto& sys : enumerate_systems(m, 2))
            if (is_minimal(sys).minimal) CHECK(range_deficiency(sys).surjective);
}

TEST_CASE("adding a tail to NS") {
    DynSys ns = load("ns.json");
    TailedSys t = add_tail(ns, 3);
    CHECK(t.tail_depth == 3);
    CHECK(!t.unchanged);
    CHECK(t.extended.size() == 5);
    CHECK(t.base_size() == 2);
    // the chain under the deficiency point u = 1
    int p1 = t.tail_index(0, 1), p2 = t.tail_index(0, 2), p3 = t.tail_index(0, 3);
    for (int i = 0; i < 2; ++i) {
        CHECK(t.extended.apply(i, p1) == 1);
        CHECK(t.extended.apply(i, p2) == p1);
        CHECK(t.extended.apply(i, p3) == p2);
    }
    auto rd = range_deficiency(t.extended);
    CHECK(rd.deficiency == std::vector<int>{p3});
    CHECK(t.truncation_deficiency == std::vector<int>{p3});
    CHECK(t.truncation_stable);
}

TEST_CASE("adding a tail to a surjective system is a no-op") {
    TailedSys t = add_tail(load("p3.json"), 3);
    CHECK(t.unchanged);
    CHECK(t.tail_depth == 0);
    CHECK(t.extended.size() == 3);
}

TEST_CASE("enumeration counts") {
    CHECK(enumerate_systems(1, 2).size() == 1);
    CHECK(enumerate_systems(2, 2).size() == 16);
    CHECK(enumerate_systems(3, 2).size() == 729);
    CHECK(enumerate_systems(2, 1).size() == 4);
    for (const auto& sys : enumerate_systems(2, 2)) CHECK_NOTHROW(sys.validate());
}
