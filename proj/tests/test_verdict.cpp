#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "mds/verdict.hpp"

using namespace mds;

namespace {

DynSys load(const std::string& file) {
    std::ifstream in(std::string(DATA_DIR) + "/" + file);
    REQUIRE(in.good());
    return DynSys::from_json(nlohmann::json::parse(in));
}

}  // namespace

TEST_CASE("the running example is not simple, witnessed by the sink") {
    auto v = simplicity_verdict(load("p3.json"));
    CHECK(!v.minimal);
    CHECK(v.surjective);
    CHECK(v.simplicity == Simplicity::NotSimple);
    CHECK(v.invariant_witness == std::vector<int>{0});
    REQUIRE(v.on_detection.has_value());
    CHECK(*v.on_detection == OnDetection::Inconclusive);
    CHECK(!v.reasoning.empty());
}

TEST_CASE("the full shift is simple and recognizably Cuntz") {
    auto v = simplicity_verdict(load("fs2.json"));
    CHECK(v.minimal);
    CHECK(v.simplicity == Simplicity::Simple);
    REQUIRE(v.on_detection.has_value());
    CHECK(*v.on_detection == OnDetection::IsomorphicToOn);
}

TEST_CASE("the swap system is simple but the detector stays silent") {
    auto v = simplicity_verdict(load("sw2.json"));
    CHECK(v.simplicity == Simplicity::Simple);
    CHECK(*v.on_detection == OnDetection::Inconclusive);
    REQUIRE(v.separation_witness.has_value());
    CHECK(*v.separation_witness == std::pair<int, int>{0, 1});
}

TEST_CASE("single-map systems fall outside the dichotomy") {
    auto v = simplicity_verdict(load("pt1.json"));
    CHECK(v.simplicity == Simplicity::TheoremInapplicableN1);
    CHECK(v.note.find("C(T)") != std::string::npos);
    CHECK(!v.on_detection.has_value());
}

TEST_CASE("non-surjective systems go through the corner argument") {
    auto v = simplicity_verdict(load("ns.json"));
    CHECK(!v.surjective);
    CHECK(v.simplicity == Simplicity::NotSimple);
    CHECK(!v.on_detection.has_value());
    bool mentions_corner = false;
    for (const auto& r : v.reasoning)
        if (r.find("Morita") != std::string::npos || r.find("corner") != std::string::npos)
            mentions_corner = true;
    CHECK(mentions_corner);
}

TEST_CASE("verdict json has the documented shape") {
    auto j = simplicity_verdict(load("fs2.json")).to_json();
    CHECK(j["minimal"] == true);
    CHECK(j["surjective"] == true);
    CHECK(j["simplicity"] == "Simple");
    CHECK(j["onDetection"] == "IsomorphicToOn");
    CHECK(j.contains("witnesses"));
    CHECK(j.contains("truncationDepths"));
}

TEST_CASE("on detection requires surjectivity") {
    CHECK_THROWS_AS(on_detect(load("ns.json")), std::invalid_argument);
    CHECK(on_detect(load("pt2.json")).detection == OnDetection::IsomorphicToOn);
}

TEST_CASE("witness chain for the sink of the running example") {
    auto ctx = make_context(load("p3.json"), 6);
    auto cert = bi_invariant_witness(ctx, {0}, 3);
    CHECK(cert.valid);
    CHECK(cert.detail.empty());
    REQUIRE(cert.W.size() == 4);
    for (size_t k = 0; k < cert.W.size(); ++k) {
        CHECK(!cert.W[k].is_empty());
        CHECK(!cert.W[k].is_whole());
        // depth-k members are exactly the tails pinned to the sink so far
        for (const auto& c : cert.W[k].cylinders())
            for (int v : c.vertices) CHECK(v == 0);
        CHECK(cert.W[k].cylinders().size() == (k == 0 ? 1u : (1u << k)));
    }
    auto wide = bi_invariant_witness(ctx, {0, 1}, 3);
    CHECK(wide.valid);
}

TEST_CASE("witness chain input validation") {
    auto ctx = make_context(load("p3.json"), 6);
    CHECK_THROWS_AS(bi_invariant_witness(ctx, {0, 1, 2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(bi_invariant_witness(ctx, {}, 2), std::invalid_argument);
    CHECK_THROWS_AS(bi_invariant_witness(ctx, {1}, 2), std::invalid_argument);  // not invariant
    CHECK_THROWS_AS(bi_invariant_witness(ctx, {7}, 2), std::invalid_argument);
    auto ns_ctx = make_context(load("ns.json"), 4);
    CHECK_THROWS_AS(bi_invariant_witness(ns_ctx, {0}, 2), std::invalid_argument);
}

TEST_CASE("exhaustive equivalences over all small two-map systems") {
    for (int m = 1; m <= 3; ++m) {
        for (const auto& sys : enumerate_systems(m, 2)) {
            auto v = simplicity_verdict(sys);
            bool minimal = is_minimal(sys).minimal;
            bool no_proper = invariant_sets(sys).size() <= 2;
            CHECK((v.simplicity == Simplicity::Simple) == minimal);
            CHECK(minimal == no_proper);
            if (minimal) CHECK(v.surjective);
            // the detector only fires on systems the theorem calls simple
            if (v.surjective && v.on_detection &&
                *v.on_detection == OnDetection::IsomorphicToOn)
                CHECK(v.simplicity == Simplicity::Simple);
            // every non-minimal surjective system yields a valid witness chain
            if (!minimal && v.surjective) {
                auto sets = invariant_sets(sys);
                std::vector<int> a;
                for (const auto& s : sets)
                    if (!s.empty() && static_cast<int>(s.size()) < sys.size()) {
                        a = s;
                        break;
                    }
                REQUIRE(!a.empty());
                auto cert = bi_invariant_witness(make_context(sys, 4), a, 2);
                CHECK(cert.valid);
            }
        }
    }
}
