#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <set>

#include "mds/covering.hpp"

using namespace mds;

namespace {

DynSys load(const std::string& file) {
    std::ifstream in(std::string(DATA_DIR) + "/" + file);
    REQUIRE(in.good());
    return DynSys::from_json(nlohmann::json::parse(in));
}

CylinderFunction random_function(const ContextPtr& ctx, int depth, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    std::vector<Scalar> vals;
    for (int c = 0; c < ctx->complex(depth).count(); ++c)
        vals.push_back(Scalar(Rational(num(rng), den(rng))));
    return CylinderFunction(ctx, depth, vals);
}

CylinderSet random_set(const ContextPtr& ctx, int depth, std::mt19937& rng) {
    std::bernoulli_distribution flip(0.4);
    std::vector<char> member;
    for (int c = 0; c < ctx->complex(depth).count(); ++c) member.push_back(flip(rng));
    return CylinderSet(ctx, depth, member);
}

// Independent separation oracle: two distinct tails share a label sequence
// iff some off-diagonal pair of vertices starts an arbitrarily long backward
// walk in the common-label pair graph; by pigeonhole a walk of length 2|X|^2
// (a prefix plus a closed cycle) suffices.
bool separates_oracle(const DynSys& sys) {
    const int m = sys.size();
    const int bound = 2 * m * m;
    // pair (a,b), a != b; alive_k = pairs with a backward walk of length k
    std::set<std::pair<int, int>> alive;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a != b) alive.insert({a, b});
    for (int step = 0; step < bound && !alive.empty(); ++step) {
        std::set<std::pair<int, int>> next;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                if (a == b) continue;
                bool has = false;
                for (int i = 0; i < sys.n() && !has; ++i)
                    for (int ap = 0; ap < m && !has; ++ap)
                        for (int bp = 0; bp < m && !has; ++bp)
                            if (sys.apply(i, ap) == a && sys.apply(i, bp) == b &&
                                alive.count({ap, bp}))
                                has = true;
                if (has) next.insert({a, b});
            }
        alive = std::move(next);
    }
    return alive.empty();
}

}  // namespace

TEST_CASE("tail graph of the running example") {
    auto g = build_tail_graph(load("p3.json"));
    CHECK(g.live_count() == 3);
    int edges = 0;
    for (const auto& pre : g.preimages) edges += static_cast<int>(pre.size());
    CHECK(edges == 6);
    // preimages of 0: via map 0 from {0,2}, via map 1 from {0,1}
    std::vector<std::pair<int, int>> expect{{0, 0}, {0, 2}, {1, 0}, {1, 1}};
    CHECK(g.preimages[0] == expect);
}

TEST_CASE("dead vertices have no tails") {
    auto g = build_tail_graph(load("ns.json"));
    CHECK(g.live_count() == 1);
    CHECK(g.live[0]);
    CHECK(!g.live[1]);
}

TEST_CASE("dot export is stable and marks dead vertices") {
    auto dot = to_dot(build_tail_graph(load("ns.json")));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("dashed") != std::string::npos);
    CHECK(dot == to_dot(build_tail_graph(load("ns.json"))));
}

TEST_CASE("cylinder complexes count n^D * live") {
    auto ctx = make_context(load("p3.json"), 5);
    for (int d = 0; d <= 5; ++d) CHECK(ctx->complex(d).count() == 3 * (1 << d));
    CHECK_THROWS_AS(ctx->complex(6), std::out_of_range);
}

TEST_CASE("depth-1 cylinders of the running example") {
    auto ctx = make_context(load("p3.json"), 3);
    const auto& cx = ctx->complex(1);
    std::set<std::pair<Word, std::vector<int>>> got;
    for (int c = 0; c < cx.count(); ++c)
        got.insert({cx.cylinder(c).labels, cx.cylinder(c).vertices});
    std::set<std::pair<Word, std::vector<int>>> expect{
        {{0}, {0, 0}}, {{0}, {1, 1}}, {{0}, {0, 2}},
        {{1}, {0, 0}}, {{1}, {0, 1}}, {{1}, {2, 2}}};
    CHECK(got == expect);
}

TEST_CASE("cylinder index, parent and shift are consistent") {
    auto ctx = make_context(load("p3.json"), 4);
    for (int d = 1; d <= 3; ++d) {
        const auto& cx = ctx->complex(d);
        const auto& up = ctx->complex(d - 1);
        for (int c = 0; c < cx.count(); ++c) {
            const Cylinder& cyl = cx.cylinder(c);
            CHECK(cx.index_of(cyl.labels, cyl.vertices.back()) == c);
            // parent: drop deepest label and vertex
            Word pl(cyl.labels.begin(), cyl.labels.end() - 1);
            CHECK(up.index_of(pl, cyl.vertices[d - 1]) == cx.parent(c));
            // shift: drop first label and vertex
            Word sl(cyl.labels.begin() + 1, cyl.labels.end());
            CHECK(up.index_of(sl, cyl.vertices.back()) == cx.shift(c));
            // deepest vertex determines the rest
            for (int k = d - 1; k >= 0; --k)
                CHECK(cyl.vertices[k] ==
                      ctx->sys().apply(cyl.labels[k], cyl.vertices[k + 1]));
        }
    }
}

TEST_CASE("tail specs walk the covering maps") {
    DynSys p3 = load("p3.json");
    auto t = TailSpec::fixed_point(p3, 2, {1});  // 2 --(2)--> 2 self-loop
    CHECK(t.vertex_at(0) == 2);
    CHECK(t.vertex_at(7) == 2);
    CHECK(t.label_at(7) == 1);
    CHECK_THROWS_AS(TailSpec::fixed_point(p3, 2, {0}), std::invalid_argument);

    auto s = t.prepended(p3, 0);  // sigma~_1: x_0 = sigma_1(2) = 0
    CHECK(s.vertex_at(0) == 0);
    CHECK(s.vertex_at(1) == 2);
    CHECK(s.label_at(0) == 0);
    auto back = s.shifted();
    CHECK(back.vertex_at(0) == t.vertex_at(0));
    CHECK(back.label_at(3) == t.label_at(3));

    // shifting a pure cycle rotates it
    auto two = TailSpec::fixed_point(load("fs2.json"), 0, {0, 1});
    auto rot = two.shifted();
    CHECK(rot.vertex_at(0) == two.vertex_at(1));
    CHECK(rot.label_at(0) == two.label_at(1));
    CHECK(rot.label_at(1) == two.label_at(2));
}

TEST_CASE("functions: partition of unity and chi") {
    auto ctx = make_context(load("p3.json"), 4);
    for (int k = 1; k <= 2; ++k) {
        CylinderFunction sum = CylinderFunction::zero(ctx);
        Word w(k, 0);
        while (true) {
            sum = sum + CylinderFunction::chi(ctx, w);
            int p = k - 1;
            while (p >= 0 && ++w[p] == 2) w[p--] = 0;
            if (p < 0) break;
        }
        CHECK(sum == CylinderFunction::one(ctx));
    }
    auto t = TailSpec::fixed_point(ctx->sys(), 2, {1});
    CHECK(CylinderFunction::chi(ctx, {1}).eval(t) == Scalar(1));
    CHECK(CylinderFunction::chi(ctx, {0}).eval(t) == Scalar(0));
    CHECK(CylinderFunction::chi(ctx, {1, 1}).eval(t) == Scalar(1));
}

TEST_CASE("refinement does not change a function") {
    auto ctx = make_context(load("p3.json"), 6);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_function(ctx, 2, rng);
        CHECK(f.refined(4) == f);
        CHECK(f.refined(2) == f);
        CHECK_THROWS_AS(f.refined(1), std::invalid_argument);
    }
}

TEST_CASE("sigma and tau act on functions as claimed, pointwise") {
    for (const char* file : {"p3.json", "fs2.json", "sw2.json"}) {
        auto ctx = make_context(load(file), 6);
        const DynSys& sys = ctx->sys();
        std::mt19937 rng(11);
        std::vector<TailSpec> pts;
        for (int x = 0; x < sys.size(); ++x)
            for (int i = 0; i < sys.n(); ++i)
                try {
                    pts.push_back(TailSpec::fixed_point(sys, x, {i}));
                } catch (const std::invalid_argument&) {
                }
        REQUIRE(!pts.empty());
        for (int trial = 0; trial < 10; ++trial) {
            auto f = random_function(ctx, 2, rng);
            for (const auto& t : pts) {
                for (int i = 0; i < sys.n(); ++i) {
                    CHECK(act_sigma(f, i).eval(t) == f.eval(t.prepended(sys, i)));
                    // (f o tau) o sigma~_i = f
                    CHECK(act_sigma(act_tau(f), i) == f.refined(f.depth() + 1));
                }
                CHECK(act_tau(f).eval(t) == f.eval(t.shifted()));
            }
        }
    }
}

TEST_CASE("function arithmetic is pointwise") {
    auto ctx = make_context(load("fs2.json"), 6);
    std::mt19937 rng(13);
    auto t = TailSpec::fixed_point(ctx->sys(), 0, {0});
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_function(ctx, 1, rng);
        auto g = random_function(ctx, 2, rng);
        CHECK((f + g).eval(t) == f.eval(t) + g.eval(t));
        CHECK((f * g).eval(t) == f.eval(t) * g.eval(t));
        CHECK((f - g).eval(t) == f.eval(t) - g.eval(t));
        CHECK((Scalar(3) * f).eval(t) == Scalar(3) * f.eval(t));
        CHECK(f.conj() == f);  // rational values are real
    }
}

TEST_CASE("set algebra matches the cylinder-wise oracle") {
    auto ctx = make_context(load("p3.json"), 6);
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_set(ctx, 1, rng);
        auto b = random_set(ctx, 2, rng);
        auto ar = a.refined(2);
        int count_union = 0, count_inter = 0, count_diff = 0;
        for (int c = 0; c < ctx->complex(2).count(); ++c) {
            if (ar.member(c) || b.member(c)) ++count_union;
            if (ar.member(c) && b.member(c)) ++count_inter;
            if (ar.member(c) && !b.member(c)) ++count_diff;
        }
        CHECK(set_union(a, b).count() == count_union);
        CHECK(set_intersection(a, b).count() == count_inter);
        CHECK(set_difference(a, b).count() == count_diff);
        CHECK(set_union(a, b).refinement_depth_used() == 2);
        CHECK(a.complement().count() + a.count() == ctx->complex(1).count());
        CHECK(is_subset(set_intersection(a, b), a));
        CHECK(is_subset(a, set_union(a, b)));
        CHECK((CylinderFunction::indicator(a) * CylinderFunction::indicator(b)) ==
              CylinderFunction::indicator(set_intersection(a, b)));
    }
}

TEST_CASE("sigma and tau images of sets") {
    auto ctx = make_context(load("p3.json"), 6);
    std::mt19937 rng(19);
    for (int trial = 0; trial < 15; ++trial) {
        auto a = random_set(ctx, 2, rng);
        for (int i = 0; i < 2; ++i) {
            auto img = image_sigma(a, i);
            CHECK(img.depth() == 3);
            CHECK(img.count() == a.count());  // sigma~_i is injective
            CHECK(image_tau(img) == a);       // tau inverts it
            CHECK(preimage_sigma(img, i) == a);
            CHECK(is_subset(img, CylinderSet::label_prefix(ctx, {i})));
        }
    }
    CHECK(image_tau(CylinderSet::whole(ctx)) == CylinderSet::whole(ctx));
}

TEST_CASE("p-preimage of the sink is invariant but not bi-invariant") {
    auto ctx = make_context(load("p3.json"), 4);
    auto a = CylinderSet::base_preimage(ctx, {0});
    CHECK(a.count() == 1);  // one depth-0 cylinder
    for (int i = 0; i < 2; ++i) CHECK(is_subset(image_sigma(a, i), a));
    // but tails over {0} escape under sigma~^{-1}
    bool escapes = false;
    for (int i = 0; i < 2; ++i)
        if (!is_subset(preimage_sigma(a, i), a)) escapes = true;
    CHECK(escapes);
}

TEST_CASE("set membership of tail points") {
    auto ctx = make_context(load("p3.json"), 4);
    auto t = TailSpec::fixed_point(ctx->sys(), 2, {1});
    CHECK(CylinderSet::label_prefix(ctx, {1}).contains(t));
    CHECK(!CylinderSet::label_prefix(ctx, {0}).contains(t));
    CHECK(CylinderSet::base_preimage(ctx, {2}).contains(t));
    CHECK(CylinderSet::base_preimage(ctx, {0, 1}).contains(t.prepended(ctx->sys(), 0)));
}

TEST_CASE("separation agrees with the lasso oracle exhaustively") {
    for (int m = 1; m <= 3; ++m) {
        for (const auto& sys : enumerate_systems(m, 2)) {
            auto g = build_tail_graph(sys);
            CHECK(separation_test(g).separates == separates_oracle(sys));
        }
    }
}

TEST_CASE("separation verdicts on the shipped systems") {
    CHECK(separation_test(build_tail_graph(load("fs2.json"))).separates);
    CHECK(separation_test(build_tail_graph(load("pt2.json"))).separates);
    auto sw = separation_test(build_tail_graph(load("sw2.json")));
    CHECK(!sw.separates);
    REQUIRE(sw.witness.has_value());
    CHECK(*sw.witness == std::pair<int, int>{0, 1});
    CHECK(!separation_test(build_tail_graph(load("p3.json"))).separates);
}

TEST_CASE("tau determinism report") {
    auto rep = tau_determinism(build_tail_graph(load("p3.json")), 3);
    CHECK(rep.pass);
    CHECK(rep.cylinder_counts == std::vector<int>{3, 6, 12, 24});
}

TEST_CASE("complex json export") {
    auto ctx = make_context(load("fs2.json"), 3);
    auto j = complex_to_json(*ctx, 1);
    CHECK(j["depth"] == 1);
    CHECK(j["cylinders"].size() == 4);
}

TEST_CASE("word display is 1-based") {
    CHECK(word_str({}) == "e");
    CHECK(word_str({0, 1}) == "12");
}
