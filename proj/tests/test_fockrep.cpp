#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>

#include "mds/fockrep.hpp"

using namespace mds;

namespace {

DynSys load(const std::string& file) {
    std::ifstream in(std::string(DATA_DIR) + "/" + file);
    REQUIRE(in.good());
    return DynSys::from_json(nlohmann::json::parse(in));
}

CoreElement random_core(const ContextPtr& ctx, std::mt19937& rng, int max_word = 1) {
    const int n = ctx->sys().n();
    std::uniform_int_distribution<int> nterms(1, 3), wlen(0, max_word), letter(0, n - 1);
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
    CoreElement a = CoreElement::zero(ctx);
    for (int t = 0, terms = nterms(rng); t < terms; ++t) {
        Word u, v;
        for (int i = 0, l = wlen(rng); i < l; ++i) u.push_back(letter(rng));
        for (int i = 0, l = wlen(rng); i < l; ++i) v.push_back(letter(rng));
        std::vector<Scalar> vals;
        for (int c = 0; c < ctx->complex(1).count(); ++c)
            vals.push_back(Scalar(Rational(num(rng), den(rng))));
        a = a + CoreElement::term(u, v, CylinderFunction(ctx, 1, vals));
    }
    return a;
}

}  // namespace

TEST_CASE("sparse matrices behave") {
    SparseMatrix a(2, 2);
    a.set(0, 1, Scalar(2));
    a.add(0, 1, Scalar(-2));
    CHECK(a.entries().empty());  // exact zeros vanish
    a.set(0, 1, Scalar(Rational(1, 2)));
    a.set(1, 0, Scalar(3));
    auto prod = a * a;
    CHECK(prod.get(0, 0) == Scalar(Rational(3, 2)));
    CHECK(prod.get(1, 1) == Scalar(Rational(3, 2)));
    CHECK(a.adjoint().get(1, 0) == Scalar(Rational(1, 2)));
    CHECK((a - a).max_abs() == 0.0);
    CHECK(a.triplets() == "0 1 1/2\n1 0 3\n");
    CHECK_THROWS_AS(a.set(2, 0, Scalar(1)), std::out_of_range);
    CHECK_THROWS_AS(a * SparseMatrix(3, 3), std::invalid_argument);
}

TEST_CASE("word basis is length-lexicographic with the right dimension") {
    auto b = make_word_basis(2, 3);
    CHECK(b.dim() == 15);          // (2^4 - 1) / (2 - 1)
    CHECK(b.interior_dim() == 7);
    CHECK(b.words[0] == Word{});
    CHECK(b.words[1] == Word{0});
    CHECK(b.words[2] == Word{1});
    CHECK(b.words[3] == Word{0, 0});
    CHECK(b.index_of({1, 0}) == 5);
    CHECK(b.index_of({1, 0, 1, 0}) == -1);
    CHECK(make_word_basis(1, 4).dim() == 5);  // n = 1: L + 1
    CHECK(make_word_basis(3, 2).dim() == 13);
}

TEST_CASE("orbit representation of the sink is scalar on the diagonal") {
    DynSys p3 = load("p3.json");
    auto rep = build_orbit_rep(p3, 0, 2);
    CHECK(rep.dim() == 7);
    // the orbit of the sink is {0}: every diagonal entry is f(0)
    std::vector<Scalar> f{Scalar(5), Scalar(7), Scalar(11)};
    auto d = rep.diag_base(f);
    for (int c = 0; c < rep.dim(); ++c) CHECK(d.get(c, c) == Scalar(5));
    CHECK(build_orbit_rep(p3, 0, 1).dim() == 3);  // 1 + n
    CHECK_THROWS_AS(build_orbit_rep(p3, 0, 12, 100), std::invalid_argument);
    CHECK_THROWS_AS(build_orbit_rep(p3, 9, 2), std::invalid_argument);
}

TEST_CASE("full-shift orbit representation reads the first letter") {
    DynSys fs2 = load("fs2.json");
    auto rep = build_orbit_rep(fs2, 0, 2);
    std::vector<Scalar> f{Scalar(5), Scalar(7)};
    for (int c = 0; c < rep.dim(); ++c) {
        const Word& w = rep.basis.words[c];
        Scalar expect = w.empty() ? Scalar(5) : (w.front() == 0 ? Scalar(5) : Scalar(7));
        CHECK(rep.diag_base(f).get(c, c) == expect);
    }
}

TEST_CASE("covariance and row isometry are exact for every shipped system") {
    for (const char* file :
         {"p3.json", "fs2.json", "sw2.json", "ns.json", "pt1.json", "pt2.json"}) {
        DynSys sys = load(file);
        for (int L = 2; L <= 4; ++L) {
            for (int x = 0; x < sys.size(); ++x) {
                auto rep = build_orbit_rep(sys, x, L);
                auto cov = check_covariance(rep);
                CHECK(cov.pass);
                CHECK(cov.max_deviation == 0.0);
                auto row = check_row_isometry(rep);
                CHECK(row.pass);
                CHECK(row.max_deviation == 0.0);
                CHECK(row.interior_dim == rep.interior_dim());
            }
        }
    }
}

TEST_CASE("tail representations embed their windows consistently") {
    DynSys p3 = load("p3.json");
    auto spec = TailSpec::fixed_point(p3, 2, {1});  // (2^inf; 2,2,...)
    auto rep = build_tail_rep(p3, spec, 2, 3);
    CHECK(rep.base_point == 2);
    CHECK(rep.window == 2);
    // the window-1 vacuum sits at xi_{2} inside H_2
    CHECK(rep.embedded_index(1, {}) == rep.basis.index_of({1}));
    CHECK(rep.embedded_index(2, {}) == rep.basis.index_of({}));
    auto comp = check_cuntz_completeness(rep);
    CHECK(comp.pass);
    CHECK(comp.max_deviation == 0.0);
    CHECK(check_covariance(rep).pass);
    // constant tails give the same representation at every window
    auto r0 = build_tail_rep(p3, spec, 0, 3);
    CHECK(r0.base_point == rep.base_point);
    CHECK_THROWS_AS(check_cuntz_completeness(build_orbit_rep(p3, 0, 2)),
                    std::invalid_argument);
}

TEST_CASE("tail representation from an explicit chain in a tailed system") {
    TailedSys t = add_tail(load("ns.json"), 3);
    // the unique backward chain 1 <- (1,-1) <- (1,-2) <- (1,-3)
    std::vector<int> chain{1, t.tail_index(0, 1), t.tail_index(0, 2), t.tail_index(0, 3)};
    auto rep = build_tail_rep(t.extended, chain, {0, 0, 0}, 3, 3);
    CHECK(check_covariance(rep).pass);
    CHECK(check_row_isometry(rep).pass);
    CHECK(check_cuntz_completeness(rep).pass);
    std::vector<int> broken{1, t.tail_index(0, 2)};
    CHECK_THROWS_AS(build_tail_rep(t.extended, broken, {0}, 1, 2), std::invalid_argument);
}

TEST_CASE("maximality is membership in the deficiency set") {
    DynSys ns = load("ns.json");
    CHECK(maximality_flag(ns, 1));
    CHECK(!maximality_flag(ns, 0));
    DynSys p3 = load("p3.json");
    for (int x = 0; x < 3; ++x) CHECK(!maximality_flag(p3, x));
}

TEST_CASE("rho intertwines covering and base orbit representations") {
    DynSys p3 = load("p3.json");
    auto ctx = make_context(p3, 8);
    // tails over the fixed points of each map
    auto r1 = check_rho_intertwine(ctx, TailSpec::fixed_point(p3, 0, {0}), 0, 3);
    CHECK(r1.pass);
    CHECK(r1.max_deviation == 0.0);
    CHECK(check_rho_intertwine(ctx, TailSpec::fixed_point(p3, 0, {1}), 0, 3).pass);
    CHECK(check_rho_intertwine(ctx, TailSpec::fixed_point(p3, 2, {1}), 2, 3).pass);
    CHECK_THROWS_AS(check_rho_intertwine(ctx, TailSpec::fixed_point(p3, 2, {1}), 0, 3),
                    std::invalid_argument);

    DynSys fs2 = load("fs2.json");
    auto ctx2 = make_context(fs2, 8);
    for (int x = 0; x < 2; ++x)
        CHECK(check_rho_intertwine(ctx2, TailSpec::fixed_point(fs2, x, {x}), x, 3).pass);

    DynSys pt2 = load("pt2.json");
    auto ctx3 = make_context(pt2, 8);
    CHECK(check_rho_intertwine(ctx3, TailSpec::fixed_point(pt2, 0, {0}), 0, 3).pass);
    CHECK(check_rho_intertwine(ctx3, TailSpec::fixed_point(pt2, 0, {1}), 0, 3).pass);
}

TEST_CASE("eval_core realizes the symbolic layer") {
    DynSys p3 = load("p3.json");
    auto ctx = make_context(p3, 8);
    auto point = TailSpec::fixed_point(p3, 2, {1});
    const int L = 4;
    auto rep = build_covering_rep(ctx, point, L);
    const int interior = rep.interior_dim();

    CHECK((eval_core(CoreElement::one(ctx), rep) - SparseMatrix::identity(rep.dim()))
              .max_abs() == 0.0);

    // numeric shadow of the calculation lemma
    Word w{1, 0};
    auto f = CylinderFunction::chi(ctx, {0});
    auto tw = CoreElement::word_isometry(ctx, w);
    auto lhs = eval_core(multiply(multiply(tw, CoreElement::from_function(f)), adjoint(tw)),
                         rep);
    CylinderFunction moved = f;
    for (size_t k = 0; k < w.size(); ++k) moved = act_tau(moved);
    auto rhs = eval_core(
        CoreElement::from_function(CylinderFunction::chi(ctx, w) * moved), rep);
    CHECK((lhs - rhs).left_columns(interior).max_abs() == 0.0);

    // V is an isometry on interior columns, with exact surd arithmetic
    auto v = eval_core(isometry_v(ctx), rep);
    CHECK((v.adjoint() * v - SparseMatrix::identity(rep.dim()))
              .left_columns(interior).max_abs() == 0.0);

    // adjoints compress correctly
    std::mt19937 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_core(ctx, rng);
        auto star = eval_core(adjoint(a), rep);
        auto back = eval_core(a, rep).adjoint();
        CHECK((star - back).left_columns(interior)
                  .adjoint().left_columns(interior).max_abs() == 0.0);
    }
}

TEST_CASE("eval_core is multiplicative deep inside the truncation") {
    for (const char* file : {"p3.json", "fs2.json", "sw2.json"}) {
        DynSys sys = load(file);
        auto ctx = make_context(sys, 10);
        TailSpec point;
        bool found = false;
        for (int x = 0; x < sys.size() && !found; ++x)
            for (int i = 0; i < sys.n() && !found; ++i)
                try {
                    point = TailSpec::fixed_point(sys, x, {i});
                    found = true;
                } catch (const std::invalid_argument&) {
                }
        REQUIRE(found);
        const int L = 4;
        auto rep = build_covering_rep(ctx, point, L);
        // columns with |w| <= L - 2 survive both a one-letter raise and drop
        int safe = 0;
        for (int c = 0; c < rep.dim(); ++c)
            if (static_cast<int>(rep.basis.words[c].size()) <= L - 2) safe = c + 1;
        std::mt19937 rng(73);
        for (int trial = 0; trial < 25; ++trial) {
            auto a = random_core(ctx, rng);
            auto b = random_core(ctx, rng);
            auto lhs = eval_core(multiply(a, b), rep).left_columns(safe);
            auto rhs = (eval_core(a, rep) * eval_core(b, rep)).left_columns(safe);
            CHECK((lhs - rhs).max_abs() == 0.0);
        }
    }
}

TEST_CASE("tail multiplicity of the added chain") {
    TailedSys t = add_tail(load("ns.json"), 3);
    SUBCASE("k = 0 is pi_u itself") {
        auto r = tail_multiplicity(t, 0, 0, 3);
        CHECK(r.pass);
        CHECK(r.alpha_expected == 0);
        CHECK(r.alpha_observed == 0);
        CHECK(r.beta_expected == 1);
        CHECK(r.blocks_matched == 1);
    }
    SUBCASE("k = 1 annihilates only the vacuum") {
        auto r = tail_multiplicity(t, 0, 1, 4);
        CHECK(r.pass);
        CHECK(r.alpha_observed == 1);
        CHECK(r.blocks_matched == 2);
    }
    SUBCASE("k = 2 gives 3 dead vectors and 4 blocks") {
        auto r = tail_multiplicity(t, 0, 2, 4);
        CHECK(r.pass);
        CHECK(r.alpha_observed == 3);
        CHECK(r.blocks_matched == 4);
    }
    SUBCASE("bad arguments are rejected") {
        CHECK_THROWS_AS(tail_multiplicity(t, 1, 1, 4), std::invalid_argument);
        CHECK_THROWS_AS(tail_multiplicity(t, 0, 9, 4), std::invalid_argument);
        CHECK_THROWS_AS(tail_multiplicity(t, 0, 3, 2), std::invalid_argument);
    }
}

TEST_CASE("report json carries the documented fields") {
    auto rep = build_orbit_rep(load("fs2.json"), 0, 2);
    auto j = check_covariance(rep).to_json();
    CHECK(j["check"] == "covariance");
    CHECK(j["maxDeviation"] == 0.0);
    CHECK(j["pass"] == true);
    CHECK(j["interiorDim"] == 3);
}
