#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "bwc/gp/alps.hpp"
#include "bwc/gp/expression.hpp"
#include "bwc/rng.hpp"

using namespace bwc;
using namespace bwc::gp;

namespace {

Expr feat(int i) { return Expr::feature(i); }
Expr cst(double v) { return Expr::constant(v); }

}  // namespace

TEST_CASE("expression evaluation follows plain arithmetic", "[gp]") {
    const std::vector<double> x = {3.0, -2.0};
    CHECK(Expr::node(Op::add, feat(0), cst(2.0)).evaluate(x) == 5.0);
    CHECK(Expr::node(Op::sub, feat(0), feat(1)).evaluate(x) == 5.0);
    CHECK(Expr::node(Op::mul, feat(0), feat(1)).evaluate(x) == -6.0);
    CHECK(Expr::node(Op::div, feat(0), cst(-2.0)).evaluate(x) == -1.5);
    CHECK(feat(1).evaluate(x) == -2.0);
    CHECK(cst(0.25).evaluate(x) == 0.25);
}

TEST_CASE("division by (near) zero is protected", "[gp]") {
    const std::vector<double> x = {0.0};
    CHECK(Expr::node(Op::div, cst(5.0), cst(0.0)).evaluate(x) == 1.0);
    CHECK(Expr::node(Op::div, cst(5.0), feat(0)).evaluate(x) == 1.0);
    CHECK(Expr::node(Op::div, cst(5.0), cst(0.5e-9)).evaluate(x) == 1.0);
    // exactly at the threshold the division goes through
    CHECK(Expr::node(Op::div, cst(5.0), cst(1e-9)).evaluate(x) == Catch::Approx(5e9));
    CHECK(Expr::node(Op::div, cst(-3.0), cst(-1e-12)).evaluate(x) == 1.0);
}

TEST_CASE("evaluation clamps magnitude and flushes NaN", "[gp]") {
    const std::vector<double> x = {};
    CHECK(Expr::node(Op::mul, cst(1e12), cst(1e12)).evaluate(x) == kValueClamp);
    CHECK(Expr::node(Op::mul, cst(-1e12), cst(1e12)).evaluate(x) == -kValueClamp);
    CHECK(cst(std::numeric_limits<double>::quiet_NaN()).evaluate(x) == 0.0);
    // clamping applies at every node, so downstream math stays finite
    const Expr nested = Expr::node(Op::sub, Expr::node(Op::mul, cst(1e12), cst(1e12)),
                                   Expr::node(Op::mul, cst(1e12), cst(1e12)));
    CHECK(nested.evaluate(x) == 0.0);
}

TEST_CASE("out-of-range feature references read as zero", "[gp]") {
    const std::vector<double> x = {7.0, 8.0};
    CHECK(feat(5).evaluate(x) == 0.0);
    CHECK(Expr::node(Op::add, feat(5), cst(1.0)).evaluate(x) == 1.0);
}

TEST_CASE("classification is the sign of the output, zero counts positive", "[gp]") {
    const std::vector<double> x = {};
    CHECK(classify(cst(0.0), x) == +1);
    CHECK(classify(cst(1e-12), x) == +1);
    CHECK(classify(cst(-1e-12), x) == -1);
    CHECK(classify(cst(-5.0), x) == -1);
}

TEST_CASE("tree shape queries", "[gp]") {
    const Expr e =
        Expr::node(Op::add, Expr::node(Op::mul, feat(2), cst(1.0)), feat(7));
    CHECK(e.depth() == 3);
    CHECK(e.node_count() == 5);
    CHECK(e.max_feature_index() == 7);
    CHECK(feat(4).depth() == 1);
    CHECK(cst(1.0).node_count() == 1);
    CHECK(cst(1.0).max_feature_index() == -1);
}

TEST_CASE("serialization matches the documented prefix form", "[gp]") {
    const Expr e = Expr::node(Op::add, feat(3), cst(-0.5));
    CHECK(e.to_text() == "(add (feat 3) (const -0.5))");
    CHECK(feat(0).to_text() == "(feat 0)");
    CHECK(cst(2.0).to_text() == "(const 2)");
}

TEST_CASE("expression text round-trips", "[gp]") {
    TreeGenConfig cfg;
    cfg.n_features = 6;
    cfg.max_depth = 7;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const Expr e = random_expression(cfg, rng);
        const Expr back = parse_expression(e.to_text());
        REQUIRE(back == e);
        REQUIRE(back.to_text() == e.to_text());
    }
    // whitespace is insignificant
    CHECK(parse_expression(" ( add\n(feat 1)\t(const 2) ) ") ==
          Expr::node(Op::add, feat(1), cst(2.0)));
}

TEST_CASE("malformed expression text is rejected", "[gp]") {
    CHECK_THROWS(parse_expression(""));
    CHECK_THROWS(parse_expression("(add (feat 1)"));
    CHECK_THROWS(parse_expression("(frob (feat 1) (feat 2))"));
    CHECK_THROWS(parse_expression("(feat -1)"));
    CHECK_THROWS(parse_expression("(feat x)"));
    CHECK_THROWS(parse_expression("(const abc)"));
    CHECK_THROWS(parse_expression("(feat 1) tail"));
    CHECK_THROWS(parse_expression("feat 1"));
}

TEST_CASE("random expressions respect the depth and feature bounds", "[gp]") {
    TreeGenConfig cfg;
    cfg.n_features = 4;
    cfg.max_depth = 5;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng(seed);
        const Expr e = random_expression(cfg, rng);
        REQUIRE(e.depth() >= 1);
        REQUIRE(e.depth() <= cfg.max_depth);
        REQUIRE(e.max_feature_index() < cfg.n_features);
    }

    TreeGenConfig leaf_only = cfg;
    leaf_only.max_depth = 1;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        REQUIRE(random_expression(leaf_only, rng).depth() == 1);
    }

    TreeGenConfig bad = cfg;
    bad.max_depth = 0;
    Rng rng(1);
    CHECK_THROWS_AS(random_expression(bad, rng), std::invalid_argument);
    bad = cfg;
    bad.n_features = 0;
    CHECK_THROWS_AS(random_expression(bad, rng), std::invalid_argument);
}

TEST_CASE("fitness is the MSE of the clamped output against +-1 targets", "[gp]") {
    Dataset data;
    data.push_back({{1.0}, +1.0});
    data.push_back({{-1.0}, -1.0});
    data.push_back({{1.0}, -1.0});

    // constant zero scores exactly 1 regardless of targets
    CHECK(fitness_mse(cst(0.0), data) == 1.0);
    // identity on the first two samples, wrong on the third: (0 + 0 + 4) / 3
    CHECK(fitness_mse(feat(0), data) == Catch::Approx(4.0 / 3.0));
    // big outputs are clamped to the label range before scoring
    Dataset easy;
    easy.push_back({{5.0}, +1.0});
    easy.push_back({{-5.0}, -1.0});
    CHECK(fitness_mse(Expr::node(Op::mul, feat(0), cst(100.0)), easy) == 0.0);

    CHECK_THROWS_AS(fitness_mse(cst(0.0), Dataset{}), EmptyData);
}

TEST_CASE("crossover keeps the child within the depth bound", "[gp]") {
    TreeGenConfig cfg;
    cfg.n_features = 3;
    cfg.max_depth = 6;
    Rng rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const Expr a = random_expression(cfg, rng);
        const Expr b = random_expression(cfg, rng);
        const Expr child = crossover(a, b, cfg.max_depth, rng);
        REQUIRE(child.depth() <= cfg.max_depth);
        REQUIRE(child.max_feature_index() < cfg.n_features);
    }
}

TEST_CASE("crossover mixes genetic material from both parents", "[gp]") {
    // parents with disjoint leaf sets: any child differing from parent a
    // must contain a piece of parent b
    const Expr a = Expr::node(Op::add, feat(0), feat(1));
    const Expr b = Expr::node(Op::mul, feat(2), feat(3));
    Rng rng(7);
    bool changed = false;
    for (int trial = 0; trial < 100 && !changed; ++trial) {
        const Expr child = crossover(a, b, 8, rng);
        if (!(child == a)) {
            changed = true;
            CHECK(child.max_feature_index() >= 2);
        }
    }
    CHECK(changed);
}

TEST_CASE("mutation honors its probability and the depth bound", "[gp]") {
    TreeGenConfig cfg;
    cfg.n_features = 3;
    cfg.max_depth = 5;
    Rng rng(9);
    const Expr e = random_expression(cfg, rng);

    SECTION("p = 0 never changes the tree") {
        for (int trial = 0; trial < 50; ++trial) {
            REQUIRE(mutate(e, 0.0, cfg, rng) == e);
        }
    }
    SECTION("p = 1 stays within the depth bound") {
        for (int trial = 0; trial < 300; ++trial) {
            const Expr m = mutate(e, 1.0, cfg, rng);
            REQUIRE(m.depth() <= cfg.max_depth);
            REQUIRE(m.max_feature_index() < cfg.n_features);
        }
    }
    SECTION("p = 1 eventually changes the tree") {
        bool changed = false;
        for (int trial = 0; trial < 100 && !changed; ++trial) {
            changed = !(mutate(e, 1.0, cfg, rng) == e);
        }
        CHECK(changed);
    }
}
