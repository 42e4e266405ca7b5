#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "bwc/conv/frontend.hpp"
#include "bwc/rng.hpp"

using bwc::conv::Kernel;

namespace {

// Independent naive implementation used as an oracle.
std::vector<double> naive_valid_correlation(const std::vector<double>& x,
                                            const std::vector<double>& k) {
    std::vector<double> out;
    for (std::size_t start = 0; start + k.size() <= x.size(); ++start) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k.size(); ++j) acc += x[start + j] * k[j];
        out.push_back(acc);
    }
    return out;
}

}  // namespace

TEST_CASE("convolve1d matches a hand-worked example", "[conv]") {
    Kernel k;
    k.weights = {1.0, 1.0};
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    CHECK(bwc::conv::convolve1d(x, k) == std::vector<double>{3.0, 5.0, 7.0});
}

TEST_CASE("valid convolution output length is n - k + 1", "[conv]") {
    Kernel k;
    k.weights.assign(10, 0.1);
    std::vector<double> x(5000, 1.0);
    CHECK(bwc::conv::convolve1d(x, k).size() == 4991);

    std::vector<double> same(10, 1.0);
    CHECK(bwc::conv::convolve1d(same, k).size() == 1);

    std::vector<double> shorter(9, 1.0);
    CHECK_THROWS_AS(bwc::conv::convolve1d(shorter, k), bwc::conv::KernelLongerThanInput);
}

TEST_CASE("convolve1d agrees with the naive oracle", "[conv]") {
    bwc::Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 10 + rng.below(300);
        const std::size_t ks = 1 + rng.below(10);
        std::vector<double> x(n);
        for (auto& v : x) v = rng.uniform(-100.0, 100.0);
        Kernel k;
        k.weights.resize(ks);
        for (auto& w : k.weights) w = rng.uniform(-2.0, 2.0);

        const auto got = bwc::conv::convolve1d(x, k);
        const auto want = naive_valid_correlation(x, k.weights);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            REQUIRE_THAT(got[i], Catch::Matchers::WithinAbs(want[i], 1e-12));
    }
}

TEST_CASE("convolution is linear in its input", "[conv]") {
    bwc::Rng rng(32);
    Kernel k;
    k.weights = {0.3, -1.2, 0.8, 2.0};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(64);
        std::vector<double> y(64);
        for (auto& v : x) v = rng.uniform(-10.0, 10.0);
        for (auto& v : y) v = rng.uniform(-10.0, 10.0);
        const double a = rng.uniform(-3.0, 3.0);
        const double b = rng.uniform(-3.0, 3.0);

        std::vector<double> combo(64);
        for (std::size_t i = 0; i < 64; ++i) combo[i] = a * x[i] + b * y[i];

        const auto cx = bwc::conv::convolve1d(x, k);
        const auto cy = bwc::conv::convolve1d(y, k);
        const auto cc = bwc::conv::convolve1d(combo, k);
        for (std::size_t i = 0; i < cc.size(); ++i)
            REQUIRE_THAT(cc[i], Catch::Matchers::WithinAbs(a * cx[i] + b * cy[i], 1e-9));
    }
}

TEST_CASE("relu clamps negatives to zero", "[conv]") {
    CHECK(bwc::conv::relu({-1.0, 0.0, 2.5, -0.1}) == std::vector<double>{0.0, 0.0, 2.5, 0.0});
    std::vector<double> v{-3.0, 4.0};
    bwc::conv::relu_in_place(v);
    CHECK(v == std::vector<double>{0.0, 4.0});
}

TEST_CASE("init_kernels draws weights in (0,1) deterministically", "[conv]") {
    const auto a = bwc::conv::init_kernels(3, 10, 42);
    const auto b = bwc::conv::init_kernels(3, 10, 42);
    const auto c = bwc::conv::init_kernels(3, 10, 43);
    REQUIRE(a.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(a[i].id == i);
        REQUIRE(a[i].weights.size() == 10);
        for (const double w : a[i].weights) {
            CHECK(w > 0.0);
            CHECK(w < 1.0);
        }
        CHECK(a[i].weights == b[i].weights);
    }
    CHECK(a[0].weights != c[0].weights);
    CHECK(a[0].weights != a[1].weights);
}

TEST_CASE("forward applies ReLU after every kernel", "[conv]") {
    std::vector<double> x{1.0, -2.0, 3.0, -4.0, 5.0};
    Kernel pos;
    pos.id = 0;
    pos.weights = {1.0, 0.0};
    Kernel neg;
    neg.id = 1;
    neg.weights = {-1.0, 0.0};

    const auto fm = bwc::conv::forward(bwc::conv::InputTensor(x), {pos, neg});
    REQUIRE(fm.rows.size() == 2);
    CHECK(fm.rows[0] == std::vector<double>{1.0, 0.0, 3.0, 0.0});
    CHECK(fm.rows[1] == std::vector<double>{0.0, 2.0, 0.0, 4.0});
}
