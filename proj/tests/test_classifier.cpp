#include <doctest.h>

#include <cmath>
#include <cstring>

#include "sist/classifier.hpp"
#include "support.hpp"

using namespace sist;
using sist::testing::error_of;
using sist::testing::Rng;
using sist::testing::uniform_index;
using sist::testing::uniform_vector;

namespace {

FeatureMatrix matrix(std::size_t rows, std::size_t cols, std::vector<double> data) {
    FeatureMatrix f;
    f.rows = rows;
    f.cols = cols;
    f.data = std::move(data);
    return f;
}

// Classic perceptron with bias; a separating run certifies separability.
bool perceptron_separable(const FeatureMatrix& f, const std::vector<int>& y, int epochs = 10000) {
    std::vector<double> w(f.cols, 0.0);
    double b = 0.0;
    for (int e = 0; e < epochs; ++e) {
        bool clean = true;
        for (std::size_t i = 0; i < f.rows; ++i) {
            double s = b;
            for (std::size_t p = 0; p < f.cols; ++p) s += w[p] * f.at(i, p);
            if (y[i] * s <= 0.0) {
                for (std::size_t p = 0; p < f.cols; ++p) w[p] += y[i] * f.at(i, p);
                b += y[i];
                clean = false;
            }
        }
        if (clean) return true;
    }
    return false;
}

double training_accuracy(const LinearModel& m, const FeatureMatrix& f, const std::vector<int>& y) {
    return accuracy(predict(m, f), y);
}

}  // namespace

TEST_CASE("one-dimensional separable example") {
    const auto f = matrix(4, 1, {0.0, 0.1, 1.0, 1.1});
    const std::vector<int> y{-1, -1, +1, +1};
    const auto m = train_linear(f, y, {.reg_c = 10.0});
    CHECK(training_accuracy(m, f, y) == 1.0);
    const double threshold = -m.bias / m.weights[0];
    CHECK(threshold > 0.1);
    CHECK(threshold < 1.0);
    CHECK(m.meta.converged);
}

TEST_CASE("training is bit-reproducible") {
    Rng rng(2);
    const auto data = uniform_vector(rng, 60 * 5);
    const auto f = matrix(60, 5, data);
    std::vector<int> y(60);
    for (std::size_t i = 0; i < 60; ++i) y[i] = data[i * 5] + 0.3 * data[i * 5 + 1] > 0 ? 1 : -1;
    const auto a = train_linear(f, y, {.seed = 9});
    const auto b = train_linear(f, y, {.seed = 9});
    REQUIRE(a.weights.size() == b.weights.size());
    CHECK(std::memcmp(a.weights.data(), b.weights.data(), a.weights.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(&a.bias, &b.bias, sizeof(double)) == 0);
    CHECK(a.meta.iterations == b.meta.iterations);
}

TEST_CASE("xor has no linear separator") {
    const auto f = matrix(4, 2, {0, 0, 1, 1, 0, 1, 1, 0});
    const std::vector<int> y{-1, -1, +1, +1};
    CHECK_FALSE(perceptron_separable(f, y, 2000));
    for (double c : {0.1, 1.0, 100.0}) {
        CHECK(training_accuracy(train_linear(f, y, {.reg_c = c}), f, y) <= 0.75);
    }
}

TEST_CASE("separable sets reach full training accuracy with a large C") {
    Rng rng(31);
    int certified = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = uniform_index(rng, 6, 40);
        const std::size_t dim = uniform_index(rng, 1, 6);
        const auto w = uniform_vector(rng, dim);
        auto data = uniform_vector(rng, n * dim);
        std::vector<int> y(n);
        std::size_t pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.1;
            for (std::size_t p = 0; p < dim; ++p) s += w[p] * data[i * dim + p];
            y[i] = s >= 0 ? 1 : -1;
            pos += y[i] > 0;
        }
        if (pos == 0 || pos == n) continue;
        const auto f = matrix(n, dim, data);
        if (!perceptron_separable(f, y)) continue;
        ++certified;
        const auto m = train_linear(f, y, {.reg_c = 1e6, .tol = 1e-9, .max_iter = 200000});
        CHECK(training_accuracy(m, f, y) == 1.0);
    }
    CHECK(certified > 20);
}

TEST_CASE("dual objective never increases and matches the primal at convergence") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = uniform_index(rng, 10, 80);
        const std::size_t dim = uniform_index(rng, 1, 8);
        const auto f = matrix(n, dim, uniform_vector(rng, n * dim));
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = (f.at(i, 0) + 0.5 * uniform_vector(rng, 1)[0]) > 0 ? 1 : -1;
        y[0] = 1;
        y[1] = -1;
        const double c = trial % 2 ? 0.5 : 5.0;
        const auto m = train_linear(f, y, {.reg_c = c, .tol = 1e-8, .max_iter = 100000});
        const auto& hist = m.meta.dual_objective;
        REQUIRE(!hist.empty());
        for (std::size_t e = 1; e < hist.size(); ++e) CHECK(hist[e] <= hist[e - 1] + 1e-12);
        CHECK(m.meta.converged);
        // Strong duality: primal = -dual at the optimum.
        const double gap = m.meta.final_objective + hist.back();
        CHECK(gap >= -1e-9);
        CHECK(gap <= 1e-3 * std::max(1.0, m.meta.final_objective));
    }
}

TEST_CASE("standardisation is folded back into the weights") {
    Rng rng(14);
    const std::size_t n = 30, dim = 3;
    auto data = uniform_vector(rng, n * dim, 0.0, 0.05);
    for (std::size_t i = 0; i < n; ++i) data[i * dim + 2] = 7.0;  // constant column
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = data[i * dim] > 0.025 ? 1 : -1;
    const auto f = matrix(n, dim, data);
    const auto m = train_linear(f, y, {.tol = 1e-12, .max_iter = 1000000, .standardize = true});

    // Refit on explicitly standardised features; decisions must agree.
    auto z = data;
    for (std::size_t p = 0; p < dim; ++p) {
        double mean = 0, var = 0;
        for (std::size_t i = 0; i < n; ++i) mean += data[i * dim + p];
        mean /= n;
        for (std::size_t i = 0; i < n; ++i) var += std::pow(data[i * dim + p] - mean, 2);
        const double sd = std::sqrt(var / n);
        for (std::size_t i = 0; i < n; ++i) z[i * dim + p] = sd > 0 ? (data[i * dim + p] - mean) / sd : data[i * dim + p] - mean;
    }
    const auto fz = matrix(n, dim, z);
    const auto mz = train_linear(fz, y, {.tol = 1e-12, .max_iter = 1000000});
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(m.decision(f.row(i)) == doctest::Approx(mz.decision(fz.row(i))).epsilon(1e-6));
    }
}

TEST_CASE("predict examples and conventions") {
    LinearModel m;
    m.weights = {1.0};
    m.bias = -0.5;
    const auto f = matrix(3, 1, {0.6, 0.4, 0.5});
    CHECK(predict(m, f) == std::vector<int>{+1, -1, +1});

    LinearModel zero;
    zero.weights = {0.0, 0.0};
    const auto g = matrix(2, 2, {3, -4, -1, 2});
    CHECK(predict(zero, g) == std::vector<int>{+1, +1});

    CHECK(error_of([&] { predict(m, g); }) == ErrorCode::DimensionMismatch);
    CHECK(error_of([&] { m.decision(std::vector<double>{1, 2}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("positive rescaling of the hyperplane keeps every prediction") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        LinearModel m;
        m.weights = uniform_vector(rng, 4);
        m.bias = uniform_vector(rng, 1)[0];
        const auto f = matrix(25, 4, uniform_vector(rng, 100));
        const auto before = predict(m, f);
        const double k = std::exp(uniform_vector(rng, 1, -3, 3)[0]);
        for (auto& w : m.weights) w *= k;
        m.bias *= k;
        CHECK(predict(m, f) == before);
    }
}

TEST_CASE("accuracy examples") {
    const std::vector<int> a{1, -1, 1, -1};
    const std::vector<int> flipped{-1, 1, -1, 1};
    const std::vector<int> three{1, -1, 1, 1};
    CHECK(accuracy(a, a) == 1.0);
    CHECK(accuracy(a, flipped) == 0.0);
    CHECK(accuracy(three, a) == 0.75);
    CHECK(error_of([&] { accuracy(a, std::vector<int>{1}); }) == ErrorCode::LengthMismatch);
    CHECK(error_of([&] { accuracy(std::vector<int>{}, std::vector<int>{}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("train_linear errors") {
    const auto f = matrix(3, 1, {0, 1, 2});
    CHECK(error_of([&] { train_linear(f, std::vector<int>{1, 1, 1}); }) == ErrorCode::SingleClass);
    CHECK(error_of([&] { train_linear(f, std::vector<int>{1, -1}); }) == ErrorCode::DimensionMismatch);
    CHECK(error_of([&] { train_linear(f, std::vector<int>{1, -1, 1}, {.reg_c = 0.0}); }) ==
          ErrorCode::InvalidArgument);
    CHECK(error_of([&] { train_linear(f, std::vector<int>{1, -1, 2}); }) == ErrorCode::InvalidArgument);
}
