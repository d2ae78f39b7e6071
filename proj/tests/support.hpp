#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sist/dataset.hpp"
#include "sist/error.hpp"

namespace sist::testing {

using Rng = std::mt19937_64;

inline std::vector<double> uniform_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline LabeledDataset make_dataset(std::vector<Series> series, std::vector<std::string> labels) {
    LabeledDataset d;
    d.series = std::move(series);
    d.labels = std::move(labels);
    return d;
}

// Two classes of Gaussian noise; class "2" carries a bump of `height` on
// [pos, pos + width). Rows alternate between the classes.
inline LabeledDataset planted_bump(std::size_t n, std::size_t m, std::uint64_t seed,
                                   std::size_t pos = 10, std::size_t width = 4,
                                   double height = 3.0, double noise = 0.3) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, noise);
    LabeledDataset d;
    for (std::size_t i = 0; i < n; ++i) {
        Series s(m);
        for (auto& v : s) v = g(rng);
        const bool positive = i % 2 == 1;
        if (positive) {
            for (std::size_t t = pos; t < pos + width && t < m; ++t) s[t] += height;
        }
        d.series.push_back(std::move(s));
        d.labels.push_back(positive ? "2" : "1");
    }
    return d;
}

// Plain random binary dataset with alternating labels.
inline LabeledDataset random_dataset(std::size_t n, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    LabeledDataset d;
    for (std::size_t i = 0; i < n; ++i) {
        d.series.push_back(uniform_vector(rng, m));
        d.labels.push_back(i % 2 ? "b" : "a");
    }
    return d;
}

// Code carried by the sist::Error thrown by `fn`, or Ok if nothing is thrown.
template <class Fn>
ErrorCode error_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

inline bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace sist::testing
