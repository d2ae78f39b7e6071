#include "sist/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sist/error.hpp"

namespace sist {
namespace {

thread_local std::uint64_t tl_kernel_ops = 0;

// Every kernel funnels through this so that the same window always produces
// the same bits, whichever kernel asked for it.
inline double squared_window(std::span<const double> s, const double* window) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = s[i] - window[i];
        sum += d * d;
    }
    tl_kernel_ops += s.size();
    return sum;
}

void check_placement(std::span<const double> s, const Placement& where, std::size_t m) {
    if (s.size() != where.length) {
        fail(ErrorCode::LengthMismatch, "shapelet has " + std::to_string(s.size()) +
                                            " values but placement length " +
                                            std::to_string(where.length));
    }
    if (where.length == 0 || where.offset + where.length > m) {
        fail(ErrorCode::PlacementOutOfRange,
             "offset " + std::to_string(where.offset) + " + length " +
                 std::to_string(where.length) + " exceeds series length " + std::to_string(m));
    }
}

double relaxed_shifted(std::span<const double> s, std::size_t offset, std::span<const double> x,
                       std::size_t left, std::size_t right) {
    const std::size_t k = s.size();
    const std::size_t first = offset > left ? offset - left : 0;
    const std::size_t last = std::min(x.size() - k, offset + right);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i <= last; ++i) {
        best = std::min(best, squared_window(s, x.data() + i));
    }
    return best;
}

double relaxed_subsequence(std::span<const double> s, std::size_t offset,
                           std::span<const double> x, std::size_t left, std::size_t right) {
    const std::size_t k = s.size();
    const std::size_t m = x.size();
    const std::size_t lo = offset > left ? offset - left : 0;
    const std::size_t first_hi = std::min(m - k, offset + right);
    const std::size_t hi = std::min(m - 1, offset + k - 1 + right);
    const std::size_t width = hi - lo + 1;
    constexpr double inf = std::numeric_limits<double>::infinity();

    // cost[p]: best squared sum for s[0..t] with s[t] matched at lo + p.
    std::vector<double> cost(width, inf);
    std::vector<double> next(width, inf);
    for (std::size_t p = 0; lo + p <= first_hi; ++p) {
        const double d = s[0] - x[lo + p];
        cost[p] = d * d;
    }
    for (std::size_t t = 1; t < k; ++t) {
        double prefix = inf;  // min of cost[0 .. p-1]
        for (std::size_t p = 0; p < width; ++p) {
            if (prefix < inf) {
                const double d = s[t] - x[lo + p];
                next[p] = d * d + prefix;
            } else {
                next[p] = inf;
            }
            prefix = std::min(prefix, cost[p]);
        }
        std::swap(cost, next);
    }
    tl_kernel_ops += k * width;
    return *std::min_element(cost.begin(), cost.end());
}

}  // namespace

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        fail(ErrorCode::LengthMismatch,
             std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    return std::sqrt(squared_window(a, b.data()));
}

double sliding_min_distance(std::span<const double> s, std::span<const double> x) {
    const std::size_t k = s.size();
    const std::size_t m = x.size();
    if (k == 0) fail(ErrorCode::InvalidArgument, "empty shapelet");
    if (k > m) {
        fail(ErrorCode::ShapeletLongerThanSeries,
             std::to_string(k) + " > " + std::to_string(m));
    }
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t ops = 0;
    for (std::size_t start = 0; start + k <= m; ++start) {
        const double* w = x.data() + start;
        double sum = 0.0;
        std::size_t i = 0;
        for (; i < k; ++i) {
            const double d = s[i] - w[i];
            sum += d * d;
            if (sum > best) break;
        }
        ops += i < k ? i + 1 : k;
        if (i == k && sum < best) best = sum;
    }
    tl_kernel_ops += ops;
    return std::sqrt(best);
}

double fixed_distance(std::span<const double> s, const Placement& where,
                      std::span<const double> x) {
    check_placement(s, where, x.size());
    return std::sqrt(squared_window(s, x.data() + where.offset));
}

double relaxed_fixed_distance(std::span<const double> s, const Placement& where,
                              std::span<const double> x, const RelaxConfig& cfg) {
    check_placement(s, where, x.size());
    if (cfg.left < 0 || cfg.right < 0) {
        fail(ErrorCode::InvalidArgument, "relaxation factors must be non-negative");
    }
    const auto left = static_cast<std::size_t>(cfg.left);
    const auto right = static_cast<std::size_t>(cfg.right);
    const double best = cfg.mode == RelaxMode::ShiftedWindow
                            ? relaxed_shifted(s, where.offset, x, left, right)
                            : relaxed_subsequence(s, where.offset, x, left, right);
    return std::sqrt(best);
}

std::uint64_t kernel_op_count() noexcept { return tl_kernel_ops; }

void reset_kernel_op_count() noexcept { tl_kernel_ops = 0; }

}  // namespace sist
