#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace sist {

enum class RelaxMode {
    ShiftedWindow,  // contiguous windows shifted by -left..+right
    SubsequenceDP,  // ordered, possibly non-contiguous index selections
};

struct RelaxConfig {
    int left = 0;
    int right = 0;
    RelaxMode mode = RelaxMode::ShiftedWindow;

    bool operator==(const RelaxConfig&) const = default;
};

/// Where a shapelet sits in the series it was cut from. `offset` is 0-based:
/// offset 0 is the first sample.
struct Placement {
    std::size_t source_index = 0;
    std::size_t offset = 0;
    std::size_t length = 0;

    bool operator==(const Placement&) const = default;
};

double euclidean(std::span<const double> a, std::span<const double> b);

/// Minimum Euclidean distance between `s` and every contiguous window of `x`
/// of the same length. O(k(m-k)) worst case; a window is abandoned as soon as
/// its partial squared sum strictly exceeds the best so far, which never
/// changes the result.
double sliding_min_distance(std::span<const double> s, std::span<const double> x);

/// Distance to the single window of `x` at the shapelet's own offset. O(k).
double fixed_distance(std::span<const double> s, const Placement& where,
                      std::span<const double> x);

/// Fixed distance with a positional tolerance of `cfg.left` samples before
/// and `cfg.right` after the placement. Out-of-range shifts are clamped to the
/// series. With left == right == 0 both modes equal fixed_distance exactly.
///
/// ShiftedWindow: min over contiguous windows starting in
///   [max(0, j-left), min(m-k, j+right)].
/// SubsequenceDP: min over index selections i1 < ... < ik with i1 in that same
///   range and ik <= j+k-1+right, via an O(k(k+left+right)) recurrence.
double relaxed_fixed_distance(std::span<const double> s, const Placement& where,
                              std::span<const double> x, const RelaxConfig& cfg);

/// Squared-difference terms evaluated by the kernels on this thread since the
/// last reset. Used to check per-call cost, e.g. that fixed_distance does not
/// depend on the series length.
std::uint64_t kernel_op_count() noexcept;
void reset_kernel_op_count() noexcept;

}  // namespace sist
