#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sist/dataset.hpp"
#include "sist/distance.hpp"

namespace sist {

/// A subsequence cut from a training series. `values` always equals the
/// source window [offset, offset + values.size()).
struct Shapelet {
    std::vector<double> values;
    std::size_t source_index = 0;
    std::size_t offset = 0;
    int class_sign = 0;

    std::size_t length() const noexcept { return values.size(); }
    Placement placement() const noexcept { return {source_index, offset, values.size()}; }

    bool operator==(const Shapelet&) const = default;
};

struct ScoredCandidate {
    Shapelet candidate;
    double grq = 0.0;
    /// Relaxed fixed distance to every training series, in dataset order.
    /// The training-set transform reads these instead of recomputing.
    std::vector<double> dist_row;

    bool operator==(const ScoredCandidate&) const = default;
};

enum class OverlapScope {
    AnySeries,   // positions clash regardless of source series
    SameSeries,  // positions clash only within one source series
};

struct ShapeletSet {
    std::vector<ScoredCandidate> members;  // descending priority
    RelaxConfig config;
    std::size_t length = 0;
    bool overlap_deleted = false;
    OverlapScope scope = OverlapScope::AnySeries;

    std::size_t size() const noexcept { return members.size(); }
    bool empty() const noexcept { return members.empty(); }
};

inline constexpr double kGrqEpsilon = 1e-12;

/// All windows of length L, ordered by (source_index, offset); n(m-L+1) total.
std::vector<Shapelet> extract_candidates(const ValidatedDataset& d, std::size_t length);

/// |mean(a) - mean(b)| / (var(a) + var(b) + kGrqEpsilon), population variances.
double grq(std::span<const double> a, std::span<const double> b);

/// Relaxed fixed distance rows and GRQ priorities. Candidates are split into
/// contiguous blocks across `threads` workers; each result depends only on its
/// own candidate, so output is identical for any thread count.
std::vector<ScoredCandidate> score_all(const ValidatedDataset& d,
                                       std::span<const Shapelet> candidates,
                                       const RelaxConfig& cfg, unsigned threads = 1);

/// Strict priority order: grq descending, then source_index, then offset.
bool higher_priority(const ScoredCandidate& a, const ScoredCandidate& b) noexcept;

/// Walks `ranked` (already in priority order) and returns the positions kept
/// by the overlap rule and the count limit.
std::vector<std::size_t> select_ranked(std::span<const ScoredCandidate* const> ranked,
                                       std::size_t count, bool delete_overlap,
                                       OverlapScope scope);

/// Sorts by priority, optionally drops candidates whose [offset, offset+L-1]
/// interval intersects an already kept one, and keeps at most `count`.
ShapeletSet rank_and_select(std::vector<ScoredCandidate> scored, std::size_t count,
                            bool delete_overlap, OverlapScope scope, const RelaxConfig& cfg);

}  // namespace sist
