#include "sist/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "parallel.hpp"
#include "sist/error.hpp"

namespace sist {
namespace {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments moments(std::span<const double> v) {
    Moments out;
    for (double x : v) out.mean += x;
    out.mean /= static_cast<double>(v.size());
    for (double x : v) out.variance += (x - out.mean) * (x - out.mean);
    out.variance /= static_cast<double>(v.size());
    return out;
}

}  // namespace

std::vector<Shapelet> extract_candidates(const ValidatedDataset& d, std::size_t length) {
    const std::size_t m = d.length();
    if (length == 0 || length > m) {
        fail(ErrorCode::LengthTooLarge, "shapelet length " + std::to_string(length) +
                                            " must lie in [1, " + std::to_string(m) + "]");
    }
    std::vector<Shapelet> out;
    out.reserve(d.size() * (m - length + 1));
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto x = d.series(i);
        for (std::size_t start = 0; start + length <= m; ++start) {
            auto window = x.subspan(start, length);
            out.push_back({{window.begin(), window.end()}, i, start, d.sign(i)});
        }
    }
    return out;
}

double grq(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) fail(ErrorCode::EmptyClass, "both classes need distances");
    const Moments ma = moments(a);
    const Moments mb = moments(b);
    return std::abs(ma.mean - mb.mean) / (ma.variance + mb.variance + kGrqEpsilon);
}

std::vector<ScoredCandidate> score_all(const ValidatedDataset& d,
                                       std::span<const Shapelet> candidates,
                                       const RelaxConfig& cfg, unsigned threads) {
    const std::size_t n = d.size();
    std::vector<ScoredCandidate> out(candidates.size());
    detail::parallel_blocks(candidates.size(), detail::resolve_threads(threads),
                            [&](std::size_t begin, std::size_t end) {
        std::vector<double> neg, pos;
        neg.reserve(n);
        pos.reserve(n);
        for (std::size_t c = begin; c < end; ++c) {
            const Shapelet& s = candidates[c];
            ScoredCandidate& sc = out[c];
            sc.candidate = s;
            sc.dist_row.resize(n);
            neg.clear();
            pos.clear();
            const Placement where = s.placement();
            for (std::size_t i = 0; i < n; ++i) {
                const double dist = relaxed_fixed_distance(s.values, where, d.series(i), cfg);
                sc.dist_row[i] = dist;
                (d.sign(i) < 0 ? neg : pos).push_back(dist);
            }
            sc.grq = grq(neg, pos);
        }
    });
    return out;
}

bool higher_priority(const ScoredCandidate& a, const ScoredCandidate& b) noexcept {
    if (a.grq != b.grq) return a.grq > b.grq;
    if (a.candidate.source_index != b.candidate.source_index) {
        return a.candidate.source_index < b.candidate.source_index;
    }
    return a.candidate.offset < b.candidate.offset;
}

std::vector<std::size_t> select_ranked(std::span<const ScoredCandidate* const> ranked,
                                       std::size_t count, bool delete_overlap,
                                       OverlapScope scope) {
    if (count == 0) fail(ErrorCode::InvalidArgument, "shapelet number must be at least 1");
    std::vector<std::size_t> kept;
    if (!delete_overlap) {
        kept.resize(std::min(count, ranked.size()));
        for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
        return kept;
    }
    // Positions are marked per scope; the pairwise overlap test reduces to a
    // lookup because kept intervals are disjoint by construction.
    std::map<std::size_t, std::vector<bool>> occupied;
    for (std::size_t r = 0; r < ranked.size() && kept.size() < count; ++r) {
        const Shapelet& c = ranked[r]->candidate;
        auto& used = occupied[scope == OverlapScope::AnySeries ? 0 : c.source_index];
        const std::size_t end = c.offset + c.length();
        if (used.size() < end) used.resize(end, false);
        const auto first = used.begin() + static_cast<std::ptrdiff_t>(c.offset);
        const auto last = used.begin() + static_cast<std::ptrdiff_t>(end);
        if (std::find(first, last, true) != last) continue;
        std::fill(first, last, true);
        kept.push_back(r);
    }
    return kept;
}

ShapeletSet rank_and_select(std::vector<ScoredCandidate> scored, std::size_t count,
                            bool delete_overlap, OverlapScope scope, const RelaxConfig& cfg) {
    if (count == 0) fail(ErrorCode::InvalidArgument, "shapelet number must be at least 1");
    ShapeletSet out;
    out.config = cfg;
    out.overlap_deleted = delete_overlap;
    out.scope = scope;
    if (scored.empty()) return out;
    out.length = scored.front().candidate.length();

    std::sort(scored.begin(), scored.end(), higher_priority);
    std::vector<const ScoredCandidate*> ranked;
    ranked.reserve(scored.size());
    for (const auto& sc : scored) ranked.push_back(&sc);
    const auto kept = select_ranked(ranked, count, delete_overlap, scope);
    out.members.reserve(kept.size());
    for (std::size_t r : kept) out.members.push_back(std::move(scored[r]));
    return out;
}

}  // namespace sist
