#include "sist/transform.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "parallel.hpp"
#include "sist/error.hpp"

namespace sist {
namespace {

double distance(const Shapelet& s, std::span<const double> x, Metric metric,
                const RelaxConfig& relax) {
    switch (metric) {
        case Metric::Fixed: return fixed_distance(s.values, s.placement(), x);
        case Metric::RelaxedFixed: return relaxed_fixed_distance(s.values, s.placement(), x, relax);
        case Metric::SlidingMin: return sliding_min_distance(s.values, x);
    }
    fail(ErrorCode::Internal, "unknown metric");
}

}  // namespace

FeatureMatrix shapelet_transform(std::span<const Series> series, std::span<const Shapelet> basis,
                                 Metric metric, const RelaxConfig& relax, unsigned threads) {
    if (basis.empty()) fail(ErrorCode::InvalidArgument, "empty shapelet basis");
    FeatureMatrix f;
    f.rows = series.size();
    f.cols = basis.size();
    f.data.assign(f.rows * f.cols, 0.0);
    f.refs.reserve(basis.size());
    for (const auto& s : basis) f.refs.push_back(s.placement());

    if (metric != Metric::SlidingMin) {
        for (const auto& x : series) {
            for (const auto& s : basis) {
                if (s.offset + s.length() > x.size()) {
                    fail(ErrorCode::MetricPlacementMismatch,
                         "shapelet at offset " + std::to_string(s.offset) + " of length " +
                             std::to_string(s.length()) + " does not fit a series of length " +
                             std::to_string(x.size()));
                }
            }
        }
    }

    detail::parallel_blocks(f.rows, detail::resolve_threads(threads),
                            [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t p = 0; p < f.cols; ++p) {
                f.at(i, p) = distance(basis[p], series[i], metric, relax);
            }
        }
    });
    return f;
}

std::vector<Shapelet> basis_shapelets(const ShapeletSet& basis) {
    std::vector<Shapelet> out;
    out.reserve(basis.size());
    for (const auto& m : basis.members) out.push_back(m.candidate);
    return out;
}

FeatureMatrix shapelet_transform(const ValidatedDataset& d, const ShapeletSet& basis,
                                 Metric metric, unsigned threads) {
    const auto shapelets = basis_shapelets(basis);
    return shapelet_transform(d.raw().series, shapelets, metric, basis.config, threads);
}

FeatureMatrix cached_transform(const ShapeletSet& basis, const RelaxConfig& cfg) {
    if (basis.empty()) fail(ErrorCode::InvalidArgument, "empty shapelet basis");
    if (!(cfg == basis.config)) {
        fail(ErrorCode::InvalidArgument, "cached rows were computed with another relaxation");
    }
    FeatureMatrix f;
    f.rows = basis.members.front().dist_row.size();
    f.cols = basis.size();
    f.data.assign(f.rows * f.cols, 0.0);
    for (std::size_t p = 0; p < f.cols; ++p) {
        const auto& member = basis.members[p];
        if (member.dist_row.size() != f.rows) {
            fail(ErrorCode::InvalidArgument, "shapelet " + std::to_string(p) +
                                                 " has no cached distance row");
        }
        f.refs.push_back(member.candidate.placement());
        for (std::size_t i = 0; i < f.rows; ++i) f.at(i, p) = member.dist_row[i];
    }
    return f;
}

void write_feature_csv(std::ostream& out, const FeatureMatrix& f,
                       std::span<const std::string> labels) {
    if (labels.size() != f.rows) fail(ErrorCode::LengthMismatch, "one label per row required");
    out << "series_id,label";
    for (std::size_t p = 0; p < f.cols; ++p) out << ",f" << (p + 1);
    out << '\n';
    const auto old_precision = out.precision(17);
    for (std::size_t i = 0; i < f.rows; ++i) {
        out << i << ',' << labels[i];
        for (std::size_t p = 0; p < f.cols; ++p) out << ',' << f.at(i, p);
        out << '\n';
    }
    out.precision(old_precision);
}

CutSet cut_set(const Shapelet& s, std::span<const std::size_t> cut_points) {
    std::size_t prev = 0;
    for (std::size_t c : cut_points) {
        if (c <= prev || c >= s.length()) {
            fail(ErrorCode::InvalidCutPoints, "cut points must be strictly increasing in (0, " +
                                                  std::to_string(s.length()) + ")");
        }
        prev = c;
    }
    CutSet out;
    out.parent = s;
    out.cut_points.assign(cut_points.begin(), cut_points.end());
    std::size_t begin = 0;
    auto emit = [&](std::size_t end) {
        Shapelet piece;
        piece.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(begin),
                            s.values.begin() + static_cast<std::ptrdiff_t>(end));
        piece.source_index = s.source_index;
        piece.offset = s.offset + begin;
        piece.class_sign = s.class_sign;
        out.pieces.push_back(std::move(piece));
        begin = end;
    };
    for (std::size_t c : cut_points) emit(c);
    emit(s.length());
    return out;
}

double transformed_norm(std::span<const double> x, std::span<const Shapelet> shapelets,
                        Metric metric, const RelaxConfig& relax) {
    double sum = 0.0;
    for (const auto& s : shapelets) {
        const double d = distance(s, x, metric, relax);
        sum += d * d;
    }
    return std::sqrt(sum);
}

std::pair<double, double> check_norm_invariance(std::span<const double> x, const Shapelet& s,
                                                std::span<const std::size_t> cuts,
                                                Metric metric) {
    const CutSet pieces = cut_set(s, cuts);
    return {transformed_norm(x, std::span(&s, 1), metric),
            transformed_norm(x, pieces.pieces, metric)};
}

std::vector<std::pair<double, double>> check_basis_substitution(
    std::span<const Series> series, std::span<const Shapelet> basis,
    std::span<const std::size_t> replaced, std::span<const std::vector<std::size_t>> cuts,
    Metric metric) {
    if (replaced.size() != cuts.size()) {
        fail(ErrorCode::InvalidArgument, "one cut list per replaced shapelet required");
    }
    std::vector<bool> is_replaced(basis.size(), false);
    for (std::size_t r : replaced) {
        if (r >= basis.size()) fail(ErrorCode::InvalidArgument, "replaced index out of range");
        is_replaced[r] = true;
    }
    std::vector<Shapelet> substituted;
    for (std::size_t p = 0; p < basis.size(); ++p) {
        if (!is_replaced[p]) substituted.push_back(basis[p]);
    }
    for (std::size_t j = 0; j < replaced.size(); ++j) {
        auto pieces = cut_set(basis[replaced[j]], cuts[j]).pieces;
        substituted.insert(substituted.end(), pieces.begin(), pieces.end());
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(series.size());
    for (const auto& x : series) {
        out.emplace_back(transformed_norm(x, basis, metric), transformed_norm(x, substituted, metric));
    }
    return out;
}

}  // namespace sist
