#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "sist/dataset.hpp"
#include "sist/distance.hpp"
#include "sist/selection.hpp"

namespace sist {

enum class Metric { Fixed, RelaxedFixed, SlidingMin };

/// Row-major n x N matrix of shapelet distances; column p belongs to
/// refs[p].
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;
    std::vector<Placement> refs;

    double at(std::size_t i, std::size_t p) const { return data[i * cols + p]; }
    double& at(std::size_t i, std::size_t p) { return data[i * cols + p]; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data).subspan(i * cols, cols);
    }

    bool operator==(const FeatureMatrix&) const = default;
};

/// Distances from every series to every shapelet. Fixed and RelaxedFixed
/// need each shapelet to fit at its offset (MetricPlacementMismatch
/// otherwise); SlidingMin ignores placements. `relax` is only read for
/// RelaxedFixed.
FeatureMatrix shapelet_transform(std::span<const Series> series, std::span<const Shapelet> basis,
                                 Metric metric, const RelaxConfig& relax = {},
                                 unsigned threads = 1);

FeatureMatrix shapelet_transform(const ValidatedDataset& d, const ShapeletSet& basis,
                                 Metric metric, unsigned threads = 1);

/// Training-set transform assembled from the distance rows cached during
/// scoring, with no distance evaluations. The rows were computed with
/// `basis.config`; a caller asking for any other relaxation gets
/// InvalidArgument instead of stale values.
FeatureMatrix cached_transform(const ShapeletSet& basis, const RelaxConfig& cfg);

std::vector<Shapelet> basis_shapelets(const ShapeletSet& basis);

/// CSV with header `series_id,label,f1..fN`.
void write_feature_csv(std::ostream& out, const FeatureMatrix& f,
                       std::span<const std::string> labels);

struct CutSet {
    Shapelet parent;
    std::vector<std::size_t> cut_points;
    /// Contiguous pieces; piece offsets are absolute positions in the source
    /// series (parent offset plus the preceding cut).
    std::vector<Shapelet> pieces;
};

/// Cuts `s` before each listed position (0 < c < len, strictly increasing).
/// An empty list yields the singleton {s}.
CutSet cut_set(const Shapelet& s, std::span<const std::size_t> cut_points);

/// L2 norm of the transform of a single series through `shapelets`.
double transformed_norm(std::span<const double> x, std::span<const Shapelet> shapelets,
                        Metric metric, const RelaxConfig& relax = {});

/// (norm through {s}, norm through cut_set(s, cuts)) under the chosen metric.
/// Equal under Fixed for every valid input.
std::pair<double, double> check_norm_invariance(std::span<const double> x, const Shapelet& s,
                                                std::span<const std::size_t> cuts,
                                                Metric metric = Metric::Fixed);

/// For each series: (norm through C, norm through F), where F replaces each
/// member of C listed in `replaced` by its cut set. `cuts[j]` belongs to
/// `replaced[j]`, which indexes into `basis`.
std::vector<std::pair<double, double>> check_basis_substitution(
    std::span<const Series> series, std::span<const Shapelet> basis,
    std::span<const std::size_t> replaced, std::span<const std::vector<std::size_t>> cuts,
    Metric metric = Metric::Fixed);

}  // namespace sist
