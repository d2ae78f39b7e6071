#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sist {

using Series = std::vector<double>;

/// Labeled time series as read from disk. Labels are kept as the raw tags
/// found in the file; no binary or isometric check happens here.
struct LabeledDataset {
    std::vector<Series> series;
    std::vector<std::string> labels;

    std::size_t size() const noexcept { return series.size(); }
    /// Length of the first series (0 for an empty set).
    std::size_t length() const noexcept { return series.empty() ? 0 : series.front().size(); }

    bool operator==(const LabeledDataset&) const = default;
};

/// Two-tag mapping onto {-1, +1}; the lexicographically smaller tag is -1.
struct LabelMap {
    std::string negative;
    std::string positive;

    /// Throws UnknownClass for a tag outside the map.
    int to_sign(std::string_view tag) const;
    const std::string& to_tag(int sign) const noexcept { return sign < 0 ? negative : positive; }

    bool operator==(const LabelMap&) const = default;
};

/// Binary, isometric, finite dataset with canonical signs. Only
/// validate_binary_isometric (and subset) can produce one.
class ValidatedDataset {
public:
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t length() const noexcept { return data_.length(); }
    std::span<const double> series(std::size_t i) const { return data_.series[i]; }
    int sign(std::size_t i) const { return signs_[i]; }
    std::span<const int> signs() const noexcept { return signs_; }
    const LabelMap& label_map() const noexcept { return map_; }
    const LabeledDataset& raw() const noexcept { return data_; }
    std::size_t count(int sign) const noexcept;

    /// Rows in the given order; the label map is inherited, so a subset may
    /// hold a single class.
    ValidatedDataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const ValidatedDataset&) const = default;

private:
    friend ValidatedDataset validate_binary_isometric(const LabeledDataset& d);
    friend ValidatedDataset with_label_map(const LabeledDataset& d, const LabelMap& map);

    LabeledDataset data_;
    LabelMap map_;
    std::vector<int> signs_;
};

/// Parses UCR-style text: one series per non-empty line, label first, values
/// separated by tabs, commas or whitespace.
LabeledDataset parse_ucr(std::string_view text);

/// Tab-separated form accepted by parse_ucr; values use shortest round-trip
/// formatting so parse(serialize(d)) == d.
std::string serialize_ucr(const LabeledDataset& d);

/// Reads and parses a file. Missing files raise IoError("dataset not found").
LabeledDataset load_ucr_file(const std::filesystem::path& path);

ValidatedDataset validate_binary_isometric(const LabeledDataset& d);

/// Validates finiteness and isometry against an existing label map instead of
/// deriving one. Used for test splits, which may hold a single class.
ValidatedDataset with_label_map(const LabeledDataset& d, const LabelMap& map);

/// Per-series z-normalisation; constant series become all zeros.
LabeledDataset z_normalized(const LabeledDataset& d);

struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<int> assignments;  // fold index per series

    std::vector<std::size_t> train_indices(int fold) const;
    std::vector<std::size_t> test_indices(int fold) const;
};

/// Stratified assignment: each class is shuffled with a seeded generator and
/// dealt round-robin, the deal position carrying over between classes.
FoldPlan stratified_kfold(const ValidatedDataset& d, int k, std::uint64_t seed);

/// Fisher-Yates over a raw mt19937_64 stream. Unlike std::shuffle the result
/// does not depend on the standard library's distribution implementation.
void deterministic_shuffle(std::span<std::size_t> items, std::uint64_t seed);

}  // namespace sist
