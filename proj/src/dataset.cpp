#include "sist/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "sist/error.hpp"

namespace sist {
namespace {

bool is_delimiter(char c) {
    return c == '\t' || c == ',' || c == ' ' || c == '\r' || c == '\v' || c == '\f';
}

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_delimiter(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !is_delimiter(line[i])) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

double parse_value(std::string_view token, std::size_t line_no) {
    double value = 0.0;
    const char* first = token.data();
    if (!token.empty() && token.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        fail(ErrorCode::NonNumericValue,
             "line " + std::to_string(line_no) + ": '" + std::string(token) + "'");
    }
    return value;
}

void check_shape(const LabeledDataset& d) {
    if (d.size() == 0) fail(ErrorCode::EmptyInput, "dataset has no series");
    if (d.labels.size() != d.series.size()) {
        fail(ErrorCode::LengthMismatch, "labels and series differ in count");
    }
    const std::size_t m = d.length();
    if (m == 0) fail(ErrorCode::EmptyInput, "series have no values");
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.series[i].size() != m) {
            fail(ErrorCode::RaggedLengths, "series " + std::to_string(i) + " has length " +
                                               std::to_string(d.series[i].size()) +
                                               ", expected " + std::to_string(m));
        }
        for (double v : d.series[i]) {
            if (!std::isfinite(v)) {
                fail(ErrorCode::NonFiniteValue, "series " + std::to_string(i));
            }
        }
    }
}

}  // namespace

int LabelMap::to_sign(std::string_view tag) const {
    if (tag == negative) return -1;
    if (tag == positive) return +1;
    fail(ErrorCode::UnknownClass, "label '" + std::string(tag) + "' is not one of {" + negative +
                                      ", " + positive + "}");
}

std::size_t ValidatedDataset::count(int sign) const noexcept {
    return static_cast<std::size_t>(std::count(signs_.begin(), signs_.end(), sign));
}

ValidatedDataset ValidatedDataset::subset(std::span<const std::size_t> indices) const {
    ValidatedDataset out;
    out.map_ = map_;
    out.data_.series.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= size()) fail(ErrorCode::InvalidArgument, "subset index out of range");
        out.data_.series.push_back(data_.series[i]);
        out.data_.labels.push_back(data_.labels[i]);
        out.signs_.push_back(signs_[i]);
    }
    return out;
}

LabeledDataset parse_ucr(std::string_view text) {
    LabeledDataset d;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;

        auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        Series values;
        values.reserve(tokens.size() - 1);
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            values.push_back(parse_value(tokens[t], line_no));
        }
        if (!d.series.empty() && values.size() != d.series.front().size()) {
            fail(ErrorCode::RaggedLengths, "line " + std::to_string(line_no) + " has " +
                                               std::to_string(values.size()) + " values, expected " +
                                               std::to_string(d.series.front().size()));
        }
        d.labels.emplace_back(tokens.front());
        d.series.push_back(std::move(values));
    }
    if (d.series.empty()) fail(ErrorCode::EmptyInput, "no data rows");
    if (d.length() == 0) fail(ErrorCode::EmptyInput, "rows carry a label but no values");
    return d;
}

std::string serialize_ucr(const LabeledDataset& d) {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < d.size(); ++i) {
        out += d.labels[i];
        for (double v : d.series[i]) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out += '\t';
            out.append(buf, ptr);
        }
        out += '\n';
    }
    return out;
}

LabeledDataset load_ucr_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "dataset not found: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_ucr(ss.str());
}

ValidatedDataset validate_binary_isometric(const LabeledDataset& d) {
    check_shape(d);
    std::set<std::string> classes(d.labels.begin(), d.labels.end());
    if (classes.size() != 2) {
        fail(ErrorCode::NotBinary, "expected exactly 2 classes, found " +
                                       std::to_string(classes.size()));
    }
    LabelMap map{*classes.begin(), *classes.rbegin()};
    return with_label_map(d, map);
}

ValidatedDataset with_label_map(const LabeledDataset& d, const LabelMap& map) {
    check_shape(d);
    ValidatedDataset out;
    out.data_ = d;
    out.map_ = map;
    out.signs_.reserve(d.size());
    for (const auto& tag : d.labels) out.signs_.push_back(map.to_sign(tag));
    return out;
}

LabeledDataset z_normalized(const LabeledDataset& d) {
    LabeledDataset out = d;
    for (auto& s : out.series) {
        if (s.empty()) continue;
        double mean = 0.0;
        for (double v : s) mean += v;
        mean /= static_cast<double>(s.size());
        double var = 0.0;
        for (double v : s) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / static_cast<double>(s.size()));
        for (double& v : s) v = sd > 0.0 ? (v - mean) / sd : 0.0;
    }
    return out;
}

void deterministic_shuffle(std::span<std::size_t> items, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        // Rejection sampling keeps the draw unbiased.
        const std::uint64_t bound = i;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do {
            r = gen();
        } while (r >= limit);
        std::swap(items[i - 1], items[static_cast<std::size_t>(r % bound)]);
    }
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) out.push_back(i);
    }
    return out;
}

FoldPlan stratified_kfold(const ValidatedDataset& d, int k, std::uint64_t seed) {
    if (k < 2) fail(ErrorCode::InvalidArgument, "fold count must be at least 2");
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(d.size(), -1);

    std::size_t deal = 0;
    for (int sign : {-1, +1}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (d.sign(i) == sign) members.push_back(i);
        }
        if (members.size() < static_cast<std::size_t>(k)) {
            fail(ErrorCode::TooFewPerClass, "class '" + d.label_map().to_tag(sign) + "' has " +
                                                std::to_string(members.size()) +
                                                " members, need at least " + std::to_string(k));
        }
        deterministic_shuffle(members, seed ^ (sign < 0 ? 0x9e3779b97f4a7c15ULL : 0ULL));
        for (std::size_t idx : members) {
            plan.assignments[idx] = static_cast<int>(deal % static_cast<std::size_t>(k));
            ++deal;
        }
    }
    return plan;
}

}  // namespace sist
