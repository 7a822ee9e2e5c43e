#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tas/channel.hpp"
#include "tas/selector.hpp"

namespace tas {

/// d = [|h_1|, ..., |h_{N_S}|, |g|], length N_S + 1.
std::vector<double> build_feature(const ChannelSample& sample);

/// t_i = (d_i - mean(d)) / (max(d) - min(d)), statistics taken over this vector alone.
/// A vector with zero range maps to all zeros.
std::vector<double> normalize(std::span<const double> d);

struct FeatureVector {
    std::vector<double> raw;
    std::vector<double> normalized;
};

FeatureVector make_feature_vector(const ChannelSample& sample);

/// Row-major rows x dim matrix of doubles.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * dim) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

    /// Appends a row; the first row fixes dim. Throws InputDomainError on length mismatch.
    void push_back(std::span<const double> values);

    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const FeatureMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// The (SNR, amplification mode, N_T) tuple under which labels and models are valid.
struct OperatingPoint {
    std::size_t n_s = 6;
    std::size_t n_t = 1;
    double snr_db = 0.0;
    AmpMode amp_mode = AmpMode::Constrained;

    SystemConfig config() const { return make_config(n_s, n_t, snr_db, amp_mode); }
    std::size_t feature_dim() const noexcept { return n_s + 1; }
    std::size_t class_count() const { return binomial(n_s, n_t); }
    std::string to_string() const;

    bool operator==(const OperatingPoint&) const = default;
};

/// Throws ConfigurationError naming the first differing field.
void require_same_operating_point(const OperatingPoint& expected, const OperatingPoint& actual,
                                  std::string_view what);

/// True when `config` carries exactly the powers/counts/mode of `op`.
bool matches(const OperatingPoint& op, const SystemConfig& config);

struct LabeledDataset {
    OperatingPoint op;
    std::uint64_t seed = 0;  ///< provenance only
    FeatureMatrix features;  ///< normalized vectors t
    std::vector<ClassLabel> labels;

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t class_count() const { return op.class_count(); }
};

LabeledDataset build_labeled_dataset(std::span<const ChannelSample> channels, const OperatingPoint& op,
                                     const CombinationSet& combos, std::uint64_t seed = 0);

/// Labeled CSV: provenance comments, an `# operating_point ...` line, then `t_1,...,t_N,label`
/// with 1-based labels.
void write_labeled_csv(std::ostream& out, const LabeledDataset& dataset,
                       const std::vector<std::string>& comments = {});
LabeledDataset read_labeled_csv(std::istream& in);

}  // namespace tas
