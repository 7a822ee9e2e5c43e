#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tas/classifiers.hpp"
#include "tas/features.hpp"
#include "tas/selector.hpp"
#include "tas/selector_backend.hpp"

namespace tas {

enum class Scheme { Conventional, Svm, Nb, Knn };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

struct ClassifierSettings {
    SvmParams svm;
    NbParams nb;
    std::size_t knn_k = 1;
};

/// Channel streams: training draws come from stream kTrainStream and test draws from
/// kTestStream of `seed`. Every operating point reuses the same draws.
inline constexpr std::uint64_t kTrainStream = 0;
inline constexpr std::uint64_t kTestStream = 1;

struct SweepSpec {
    std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30};
    std::vector<AmpMode> amp_modes{AmpMode::Constrained, AmpMode::Unit};
    std::vector<std::size_t> n_t_values{1, 2};
    std::vector<Scheme> schemes{Scheme::Conventional, Scheme::Svm, Scheme::Nb, Scheme::Knn};
    std::size_t n_s = 6;
    std::size_t m_train = 10000;
    std::size_t m_test = 10000;
    double r_t = 2.0;
    std::uint64_t seed = 1;
    ClassifierSettings classifiers;
    std::size_t workers = 1;

    /// Throws InputDomainError on empty grids, zero counts or negative r_t.
    void validate() const;
};

/// Train/test channels and everything about them that does not depend on the scheme.
struct PointContext {
    OperatingPoint op;
    CombinationSet combos;
    LabeledDataset train;
    std::shared_ptr<const std::vector<ChannelSample>> test_channels;
    FeatureMatrix test_features;
    std::vector<double> test_rates;  ///< m_test x |L| unclamped rates
    std::vector<ClassLabel> test_oracle;

    double unclamped_rate(std::size_t sample, ClassLabel label) const {
        return test_rates[sample * combos.size() + label.value];
    }
};

PointContext make_point_context(const OperatingPoint& op, const std::vector<ChannelSample>& train,
                                std::shared_ptr<const std::vector<ChannelSample>> test,
                                std::uint64_t seed);

struct PointMetrics {
    Scheme scheme = Scheme::Conventional;
    OperatingPoint op;
    double mean_rate = 0.0;            ///< over clamped rates
    double mean_rate_unclamped = 0.0;
    double rate_std_error = 0.0;       ///< standard error of mean_rate
    double sop = 0.0;
    double accuracy = 0.0;             ///< vs oracle labels
    double r_t = 0.0;
    std::size_t m_train = 0;
    std::size_t m_test = 0;
    std::uint64_t seed = 0;
    double train_seconds = 0.0;
    std::vector<double> rates;  ///< per test sample, clamped
    std::vector<ClassLabel> predicted;
    std::vector<ClassLabel> oracle;
};

Selector train_selector(Scheme scheme, const LabeledDataset& train, const ClassifierSettings& settings);

/// Scores a trained selector on the context's test set.
PointMetrics evaluate_selector(const PointContext& ctx, const Selector& selector, Scheme scheme,
                               double r_t);

/// Trains `scheme` at (snr_db, amp_mode, n_t) on fresh training draws and scores it on the test
/// draws.
PointMetrics run_point(const SweepSpec& spec, const OperatingPoint& op, Scheme scheme);

struct SweepResult {
    SweepSpec spec;
    std::vector<PointMetrics> points;  ///< amp_mode-major, then n_t, snr, scheme

    const PointMetrics& find(Scheme scheme, AmpMode mode, std::size_t n_t, double snr_db) const;
};

/// Runs every (amp_mode, n_t, snr) x scheme point. Points are spread over `spec.workers`
/// threads; results are independent of the worker count.
SweepResult run_sweep(const SweepSpec& spec);

/// Count of rates strictly below r_t divided by the number of rates.
double empirical_sop(std::span<const double> rates, double r_t);

struct ConfusionMatrix {
    std::size_t classes = 0;
    std::vector<std::uint64_t> counts;  ///< row = oracle label, column = predicted
    std::vector<double> rates;          ///< row-normalised, zero rows stay zero

    std::uint64_t count(std::size_t row, std::size_t col) const { return counts[row * classes + col]; }
    double rate(std::size_t row, std::size_t col) const { return rates[row * classes + col]; }

    /// Sum over rows of the off-diagonal row rates (the per-class misclassification rates).
    double off_diagonal_mass() const;
    /// Off-diagonal share of all counted samples.
    double error_rate() const;
};

ConfusionMatrix confusion_from_labels(std::size_t classes, std::span<const ClassLabel> oracle,
                                      std::span<const ClassLabel> predicted);
ConfusionMatrix confusion(const SweepSpec& spec, const OperatingPoint& op, Scheme scheme);

struct TimingRow {
    Scheme scheme;
    double train_seconds = 0.0;
    double median_query_ns = 0.0;
    std::size_t queries = 0;
};

/// Median per-query selection time over `queries` test draws (at least 10^4 are recommended),
/// training time reported separately.
std::vector<TimingRow> bench_selection(const SweepSpec& spec, const OperatingPoint& op,
                                       std::size_t queries = 10000);

// CSV exports -------------------------------------------------------------------------------

void write_sweep_csv(std::ostream& out, const SweepResult& result,
                     const std::vector<std::string>& comments = {});
void write_confusion_csv(std::ostream& out, const ConfusionMatrix& matrix,
                         const std::vector<std::string>& comments = {});
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows,
                      const std::vector<std::string>& comments = {});

}  // namespace tas
