#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tas/features.hpp"
#include "tas/selector.hpp"

namespace tas {

// ---------------------------------------------------------------------------------------------
// Kernel SVM, one-vs-rest

enum class RbfForm {
    Squared,    ///< exp(-||a-b||^2 / (2 sigma^2))
    Unsquared,  ///< exp(-||a-b|| / (2 sigma^2))
};

std::string_view to_string(RbfForm form);
RbfForm parse_rbf_form(std::string_view text);

struct SvmParams {
    double c = 10.0;
    std::optional<double> sigma;  ///< nullopt: median pairwise distance of a training subsample
    RbfForm form = RbfForm::Squared;
    double tolerance = 1e-3;       ///< stop once the largest projected-gradient violation is below
    std::size_t max_epochs = 10000;  ///< one epoch = one coordinate update per training vector
    std::size_t sigma_subsample = 1000;
    std::uint64_t sigma_seed = 0x5eed;
    std::size_t cache_mb = 512;  ///< kernel row cache shared by the one-vs-rest subproblems
};

struct SvmModel {
    OperatingPoint op;
    std::size_t dim = 0;
    std::size_t class_count = 0;  ///< 0 means untrained
    double c = 0.0;
    double sigma = 0.0;
    RbfForm form = RbfForm::Squared;
    std::vector<std::uint8_t> present;  ///< classes seen in training; others are never predicted
    FeatureMatrix support;              ///< union of support vectors over all classes
    std::vector<double> coef;           ///< class_count x support.rows(), alpha * y

    bool trained() const noexcept { return class_count > 0; }
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double sigma, RbfForm form);

/// Median Euclidean distance over all pairs of a fixed-seed subsample of `features`.
double median_pairwise_distance(const FeatureMatrix& features, std::size_t max_rows,
                                std::uint64_t seed);

/// LRU cache of Gram matrix rows K(x_i, .) in single precision.
class KernelRowCache {
public:
    KernelRowCache(const FeatureMatrix& x, double sigma, RbfForm form, std::size_t budget_bytes);
    ~KernelRowCache();
    KernelRowCache(const KernelRowCache&) = delete;
    KernelRowCache& operator=(const KernelRowCache&) = delete;

    /// Valid until the next call.
    std::span<const float> row(std::size_t i);

    std::size_t hits() const noexcept { return hits_; }
    std::size_t misses() const noexcept { return misses_; }

private:
    struct Impl;
    const FeatureMatrix& x_;
    double inv_two_sigma_sq_;
    RbfForm form_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
    Impl* impl_;
};

struct BinarySvmStats {
    std::size_t iterations = 0;
    double max_violation = 0.0;
    std::size_t support_vectors = 0;
};

/// Box-constrained dual of the bias-free hinge objective
///   C * sum_m max(1 - y_m f(x_m), 0) + ||w||^2 / 2,   f(x) = sum_m alpha_m y_m K(x_m, x)
/// solved by greedy coordinate descent. `labels` are +1/-1. Returns alpha.
std::vector<double> solve_binary_svm(KernelRowCache& kernel, std::span<const int> labels, double c,
                                     double tolerance, std::size_t max_iterations,
                                     BinarySvmStats* stats = nullptr);

SvmModel svm_train(const LabeledDataset& dataset, const SvmParams& params = {});
std::vector<double> svm_decision_values(const SvmModel& model, std::span<const double> t);
ClassLabel svm_predict(const SvmModel& model, std::span<const double> t);

// ---------------------------------------------------------------------------------------------
// Gaussian naive Bayes

struct NbParams {
    bool use_priors = false;
    double variance_floor = 1e-9;
};

struct NbModel {
    OperatingPoint op;
    std::size_t dim = 0;
    std::size_t class_count = 0;
    bool use_priors = false;
    double variance_floor = 1e-9;
    std::vector<std::size_t> counts;  ///< training samples per class
    std::vector<double> mean;         ///< class_count x dim
    std::vector<double> variance;     ///< class_count x dim, biased, floored

    bool trained() const noexcept { return class_count > 0; }
};

NbModel nb_train(const LabeledDataset& dataset, const NbParams& params = {});

/// Sum over features of log N(t_n; mean, variance), plus log prior when enabled.
/// Classes never seen in training score -infinity.
std::vector<double> nb_log_scores(const NbModel& model, std::span<const double> t);
ClassLabel nb_predict(const NbModel& model, std::span<const double> t);

/// argmax with ties resolved to the lowest index.
ClassLabel argmax_label(std::span<const double> scores);

// ---------------------------------------------------------------------------------------------
// k nearest neighbours

struct KnnModel {
    OperatingPoint op;
    std::size_t k = 1;
    std::size_t class_count = 0;
    FeatureMatrix points;
    std::vector<ClassLabel> labels;

    bool trained() const noexcept { return class_count > 0; }
};

KnnModel knn_train(const LabeledDataset& dataset, std::size_t k = 1);

/// Majority vote among the k closest points (Euclidean); equal distances favour the lower
/// training index, vote ties the lower label.
ClassLabel knn_predict(const KnnModel& model, std::span<const double> t);

// ---------------------------------------------------------------------------------------------
// Model documents

using ClassifierModel = std::variant<SvmModel, NbModel, KnnModel>;

inline constexpr int kModelFormatVersion = 1;

std::string_view model_kind(const ClassifierModel& model);
const OperatingPoint& model_operating_point(const ClassifierModel& model);
ClassLabel predict(const ClassifierModel& model, std::span<const double> t);

/// Versioned JSON document with a `kind` tag. `provenance` lines are stored verbatim and
/// ignored by load_model.
std::string save_model(const ClassifierModel& model, const std::vector<std::string>& provenance = {});

/// Throws ParseError (with byte offset) on malformed input, UnsupportedVersionError on a
/// version other than kModelFormatVersion.
ClassifierModel load_model(std::string_view document);

}  // namespace tas
