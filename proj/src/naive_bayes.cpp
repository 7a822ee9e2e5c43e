#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tas/classifiers.hpp"
#include "tas/error.hpp"

namespace tas {

ClassLabel argmax_label(std::span<const double> scores) {
    if (scores.empty()) throw InputDomainError("argmax of an empty score vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return ClassLabel{best};
}

NbModel nb_train(const LabeledDataset& dataset, const NbParams& params) {
    if (dataset.size() == 0) throw InputDomainError("cannot train naive Bayes on an empty dataset");
    if (!(params.variance_floor > 0.0)) throw InputDomainError("variance floor must be positive");

    const std::size_t classes = dataset.class_count();
    const std::size_t dim = dataset.features.dim();
    NbModel model;
    model.op = dataset.op;
    model.dim = dim;
    model.class_count = classes;
    model.use_priors = params.use_priors;
    model.variance_floor = params.variance_floor;
    model.counts.assign(classes, 0);
    model.mean.assign(classes * dim, 0.0);
    model.variance.assign(classes * dim, 0.0);

    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const auto l = dataset.labels[r].value;
        if (l >= classes) throw InputDomainError("training label outside the combination set");
        ++model.counts[l];
        const auto row = dataset.features.row(r);
        for (std::size_t k = 0; k < dim; ++k) model.mean[l * dim + k] += row[k];
    }
    for (std::size_t l = 0; l < classes; ++l) {
        if (model.counts[l] == 0) continue;
        for (std::size_t k = 0; k < dim; ++k) model.mean[l * dim + k] /= static_cast<double>(model.counts[l]);
    }
    // Two-pass variance about the class means.
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const auto l = dataset.labels[r].value;
        const auto row = dataset.features.row(r);
        for (std::size_t k = 0; k < dim; ++k) {
            const double d = row[k] - model.mean[l * dim + k];
            model.variance[l * dim + k] += d * d;
        }
    }
    for (std::size_t l = 0; l < classes; ++l) {
        for (std::size_t k = 0; k < dim; ++k) {
            auto& v = model.variance[l * dim + k];
            if (model.counts[l] > 0) v /= static_cast<double>(model.counts[l]);
            v = std::max(v, params.variance_floor);
        }
    }
    return model;
}

std::vector<double> nb_log_scores(const NbModel& model, std::span<const double> t) {
    if (!model.trained()) throw ConfigurationError("naive Bayes model is not trained");
    if (t.size() != model.dim) {
        throw InputDomainError("query has " + std::to_string(t.size()) + " features, model expects " +
                               std::to_string(model.dim));
    }
    std::size_t total = 0;
    for (const auto c : model.counts) total += c;

    std::vector<double> scores(model.class_count, -std::numeric_limits<double>::infinity());
    for (std::size_t l = 0; l < model.class_count; ++l) {
        if (model.counts[l] == 0) continue;
        double s = 0.0;
        for (std::size_t k = 0; k < model.dim; ++k) {
            const double var = model.variance[l * model.dim + k];
            const double d = t[k] - model.mean[l * model.dim + k];
            s -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
        }
        if (model.use_priors) s += std::log(static_cast<double>(model.counts[l]) / static_cast<double>(total));
        scores[l] = s;
    }
    return scores;
}

ClassLabel nb_predict(const NbModel& model, std::span<const double> t) {
    return argmax_label(nb_log_scores(model, t));
}

}  // namespace tas
