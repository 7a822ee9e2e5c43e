#include <algorithm>
#include <limits>
#include <utility>

#include "tas/classifiers.hpp"
#include "tas/error.hpp"

namespace tas {

KnnModel knn_train(const LabeledDataset& dataset, std::size_t k) {
    if (dataset.size() == 0) throw InputDomainError("cannot build k-NN from an empty dataset");
    if (k < 1 || k > dataset.size()) {
        throw InputDomainError("k must satisfy 1 <= k <= training size (k=" + std::to_string(k) + ", size=" +
                               std::to_string(dataset.size()) + ")");
    }
    KnnModel model;
    model.op = dataset.op;
    model.k = k;
    model.class_count = dataset.class_count();
    model.points = dataset.features;
    model.labels = dataset.labels;
    return model;
}

ClassLabel knn_predict(const KnnModel& model, std::span<const double> t) {
    if (!model.trained()) throw ConfigurationError("k-NN model is not trained");
    const std::size_t dim = model.points.dim();
    if (t.size() != dim) {
        throw InputDomainError("query has " + std::to_string(t.size()) + " features, model expects " +
                               std::to_string(dim));
    }
    const std::size_t n = model.points.rows();
    const double* base = model.points.data().data();
    const auto sqdist = [&](std::size_t m) {
        const double* p = base + m * dim;
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = p[j] - t[j];
            s += d * d;
        }
        return s;
    };

    if (model.k == 1) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < n; ++m) {
            const double d = sqdist(m);
            if (d < best_d) {
                best_d = d;
                best = m;
            }
        }
        return model.labels[best];
    }

    // (distance, index) pairs order equal distances by training index.
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t m = 0; m < n; ++m) dist[m] = {sqdist(m), m};
    const auto k = std::min(model.k, n);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<std::size_t> votes(model.class_count, 0);
    for (std::size_t i = 0; i < k; ++i) ++votes[model.labels[dist[i].second].value];
    std::size_t best = 0;
    for (std::size_t l = 1; l < votes.size(); ++l) {
        if (votes[l] > votes[best]) best = l;
    }
    return ClassLabel{best};
}

}  // namespace tas
