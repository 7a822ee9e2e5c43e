#include "tas/selector_backend.hpp"

#include "tas/error.hpp"
#include "tas/features.hpp"

namespace tas {

namespace {

template <class Model>
ClassLabel predict_sample(const Model& model, const ChannelSample& sample, const SystemConfig& config) {
    if (!model.trained()) throw ConfigurationError("selector model is not trained");
    if (!matches(model.op, config)) {
        throw ConfigurationError("model trained at " + model.op.to_string() +
                                 " does not match the requested system configuration");
    }
    const auto t = normalize(build_feature(sample));
    if constexpr (std::is_same_v<Model, SvmModel>) {
        return svm_predict(model, t);
    } else if constexpr (std::is_same_v<Model, NbModel>) {
        return nb_predict(model, t);
    } else {
        return knn_predict(model, t);
    }
}

}  // namespace

ClassLabel select_with(const Selector& selector, const ChannelSample& sample, const SystemConfig& config) {
    if (sample.h.size() != config.n_s) {
        throw InputDomainError("channel sample has " + std::to_string(sample.h.size()) +
                               " antennas, config expects n_s=" + std::to_string(config.n_s));
    }
    return std::visit(
        [&](const auto& s) -> ClassLabel {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ConventionalSelector>) {
                return conventional_select(sample, config).label;
            } else {
                return predict_sample(s, sample, config);
            }
        },
        selector);
}

Selector to_selector(ClassifierModel model) {
    return std::visit([](auto&& m) -> Selector { return std::move(m); }, std::move(model));
}

}  // namespace tas
