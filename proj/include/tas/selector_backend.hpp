#pragma once

#include <variant>

#include "tas/classifiers.hpp"
#include "tas/selector.hpp"

namespace tas {

/// Exhaustive search over all subsets.
struct ConventionalSelector {};

using Selector = std::variant<ConventionalSelector, SvmModel, NbModel, KnnModel>;

/// Picks a subset for `sample`. Learned backends featurize the sample and must have been
/// trained at the operating point `config` describes; otherwise ConfigurationError.
ClassLabel select_with(const Selector& selector, const ChannelSample& sample,
                       const SystemConfig& config);

Selector to_selector(ClassifierModel model);

}  // namespace tas
