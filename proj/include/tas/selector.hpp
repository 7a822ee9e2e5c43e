#pragma once

#include <cstddef>
#include <vector>

#include "tas/channel.hpp"
#include "tas/secrecy.hpp"
#include "tas/subset.hpp"

namespace tas {

/// Index into a CombinationSet; 0-based in code, 1-based in every file.
struct ClassLabel {
    std::size_t value = 0;

    std::size_t one_based() const noexcept { return value + 1; }
    static ClassLabel from_one_based(std::size_t v) { return ClassLabel{v - 1}; }

    bool operator==(const ClassLabel&) const = default;
    auto operator<=>(const ClassLabel&) const = default;
};

/// All C(n_s, n_t) antenna subsets in lexicographic order.
class CombinationSet {
public:
    CombinationSet() = default;
    CombinationSet(std::size_t n_s, std::size_t n_t, std::vector<AntennaSubset> subsets)
        : n_s_(n_s), n_t_(n_t), subsets_(std::move(subsets)) {}

    std::size_t n_s() const noexcept { return n_s_; }
    std::size_t n_t() const noexcept { return n_t_; }
    std::size_t size() const noexcept { return subsets_.size(); }
    const AntennaSubset& operator[](std::size_t i) const { return subsets_[i]; }
    const AntennaSubset& at(ClassLabel label) const { return subsets_.at(label.value); }

    auto begin() const noexcept { return subsets_.begin(); }
    auto end() const noexcept { return subsets_.end(); }

private:
    std::size_t n_s_ = 0;
    std::size_t n_t_ = 0;
    std::vector<AntennaSubset> subsets_;
};

/// n choose k, exact for the small counts used here.
std::size_t binomial(std::size_t n, std::size_t k);

CombinationSet enumerate_combinations(std::size_t n_s, std::size_t n_t);

/// Unclamped secrecy rate of every subset, in combination order.
std::vector<double> subset_rates(const ChannelSample& sample, const SystemConfig& config,
                                 const CombinationSet& combos);

/// Exhaustive selector: the subset with the largest *unclamped* secrecy rate, lowest index on
/// ties.
ClassLabel oracle_label(const ChannelSample& sample, const SystemConfig& config,
                        const CombinationSet& combos);

struct Selection {
    ClassLabel label;
    SecrecyResult result;
};

Selection conventional_select(const ChannelSample& sample, const SystemConfig& config,
                              const CombinationSet& combos);
Selection conventional_select(const ChannelSample& sample, const SystemConfig& config);

}  // namespace tas
