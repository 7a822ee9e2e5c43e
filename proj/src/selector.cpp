#include "tas/selector.hpp"

#include <algorithm>
#include <complex>

#include "tas/error.hpp"

namespace tas {

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

CombinationSet enumerate_combinations(std::size_t n_s, std::size_t n_t) {
    if (n_t < 1 || n_t > n_s) {
        throw InputDomainError("cannot choose n_t=" + std::to_string(n_t) + " of n_s=" +
                               std::to_string(n_s) + " antennas");
    }
    std::vector<AntennaSubset> subsets;
    subsets.reserve(binomial(n_s, n_t));
    std::vector<std::size_t> idx(n_t);
    for (std::size_t i = 0; i < n_t; ++i) idx[i] = i;
    while (true) {
        subsets.emplace_back(idx);
        // Advance the rightmost index that still has room.
        std::size_t pos = n_t;
        while (pos > 0 && idx[pos - 1] == n_s - n_t + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t j = pos; j < n_t; ++j) idx[j] = idx[j - 1] + 1;
    }
    return {n_s, n_t, std::move(subsets)};
}

namespace {

void check_combos(const ChannelSample& sample, const SystemConfig& config, const CombinationSet& combos) {
    if (combos.n_s() != config.n_s || combos.n_t() != config.n_t) {
        throw ConfigurationError("combination set built for (n_s=" + std::to_string(combos.n_s()) +
                                 ", n_t=" + std::to_string(combos.n_t()) + ") used with (n_s=" +
                                 std::to_string(config.n_s) + ", n_t=" + std::to_string(config.n_t) + ")");
    }
    if (sample.h.size() != config.n_s) {
        throw InputDomainError("channel sample has " + std::to_string(sample.h.size()) +
                               " antennas, config expects n_s=" + std::to_string(config.n_s));
    }
}

}  // namespace

std::vector<double> subset_rates(const ChannelSample& sample, const SystemConfig& config,
                                 const CombinationSet& combos) {
    check_combos(sample, config, combos);
    const double g_power = std::norm(sample.g);
    std::vector<double> rates;
    rates.reserve(combos.size());
    for (const auto& subset : combos) {
        const auto s = sinr_from_gain(effective_gain(sample, subset), g_power, config);
        rates.push_back(secrecy_from_sinr(s.gamma_r, s.gamma_d).rate_unclamped);
    }
    return rates;
}

ClassLabel oracle_label(const ChannelSample& sample, const SystemConfig& config,
                        const CombinationSet& combos) {
    const auto rates = subset_rates(sample, config, combos);
    std::size_t best = 0;
    for (std::size_t i = 1; i < rates.size(); ++i) {
        if (rates[i] > rates[best]) best = i;
    }
    return ClassLabel{best};
}

Selection conventional_select(const ChannelSample& sample, const SystemConfig& config,
                              const CombinationSet& combos) {
    const auto label = oracle_label(sample, config, combos);
    return {label, secrecy_rate(sample, combos.at(label), config)};
}

Selection conventional_select(const ChannelSample& sample, const SystemConfig& config) {
    config.validate();
    return conventional_select(sample, config, enumerate_combinations(config.n_s, config.n_t));
}

}  // namespace tas
