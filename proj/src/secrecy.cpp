#include "tas/secrecy.hpp"

#include <cmath>
#include <complex>

#include "tas/error.hpp"

namespace tas {

namespace {

void check_subset(const ChannelSample& sample, const AntennaSubset& subset, const SystemConfig& config) {
    if (subset.size() != config.n_t) {
        throw InputDomainError("subset " + subset.to_string() + " does not select n_t=" +
                               std::to_string(config.n_t) + " antennas");
    }
    if (sample.h.size() != config.n_s) {
        throw InputDomainError("channel sample has " + std::to_string(sample.h.size()) +
                               " antennas, config expects n_s=" + std::to_string(config.n_s));
    }
}

}  // namespace

double effective_gain(const ChannelSample& sample, const AntennaSubset& subset) {
    if (subset.size() == 0) throw InputDomainError("empty antenna subset");
    double sum = 0.0;
    for (const auto i : subset.indices()) {
        if (i >= sample.h.size()) {
            throw InputDomainError("antenna index " + std::to_string(i + 1) + " out of range [1, " +
                                   std::to_string(sample.h.size()) + "]");
        }
        sum += std::norm(sample.h[i]);
    }
    return sum;
}

double beta_sq_from_gain(double eff_gain, double g_power, const SystemConfig& config) {
    if (config.amp_mode == AmpMode::Unit) return 1.0;
    const double per_antenna = config.p_s / static_cast<double>(config.n_t);
    return config.p_r / (per_antenna * eff_gain + config.p_d * g_power + config.n0);
}

SinrBreakdown sinr_from_gain(double eff_gain, double g_power, const SystemConfig& config) {
    const double signal = config.p_s / static_cast<double>(config.n_t) * eff_gain;
    SinrBreakdown out;
    out.eff_gain = eff_gain;
    out.beta_sq = beta_sq_from_gain(eff_gain, g_power, config);
    out.gamma_r = signal / (config.p_d * g_power + config.n0);
    // Jamming is cancelled at D; what remains is the relay noise forwarded through beta*g.
    out.gamma_d = signal * out.beta_sq * g_power / (out.beta_sq * g_power + config.n0);
    return out;
}

SecrecyResult secrecy_from_sinr(double gamma_r, double gamma_d) {
    SecrecyResult r;
    r.rate_unclamped = std::log2(1.0 + gamma_d) - std::log2(1.0 + gamma_r);
    r.rate = r.rate_unclamped > 0.0 ? r.rate_unclamped : 0.0;
    return r;
}

SinrBreakdown sinr_breakdown(const ChannelSample& sample, const AntennaSubset& subset,
                             const SystemConfig& config) {
    check_subset(sample, subset, config);
    return sinr_from_gain(effective_gain(sample, subset), std::norm(sample.g), config);
}

double gamma_r(const ChannelSample& sample, const AntennaSubset& subset, const SystemConfig& config) {
    return sinr_breakdown(sample, subset, config).gamma_r;
}

double beta_sq(const ChannelSample& sample, const AntennaSubset& subset, const SystemConfig& config) {
    return sinr_breakdown(sample, subset, config).beta_sq;
}

double gamma_d(const ChannelSample& sample, const AntennaSubset& subset, const SystemConfig& config) {
    return sinr_breakdown(sample, subset, config).gamma_d;
}

SecrecyResult secrecy_rate(const ChannelSample& sample, const AntennaSubset& subset,
                           const SystemConfig& config) {
    const auto s = sinr_breakdown(sample, subset, config);
    return secrecy_from_sinr(s.gamma_r, s.gamma_d);
}

bool outage_indicator(const SecrecyResult& result, double r_t) {
    if (!(r_t >= 0.0)) throw InputDomainError("target secrecy rate must be nonnegative");
    return result.rate < r_t;
}

}  // namespace tas
