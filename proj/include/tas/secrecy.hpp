#pragma once

#include "tas/channel.hpp"
#include "tas/subset.hpp"

namespace tas {

struct SinrBreakdown {
    double gamma_r = 0.0;   ///< SINR at the untrusted relay (eavesdropper)
    double gamma_d = 0.0;   ///< SINR at the destination after jamming cancellation
    double beta_sq = 1.0;   ///< relay power amplification factor
    double eff_gain = 0.0;  ///< sum of |h_i|^2 over the selected antennas
};

struct SecrecyResult {
    double rate_unclamped = 0.0;  ///< log2(1+gamma_d) - log2(1+gamma_r)
    double rate = 0.0;            ///< max(rate_unclamped, 0), bits/s/Hz
};

/// Sum of |h_i|^2 over `subset`. Throws InputDomainError for indices >= h.size().
double effective_gain(const ChannelSample& sample, const AntennaSubset& subset);

// Scalar core shared by the subset-level operations. `g_power` is |g|^2.
double beta_sq_from_gain(double eff_gain, double g_power, const SystemConfig& config);
SinrBreakdown sinr_from_gain(double eff_gain, double g_power, const SystemConfig& config);
SecrecyResult secrecy_from_sinr(double gamma_r, double gamma_d);

// The subset-level operations check that subset.size() == config.n_t and that every index
// addresses an antenna of `sample`.

double gamma_r(const ChannelSample& sample, const AntennaSubset& subset, const SystemConfig& config);
double beta_sq(const ChannelSample& sample, const AntennaSubset& subset, const SystemConfig& config);
double gamma_d(const ChannelSample& sample, const AntennaSubset& subset, const SystemConfig& config);
SinrBreakdown sinr_breakdown(const ChannelSample& sample, const AntennaSubset& subset,
                             const SystemConfig& config);
SecrecyResult secrecy_rate(const ChannelSample& sample, const AntennaSubset& subset,
                           const SystemConfig& config);

/// True iff the clamped rate falls strictly below `r_t`. Throws InputDomainError for r_t < 0.
bool outage_indicator(const SecrecyResult& result, double r_t);

}  // namespace tas
