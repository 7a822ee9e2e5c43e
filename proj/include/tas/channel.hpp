#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tas/rng.hpp"

namespace tas {

/// Relay amplification regime.
enum class AmpMode {
    Constrained,  ///< beta^2 set by the relay power budget P_R
    Unit,         ///< beta^2 == 1, P_R unused
};

std::string_view to_string(AmpMode mode);
AmpMode parse_amp_mode(std::string_view text);

/// Link-level parameters of the source / untrusted relay / destination system.
/// Powers are linear and normalised to the noise PSD, which is fixed to 1.
struct SystemConfig {
    std::size_t n_s = 6;
    std::size_t n_t = 1;
    double p_s = 1.0;
    double p_d = 1.0;
    double p_r = 1.0;
    AmpMode amp_mode = AmpMode::Constrained;
    double n0 = 1.0;

    /// Throws InputDomainError on 1 <= n_t <= n_s, positive powers or n0 == 1 violations.
    void validate() const;
};

struct PowerLevels {
    double p_s;
    double p_d;
    double p_r;
};

/// P_S = P_D = 10^(snr_db/10). P_R follows P_S; in Unit mode it is carried but unused.
PowerLevels snr_to_powers(double snr_db, AmpMode mode);

/// Validated config for the common equal-power setup.
SystemConfig make_config(std::size_t n_s, std::size_t n_t, double snr_db, AmpMode mode);

/// One fading realisation: source->relay gains h and the reciprocal relay<->destination gain g.
struct ChannelSample {
    std::vector<std::complex<double>> h;
    std::complex<double> g;

    bool operator==(const ChannelSample&) const = default;
};

ChannelSample sample_channel(Rng& rng, std::size_t n_s);

std::vector<ChannelSample> generate_dataset(Rng& rng, std::size_t m, std::size_t n_s);
std::vector<ChannelSample> generate_dataset(RngSpec spec, std::size_t m, std::size_t n_s);

/// Channel CSV: optional `#` comment lines, then `re_h1,im_h1,...,re_g,im_g`, one sample per row,
/// 17 significant digits. `comments` are written verbatim, each prefixed by "# ".
void write_channel_csv(std::ostream& out, const std::vector<ChannelSample>& samples,
                       const std::vector<std::string>& comments = {});
std::vector<ChannelSample> read_channel_csv(std::istream& in);

}  // namespace tas
