#include "tas/channel.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "tas/error.hpp"
#include "text_util.hpp"

namespace tas {

std::string_view to_string(AmpMode mode) {
    return mode == AmpMode::Unit ? "unit" : "constrained";
}

AmpMode parse_amp_mode(std::string_view text) {
    if (text == "constrained") return AmpMode::Constrained;
    if (text == "unit") return AmpMode::Unit;
    throw InputDomainError("unknown amplification mode '" + std::string(text) +
                           "' (expected constrained|unit)");
}

void SystemConfig::validate() const {
    if (n_s < 1) throw InputDomainError("n_s must be at least 1");
    if (n_t < 1 || n_t > n_s) {
        throw InputDomainError("n_t must satisfy 1 <= n_t <= n_s (n_t=" + std::to_string(n_t) +
                               ", n_s=" + std::to_string(n_s) + ")");
    }
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(p_s) || !positive(p_d) || !positive(p_r)) {
        throw InputDomainError("transmit powers must be finite and positive");
    }
    if (n0 != 1.0) throw InputDomainError("noise PSD n0 is fixed to 1");
}

PowerLevels snr_to_powers(double snr_db, AmpMode /*mode*/) {
    if (!std::isfinite(snr_db)) throw InputDomainError("SNR must be finite");
    const double p = std::pow(10.0, snr_db / 10.0);
    return {p, p, p};
}

SystemConfig make_config(std::size_t n_s, std::size_t n_t, double snr_db, AmpMode mode) {
    const auto powers = snr_to_powers(snr_db, mode);
    SystemConfig config{n_s, n_t, powers.p_s, powers.p_d, powers.p_r, mode, 1.0};
    config.validate();
    return config;
}

ChannelSample sample_channel(Rng& rng, std::size_t n_s) {
    if (n_s < 1) throw InputDomainError("n_s must be at least 1");
    ChannelSample sample;
    sample.h.reserve(n_s);
    for (std::size_t i = 0; i < n_s; ++i) sample.h.push_back(rng.complex_normal());
    sample.g = rng.complex_normal();
    return sample;
}

std::vector<ChannelSample> generate_dataset(Rng& rng, std::size_t m, std::size_t n_s) {
    if (m < 1) throw InputDomainError("dataset size must be at least 1");
    std::vector<ChannelSample> samples;
    samples.reserve(m);
    for (std::size_t i = 0; i < m; ++i) samples.push_back(sample_channel(rng, n_s));
    return samples;
}

std::vector<ChannelSample> generate_dataset(RngSpec spec, std::size_t m, std::size_t n_s) {
    Rng rng(spec);
    return generate_dataset(rng, m, n_s);
}

void write_channel_csv(std::ostream& out, const std::vector<ChannelSample>& samples,
                       const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    const std::size_t n_s = samples.empty() ? 0 : samples.front().h.size();
    for (std::size_t i = 1; i <= n_s; ++i) out << "re_h" << i << ",im_h" << i << ',';
    out << "re_g,im_g\n";
    for (const auto& s : samples) {
        if (s.h.size() != n_s) throw InputDomainError("channel samples differ in antenna count");
        for (const auto& h : s.h) {
            out << detail::format_double(h.real()) << ',' << detail::format_double(h.imag()) << ',';
        }
        out << detail::format_double(s.g.real()) << ',' << detail::format_double(s.g.imag()) << '\n';
    }
}

std::vector<ChannelSample> read_channel_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t n_s = 0;
    std::vector<ChannelSample> samples;
    while (detail::next_line(in, line, line_no)) {
        if (line.empty() || line.front() == '#') continue;
        const auto fields = detail::split(line, ',');
        if (!have_header) {
            if (fields.size() < 4 || fields.size() % 2 != 0) {
                throw ParseError("malformed channel CSV header", line_no);
            }
            n_s = fields.size() / 2 - 1;
            for (std::size_t i = 0; i < n_s; ++i) {
                const auto idx = std::to_string(i + 1);
                if (detail::trim(fields[2 * i]) != "re_h" + idx ||
                    detail::trim(fields[2 * i + 1]) != "im_h" + idx) {
                    throw ParseError("unexpected channel CSV column '" + std::string(fields[2 * i]) + "'",
                                     line_no);
                }
            }
            if (detail::trim(fields[2 * n_s]) != "re_g" || detail::trim(fields[2 * n_s + 1]) != "im_g") {
                throw ParseError("channel CSV header must end with re_g,im_g", line_no);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != 2 * (n_s + 1)) {
            throw ParseError("expected " + std::to_string(2 * (n_s + 1)) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        ChannelSample s;
        s.h.reserve(n_s);
        for (std::size_t i = 0; i < n_s; ++i) {
            s.h.emplace_back(detail::parse_double(fields[2 * i], line_no),
                             detail::parse_double(fields[2 * i + 1], line_no));
        }
        s.g = {detail::parse_double(fields[2 * n_s], line_no),
               detail::parse_double(fields[2 * n_s + 1], line_no)};
        samples.push_back(std::move(s));
    }
    if (!have_header) throw ParseError("channel CSV has no header row", line_no);
    if (samples.empty()) throw ParseError("channel CSV has no samples", line_no);
    return samples;
}

}  // namespace tas
