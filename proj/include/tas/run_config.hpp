#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tas/evaluation.hpp"

namespace tas {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything a CLI run needs. Defaults reproduce the reference setup: N_S = 6, M = 10000,
/// P_S = P_D (= P_R), R_t = 2, SNR 0:5:30 dB.
struct RunConfig {
    // single operating point (label/train/evaluate/confusion/bench)
    std::size_t n_s = 6;
    std::size_t n_t = 1;
    double snr_db = 15.0;
    AmpMode amp_mode = AmpMode::Constrained;
    Scheme scheme = Scheme::Knn;

    // sweep grid
    std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30};
    std::vector<AmpMode> amp_modes{AmpMode::Constrained, AmpMode::Unit};
    std::vector<std::size_t> n_t_values{1, 2};
    std::vector<Scheme> schemes{Scheme::Conventional, Scheme::Svm, Scheme::Nb, Scheme::Knn};

    std::size_t m = 10000;  ///< generate
    std::uint64_t stream = 0;  ///< generate
    std::size_t m_train = 10000;
    std::size_t m_test = 10000;
    double r_t = 2.0;
    std::uint64_t seed = 1;
    ClassifierSettings classifiers;
    std::size_t workers = 1;
    std::size_t bench_queries = 10000;

    OperatingPoint point() const { return {n_s, n_t, snr_db, amp_mode}; }
    SweepSpec sweep_spec() const;

    /// Throws ConfigurationError naming the offending key.
    void validate() const;

    /// Canonical form; `workers` is left out because it never changes results.
    nlohmann::json to_json() const;

    /// FNV-1a 64 of the canonical JSON, 16 hex digits.
    std::string hash() const;

    /// Comment lines embedded at the top of every output file.
    std::vector<std::string> provenance(const std::string& command) const;
};

/// Applies the keys of `doc` on top of `base`. Unknown keys and ill-typed values raise
/// ConfigurationError naming the key.
RunConfig apply_config_json(RunConfig base, const nlohmann::json& doc);

}  // namespace tas
