#include "tas/run_config.hpp"

#include <cstdio>
#include <cmath>

#include "tas/error.hpp"

namespace tas {

using nlohmann::json;

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec spec;
    spec.snr_grid_db = snr_grid_db;
    spec.amp_modes = amp_modes;
    spec.n_t_values = n_t_values;
    spec.schemes = schemes;
    spec.n_s = n_s;
    spec.m_train = m_train;
    spec.m_test = m_test;
    spec.r_t = r_t;
    spec.seed = seed;
    spec.classifiers = classifiers;
    spec.workers = workers;
    return spec;
}

void RunConfig::validate() const {
    const auto fail = [](const std::string& key, const std::string& why) {
        throw ConfigurationError("config key '" + key + "': " + why);
    };
    if (n_s < 1) fail("n_s", "must be at least 1");
    if (n_t < 1 || n_t > n_s) fail("n_t", "must lie in [1, n_s]");
    if (!std::isfinite(snr_db)) fail("snr_db", "must be finite");
    if (snr_grid_db.empty()) fail("snr_grid_db", "must not be empty");
    for (const double s : snr_grid_db) {
        if (!std::isfinite(s)) fail("snr_grid_db", "values must be finite");
    }
    if (amp_modes.empty()) fail("amp_modes", "must not be empty");
    if (n_t_values.empty()) fail("n_t_values", "must not be empty");
    for (const auto v : n_t_values) {
        if (v < 1 || v > n_s) fail("n_t_values", "values must lie in [1, n_s]");
    }
    if (schemes.empty()) fail("schemes", "must not be empty");
    if (m < 1) fail("m", "must be at least 1");
    if (m_train < 1) fail("m_train", "must be at least 1");
    if (m_test < 1) fail("m_test", "must be at least 1");
    if (!(r_t >= 0.0)) fail("r_t", "must be nonnegative");
    if (!(classifiers.svm.c > 0.0)) fail("svm_c", "must be positive");
    if (classifiers.svm.sigma && !(*classifiers.svm.sigma > 0.0)) fail("svm_sigma", "must be positive or \"auto\"");
    if (classifiers.knn_k < 1 || classifiers.knn_k > m_train) fail("knn_k", "must lie in [1, m_train]");
    if (workers < 1) fail("workers", "must be at least 1");
    if (bench_queries < 1) fail("bench_queries", "must be at least 1");
}

json RunConfig::to_json() const {
    json modes = json::array();
    for (const auto mode : amp_modes) modes.push_back(to_string(mode));
    json scheme_list = json::array();
    for (const auto s : schemes) scheme_list.push_back(to_string(s));
    return {
        {"n_s", n_s},
        {"n_t", n_t},
        {"snr_db", snr_db},
        {"amp_mode", to_string(amp_mode)},
        {"scheme", to_string(scheme)},
        {"snr_grid_db", snr_grid_db},
        {"amp_modes", modes},
        {"n_t_values", n_t_values},
        {"schemes", scheme_list},
        {"m", m},
        {"stream", stream},
        {"m_train", m_train},
        {"m_test", m_test},
        {"r_t", r_t},
        {"seed", seed},
        {"svm_c", classifiers.svm.c},
        {"svm_sigma", classifiers.svm.sigma ? json(*classifiers.svm.sigma) : json("auto")},
        {"rbf_form", to_string(classifiers.svm.form)},
        {"knn_k", classifiers.knn_k},
        {"nb_priors", classifiers.nb.use_priors},
        {"bench_queries", bench_queries},
    };
}

std::string RunConfig::hash() const {
    const auto text = to_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> RunConfig::provenance(const std::string& command) const {
    return {std::string("tasml ") + kToolVersion + " " + command,
            "config_hash=" + hash() + " seed=" + std::to_string(seed),
            "config=" + to_json().dump()};
}

RunConfig apply_config_json(RunConfig cfg, const json& doc) {
    if (!doc.is_object()) throw ConfigurationError("config document must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        try {
            if (key == "n_s") cfg.n_s = value.get<std::size_t>();
            else if (key == "n_t") cfg.n_t = value.get<std::size_t>();
            else if (key == "snr_db") cfg.snr_db = value.get<double>();
            else if (key == "amp_mode") cfg.amp_mode = parse_amp_mode(value.get<std::string>());
            else if (key == "scheme") cfg.scheme = parse_scheme(value.get<std::string>());
            else if (key == "snr_grid_db") cfg.snr_grid_db = value.get<std::vector<double>>();
            else if (key == "amp_modes") {
                cfg.amp_modes.clear();
                for (const auto& v : value) cfg.amp_modes.push_back(parse_amp_mode(v.get<std::string>()));
            } else if (key == "n_t_values") cfg.n_t_values = value.get<std::vector<std::size_t>>();
            else if (key == "schemes") {
                cfg.schemes.clear();
                for (const auto& v : value) cfg.schemes.push_back(parse_scheme(v.get<std::string>()));
            } else if (key == "m") cfg.m = value.get<std::size_t>();
            else if (key == "stream") cfg.stream = value.get<std::uint64_t>();
            else if (key == "m_train") cfg.m_train = value.get<std::size_t>();
            else if (key == "m_test") cfg.m_test = value.get<std::size_t>();
            else if (key == "r_t") cfg.r_t = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "svm_c") cfg.classifiers.svm.c = value.get<double>();
            else if (key == "svm_sigma") {
                if (value.is_string() && value.get<std::string>() == "auto") cfg.classifiers.svm.sigma.reset();
                else cfg.classifiers.svm.sigma = value.get<double>();
            } else if (key == "rbf_form") cfg.classifiers.svm.form = parse_rbf_form(value.get<std::string>());
            else if (key == "knn_k") cfg.classifiers.knn_k = value.get<std::size_t>();
            else if (key == "nb_priors") cfg.classifiers.nb.use_priors = value.get<bool>();
            else if (key == "workers") cfg.workers = value.get<std::size_t>();
            else if (key == "bench_queries") cfg.bench_queries = value.get<std::size_t>();
            else throw ConfigurationError("unknown config key '" + key + "'");
        } catch (const json::exception& e) {
            throw ConfigurationError("config key '" + key + "': " + e.what());
        } catch (const InputDomainError& e) {
            throw ConfigurationError("config key '" + key + "': " + e.what());
        }
    }
    return cfg;
}

}  // namespace tas
