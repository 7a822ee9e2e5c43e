#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "tas/classifiers.hpp"
#include "tas/error.hpp"
#include "tas/evaluation.hpp"
#include "tas/run_config.hpp"
#include "tas/selector_backend.hpp"

namespace tas::cli {

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::optional<double> snr_db;
    std::optional<std::string> amp_mode;
    std::optional<std::size_t> n_t;
    std::optional<std::size_t> workers;
    std::optional<double> svm_c;
    std::optional<std::string> svm_sigma;
    std::optional<std::size_t> knn_k;
    bool nb_priors = false;
    std::optional<std::size_t> m;
    std::optional<std::uint64_t> stream;
    std::optional<std::size_t> m_train;
    std::optional<std::size_t> m_test;
    std::optional<double> r_t;
    std::optional<std::size_t> queries;
    std::string out_path;
    std::string in_path;
    std::string model_path;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::ifstream open_input(const std::string& path) {
    if (path.empty()) throw ConfigurationError("--in is required");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return in;
}

RunConfig effective_config(const Overrides& o) {
    RunConfig cfg;
    cfg.workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TAS_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigurationError(std::string("TAS_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    if (!o.config_path.empty()) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_file(o.config_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("config '" + o.config_path + "' is not valid JSON at byte " + std::to_string(e.byte));
        }
        cfg = apply_config_json(cfg, doc);
    }
    if (o.seed) cfg.seed = *o.seed;
    if (o.scheme) cfg.scheme = parse_scheme(*o.scheme);
    if (o.snr_db) cfg.snr_db = *o.snr_db;
    if (o.amp_mode) {
        cfg.amp_mode = parse_amp_mode(*o.amp_mode);
        cfg.amp_modes = {cfg.amp_mode};
    }
    if (o.n_t) {
        cfg.n_t = *o.n_t;
        cfg.n_t_values = {cfg.n_t};
    }
    if (o.workers) cfg.workers = *o.workers;
    if (o.svm_c) cfg.classifiers.svm.c = *o.svm_c;
    if (o.svm_sigma) {
        if (*o.svm_sigma == "auto") {
            cfg.classifiers.svm.sigma.reset();
        } else {
            try {
                cfg.classifiers.svm.sigma = std::stod(*o.svm_sigma);
            } catch (const std::exception&) {
                throw ConfigurationError("--svm-sigma expects a number or 'auto'");
            }
        }
    }
    if (o.knn_k) cfg.classifiers.knn_k = *o.knn_k;
    if (o.nb_priors) cfg.classifiers.nb.use_priors = true;
    if (o.m) cfg.m = *o.m;
    if (o.stream) cfg.stream = *o.stream;
    if (o.m_train) cfg.m_train = *o.m_train;
    if (o.m_test) cfg.m_test = *o.m_test;
    if (o.r_t) cfg.r_t = *o.r_t;
    if (o.queries) cfg.bench_queries = *o.queries;
    cfg.validate();
    return cfg;
}

// Writes to --out when given, else to `fallback`.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigurationError("cannot write '" + path + "'");
    write(out);
    if (!out) throw ConfigurationError("failed writing '" + path + "'");
}

void cmd_generate(const RunConfig& cfg, const Overrides& o, std::ostream& out) {
    const auto samples = generate_dataset(RngSpec{cfg.seed, cfg.stream}, cfg.m, cfg.n_s);
    auto comments = cfg.provenance("generate");
    comments.push_back("stream=" + std::to_string(cfg.stream) + " m=" + std::to_string(cfg.m));
    emit(o.out_path, out, [&](std::ostream& os) { write_channel_csv(os, samples, comments); });
}

void cmd_label(const RunConfig& cfg, const Overrides& o, std::ostream& out) {
    auto in = open_input(o.in_path);
    const auto channels = read_channel_csv(in);
    if (channels.front().h.size() != cfg.n_s) {
        throw ConfigurationError("channel file has " + std::to_string(channels.front().h.size()) +
                                 " antennas, config n_s=" + std::to_string(cfg.n_s));
    }
    const auto op = cfg.point();
    const auto ds = build_labeled_dataset(channels, op, enumerate_combinations(op.n_s, op.n_t), cfg.seed);
    emit(o.out_path, out, [&](std::ostream& os) { write_labeled_csv(os, ds, cfg.provenance("label")); });
}

void cmd_train(const RunConfig& cfg, const Overrides& o, std::ostream& out) {
    auto in = open_input(o.in_path);
    const auto ds = read_labeled_csv(in);
    ClassifierModel model;
    switch (cfg.scheme) {
        case Scheme::Svm: model = svm_train(ds, cfg.classifiers.svm); break;
        case Scheme::Nb: model = nb_train(ds, cfg.classifiers.nb); break;
        case Scheme::Knn: model = knn_train(ds, cfg.classifiers.knn_k); break;
        case Scheme::Conventional:
            throw ConfigurationError("the conventional scheme has no model to train");
    }
    emit(o.out_path, out, [&](std::ostream& os) { os << save_model(model, cfg.provenance("train")); });
}

void cmd_evaluate(const RunConfig& cfg, const Overrides& o, std::ostream& out) {
    if (o.model_path.empty()) throw ConfigurationError("--model is required");
    const auto model = load_model(read_file(o.model_path));
    const auto text = read_file(o.in_path.empty() ? throw ConfigurationError("--in is required") : o.in_path);
    std::istringstream in(text);

    nlohmann::json report{{"tool", std::string("tasml ") + kToolVersion},
                          {"config_hash", cfg.hash()},
                          {"model_kind", model_kind(model)}};
    if (text.find("# operating_point ") != std::string::npos) {
        const auto ds = read_labeled_csv(in);
        require_same_operating_point(model_operating_point(model), ds.op, "evaluate");
        std::size_t correct = 0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (predict(model, ds.features.row(i)) == ds.labels[i]) ++correct;
        }
        report["operating_point"] = ds.op.to_string();
        report["m_test"] = ds.size();
        report["accuracy"] = static_cast<double>(correct) / static_cast<double>(ds.size());
    } else {
        const auto channels = read_channel_csv(in);
        const auto op = cfg.point();
        require_same_operating_point(model_operating_point(model), op, "evaluate");
        const auto ctx = make_point_context(
            op, channels, std::make_shared<const std::vector<ChannelSample>>(channels), cfg.seed);
        const auto scheme = parse_scheme(model_kind(model));
        const auto pm = evaluate_selector(ctx, to_selector(model), scheme, cfg.r_t);
        report["operating_point"] = op.to_string();
        report["m_test"] = pm.m_test;
        report["mean_rate"] = pm.mean_rate;
        report["sop"] = pm.sop;
        report["r_t"] = pm.r_t;
        report["accuracy"] = pm.accuracy;
    }
    emit(o.out_path, out, [&](std::ostream& os) { os << report.dump(1) << '\n'; });
}

void cmd_sweep(const RunConfig& cfg, const Overrides& o, std::ostream& out) {
    const auto result = run_sweep(cfg.sweep_spec());
    emit(o.out_path, out, [&](std::ostream& os) { write_sweep_csv(os, result, cfg.provenance("sweep")); });
}

void cmd_confusion(const RunConfig& cfg, const Overrides& o, std::ostream& out) {
    const auto cm = confusion(cfg.sweep_spec(), cfg.point(), cfg.scheme);
    auto comments = cfg.provenance("confusion");
    comments.push_back("scheme=" + std::string(to_string(cfg.scheme)) + " " + cfg.point().to_string());
    emit(o.out_path, out, [&](std::ostream& os) { write_confusion_csv(os, cm, comments); });
}

void cmd_bench(const RunConfig& cfg, const Overrides& o, std::ostream& out) {
    auto spec = cfg.sweep_spec();
    const auto rows = bench_selection(spec, cfg.point(), cfg.bench_queries);
    auto comments = cfg.provenance("bench");
    comments.push_back(cfg.point().to_string());
    emit(o.out_path, out, [&](std::ostream& os) { write_timing_csv(os, rows, comments); });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transmit antenna selection for untrusted relay networks"};
    app.require_subcommand(1, 1);
    Overrides o;

    app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "RNG seed (falls back to $TAS_SEED)");
    app.add_option("--scheme", o.scheme, "conventional|svm|nb|knn")
        ->check(CLI::IsMember({"conventional", "svm", "nb", "knn"}));
    app.add_option("--snr-db", o.snr_db, "operating SNR in dB");
    app.add_option("--amp-mode", o.amp_mode, "constrained|unit")->check(CLI::IsMember({"constrained", "unit"}));
    app.add_option("--nt", o.n_t, "number of selected antennas")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out_path, "output file (stdout when omitted)");
    app.add_option("--workers", o.workers, "sweep worker threads")->check(CLI::PositiveNumber);
    app.add_option("--svm-c", o.svm_c, "SVM penalty C");
    app.add_option("--svm-sigma", o.svm_sigma, "RBF bandwidth or 'auto'");
    app.add_option("--knn-k", o.knn_k, "k-NN neighbour count")->check(CLI::PositiveNumber);
    app.add_flag("--nb-priors", o.nb_priors, "use empirical class priors in naive Bayes");
    app.add_option("--m-train", o.m_train, "training draws per operating point");
    app.add_option("--m-test", o.m_test, "test draws per operating point");
    app.add_option("--r-t", o.r_t, "target secrecy rate for the SOP");

    auto* generate = app.add_subcommand("generate", "draw channel realisations to CSV");
    generate->add_option("--m", o.m, "number of samples");
    generate->add_option("--stream", o.stream, "RNG stream id");
    auto* label = app.add_subcommand("label", "label a channel CSV at the configured operating point");
    label->add_option("--in", o.in_path, "channel CSV")->required();
    auto* train = app.add_subcommand("train", "train a selector model from a labeled CSV");
    train->add_option("--in", o.in_path, "labeled CSV")->required();
    auto* evaluate = app.add_subcommand("evaluate", "score a model on a channel or labeled CSV");
    evaluate->add_option("--model", o.model_path, "model JSON")->required();
    evaluate->add_option("--in", o.in_path, "channel CSV or labeled CSV")->required();
    auto* sweep = app.add_subcommand("sweep", "rate/SOP/accuracy over the SNR grid");
    auto* confusion_cmd = app.add_subcommand("confusion", "confusion matrix at one operating point");
    auto* bench = app.add_subcommand("bench", "selection timing per scheme");
    bench->add_option("--queries", o.queries, "timed queries per scheme");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        const auto cfg = effective_config(o);
        if (generate->parsed()) cmd_generate(cfg, o, out);
        else if (label->parsed()) cmd_label(cfg, o, out);
        else if (train->parsed()) cmd_train(cfg, o, out);
        else if (evaluate->parsed()) cmd_evaluate(cfg, o, out);
        else if (sweep->parsed()) cmd_sweep(cfg, o, out);
        else if (confusion_cmd->parsed()) cmd_confusion(cfg, o, out);
        else if (bench->parsed()) cmd_bench(cfg, o, out);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (auto& ch : msg) {
            if (ch == '\n') ch = ' ';
        }
        err << "tas: error: " << msg << '\n';
        return 1;
    }
    return 0;
}

}  // namespace tas::cli
