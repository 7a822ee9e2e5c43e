#include "tas/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "tas/error.hpp"
#include "text_util.hpp"

namespace tas {

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Conventional: return "conventional";
        case Scheme::Svm: return "svm";
        case Scheme::Nb: return "nb";
        case Scheme::Knn: return "knn";
    }
    return "?";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "conventional") return Scheme::Conventional;
    if (text == "svm") return Scheme::Svm;
    if (text == "nb") return Scheme::Nb;
    if (text == "knn") return Scheme::Knn;
    throw InputDomainError("unknown scheme '" + std::string(text) + "' (expected conventional|svm|nb|knn)");
}

void SweepSpec::validate() const {
    if (snr_grid_db.empty() || amp_modes.empty() || n_t_values.empty() || schemes.empty()) {
        throw ConfigurationError("sweep grids must be nonempty");
    }
    for (const double snr : snr_grid_db) {
        if (!std::isfinite(snr)) throw ConfigurationError("SNR grid values must be finite");
    }
    for (const auto n_t : n_t_values) {
        if (n_t < 1 || n_t > n_s) throw ConfigurationError("n_t values must lie in [1, n_s]");
    }
    if (m_train < 1 || m_test < 1) throw ConfigurationError("m_train and m_test must be at least 1");
    if (!(r_t >= 0.0)) throw ConfigurationError("target secrecy rate r_t must be nonnegative");
    if (classifiers.knn_k < 1 || classifiers.knn_k > m_train) {
        throw ConfigurationError("knn_k must lie in [1, m_train]");
    }
}

PointContext make_point_context(const OperatingPoint& op, const std::vector<ChannelSample>& train,
                                std::shared_ptr<const std::vector<ChannelSample>> test, std::uint64_t seed) {
    PointContext ctx;
    ctx.op = op;
    ctx.combos = enumerate_combinations(op.n_s, op.n_t);
    ctx.train = build_labeled_dataset(train, op, ctx.combos, seed);
    const auto config = op.config();
    const std::size_t m = test->size();
    ctx.test_rates.reserve(m * ctx.combos.size());
    ctx.test_oracle.reserve(m);
    for (const auto& sample : *test) {
        ctx.test_features.push_back(normalize(build_feature(sample)));
        const auto rates = subset_rates(sample, config, ctx.combos);
        ctx.test_rates.insert(ctx.test_rates.end(), rates.begin(), rates.end());
        ctx.test_oracle.push_back(argmax_label(rates));
    }
    ctx.test_channels = std::move(test);
    return ctx;
}

Selector train_selector(Scheme scheme, const LabeledDataset& train, const ClassifierSettings& settings) {
    switch (scheme) {
        case Scheme::Conventional: return ConventionalSelector{};
        case Scheme::Svm: return svm_train(train, settings.svm);
        case Scheme::Nb: return nb_train(train, settings.nb);
        case Scheme::Knn: return knn_train(train, settings.knn_k);
    }
    throw InputDomainError("unknown scheme");
}

PointMetrics evaluate_selector(const PointContext& ctx, const Selector& selector, Scheme scheme, double r_t) {
    if (!(r_t >= 0.0)) throw InputDomainError("target secrecy rate must be nonnegative");
    const auto config = ctx.op.config();
    const std::size_t m = ctx.test_oracle.size();

    PointMetrics pm;
    pm.scheme = scheme;
    pm.op = ctx.op;
    pm.r_t = r_t;
    pm.m_train = ctx.train.size();
    pm.m_test = m;
    pm.seed = ctx.train.seed;
    pm.oracle = ctx.test_oracle;
    pm.predicted.reserve(m);
    pm.rates.reserve(m);

    if (std::holds_alternative<ConventionalSelector>(selector)) {
        for (const auto& sample : *ctx.test_channels) pm.predicted.push_back(select_with(selector, sample, config));
    } else {
        // One featurization per test draw is shared with the context; only the model check
        // and prediction remain per query.
        if (m > 0) select_with(selector, ctx.test_channels->front(), config);
        for (std::size_t i = 0; i < m; ++i) {
            const auto t = ctx.test_features.row(i);
            pm.predicted.push_back(std::visit(
                [&](const auto& s) -> ClassLabel {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, SvmModel>) return svm_predict(s, t);
                    else if constexpr (std::is_same_v<T, NbModel>) return nb_predict(s, t);
                    else if constexpr (std::is_same_v<T, KnnModel>) return knn_predict(s, t);
                    else return ClassLabel{};
                },
                selector));
        }
    }

    double sum = 0.0, sum_unclamped = 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double unclamped = ctx.unclamped_rate(i, pm.predicted[i]);
        const double rate = unclamped > 0.0 ? unclamped : 0.0;
        pm.rates.push_back(rate);
        sum += rate;
        sum_unclamped += unclamped;
        if (pm.predicted[i] == pm.oracle[i]) ++correct;
    }
    const double md = static_cast<double>(m);
    pm.mean_rate = sum / md;
    pm.mean_rate_unclamped = sum_unclamped / md;
    double ss = 0.0;
    for (const double r : pm.rates) ss += (r - pm.mean_rate) * (r - pm.mean_rate);
    pm.rate_std_error = m > 1 ? std::sqrt(ss / (md - 1.0) / md) : 0.0;
    pm.sop = empirical_sop(pm.rates, r_t);
    pm.accuracy = static_cast<double>(correct) / md;
    return pm;
}

namespace {

struct ChannelSets {
    std::vector<ChannelSample> train;
    std::shared_ptr<const std::vector<ChannelSample>> test;
};

ChannelSets draw_channels(const SweepSpec& spec) {
    ChannelSets sets;
    sets.train = generate_dataset(RngSpec{spec.seed, kTrainStream}, spec.m_train, spec.n_s);
    sets.test = std::make_shared<const std::vector<ChannelSample>>(
        generate_dataset(RngSpec{spec.seed, kTestStream}, spec.m_test, spec.n_s));
    return sets;
}

PointMetrics train_and_evaluate(const PointContext& ctx, const SweepSpec& spec, Scheme scheme) {
    const auto start = std::chrono::steady_clock::now();
    const auto selector = train_selector(scheme, ctx.train, spec.classifiers);
    const auto stop = std::chrono::steady_clock::now();
    auto pm = evaluate_selector(ctx, selector, scheme, spec.r_t);
    pm.train_seconds = std::chrono::duration<double>(stop - start).count();
    return pm;
}

OperatingPoint checked_point(const SweepSpec& spec, const OperatingPoint& op) {
    spec.validate();
    if (op.n_s != spec.n_s) throw ConfigurationError("operating point n_s differs from the sweep's n_s");
    op.config();  // validates n_t and powers
    return op;
}

}  // namespace

PointMetrics run_point(const SweepSpec& spec, const OperatingPoint& op, Scheme scheme) {
    checked_point(spec, op);
    auto sets = draw_channels(spec);
    const auto ctx = make_point_context(op, sets.train, sets.test, spec.seed);
    return train_and_evaluate(ctx, spec, scheme);
}

const PointMetrics& SweepResult::find(Scheme scheme, AmpMode mode, std::size_t n_t, double snr_db) const {
    for (const auto& p : points) {
        if (p.scheme == scheme && p.op.amp_mode == mode && p.op.n_t == n_t && p.op.snr_db == snr_db) return p;
    }
    throw InputDomainError("no sweep point for scheme " + std::string(to_string(scheme)) + " at " +
                           std::string(to_string(mode)) + " n_t=" + std::to_string(n_t) +
                           " snr_db=" + detail::format_double(snr_db));
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<OperatingPoint> ops;
    for (const auto mode : spec.amp_modes) {
        for (const auto n_t : spec.n_t_values) {
            for (const double snr : spec.snr_grid_db) ops.push_back({spec.n_s, n_t, snr, mode});
        }
    }

    const auto sets = draw_channels(spec);
    const std::size_t n_schemes = spec.schemes.size();
    std::vector<PointMetrics> slots(ops.size() * n_schemes);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= ops.size()) return;
            try {
                const auto ctx = make_point_context(ops[i], sets.train, sets.test, spec.seed);
                for (std::size_t s = 0; s < n_schemes; ++s) {
                    slots[i * n_schemes + s] = train_and_evaluate(ctx, spec, spec.schemes[s]);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = ops.size();
            }
        }
    };

    const std::size_t n_workers = std::clamp<std::size_t>(spec.workers, 1, ops.size());
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    SweepResult result;
    result.spec = spec;
    result.points = std::move(slots);
    return result;
}

double empirical_sop(std::span<const double> rates, double r_t) {
    if (rates.empty()) throw InputDomainError("SOP of an empty rate set");
    const auto outages = std::count_if(rates.begin(), rates.end(), [&](double r) { return r < r_t; });
    return static_cast<double>(outages) / static_cast<double>(rates.size());
}

double ConfusionMatrix::off_diagonal_mass() const {
    double mass = 0.0;
    for (std::size_t r = 0; r < classes; ++r) {
        for (std::size_t c = 0; c < classes; ++c) {
            if (r != c) mass += rate(r, c);
        }
    }
    return mass;
}

double ConfusionMatrix::error_rate() const {
    std::uint64_t total = 0, off = 0;
    for (std::size_t r = 0; r < classes; ++r) {
        for (std::size_t c = 0; c < classes; ++c) {
            total += count(r, c);
            if (r != c) off += count(r, c);
        }
    }
    return total ? static_cast<double>(off) / static_cast<double>(total) : 0.0;
}

ConfusionMatrix confusion_from_labels(std::size_t classes, std::span<const ClassLabel> oracle,
                                      std::span<const ClassLabel> predicted) {
    if (oracle.size() != predicted.size()) throw InputDomainError("oracle and predicted label counts differ");
    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts.assign(classes * classes, 0);
    cm.rates.assign(classes * classes, 0.0);
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        if (oracle[i].value >= classes || predicted[i].value >= classes) {
            throw InputDomainError("label outside the confusion matrix");
        }
        ++cm.counts[oracle[i].value * classes + predicted[i].value];
    }
    for (std::size_t r = 0; r < classes; ++r) {
        std::uint64_t row_total = 0;
        for (std::size_t c = 0; c < classes; ++c) row_total += cm.count(r, c);
        if (row_total == 0) continue;
        for (std::size_t c = 0; c < classes; ++c) {
            cm.rates[r * classes + c] = static_cast<double>(cm.count(r, c)) / static_cast<double>(row_total);
        }
    }
    return cm;
}

ConfusionMatrix confusion(const SweepSpec& spec, const OperatingPoint& op, Scheme scheme) {
    const auto pm = run_point(spec, op, scheme);
    return confusion_from_labels(op.class_count(), pm.oracle, pm.predicted);
}

std::vector<TimingRow> bench_selection(const SweepSpec& spec, const OperatingPoint& op, std::size_t queries) {
    checked_point(spec, op);
    if (queries < 1) throw InputDomainError("benchmark needs at least one query");
    const auto sets = draw_channels(spec);
    const auto combos = enumerate_combinations(op.n_s, op.n_t);
    const auto train = build_labeled_dataset(sets.train, op, combos, spec.seed);
    const auto config = op.config();
    const auto& test = *sets.test;

    std::vector<TimingRow> rows;
    std::vector<double> samples(queries);
    for (const auto scheme : spec.schemes) {
        TimingRow row{scheme};
        const auto t0 = std::chrono::steady_clock::now();
        const auto selector = train_selector(scheme, train, spec.classifiers);
        row.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        std::size_t sink = 0;
        for (std::size_t q = 0; q < queries; ++q) {
            const auto& sample = test[q % test.size()];
            const auto a = std::chrono::steady_clock::now();
            sink += select_with(selector, sample, config).value;
            const auto b = std::chrono::steady_clock::now();
            samples[q] = std::chrono::duration<double, std::nano>(b - a).count();
        }
        // Keeps the selections observable.
        if (sink == static_cast<std::size_t>(-1)) rows.clear();
        const auto mid = samples.begin() + static_cast<std::ptrdiff_t>(queries / 2);
        std::nth_element(samples.begin(), mid, samples.end());
        row.median_query_ns = *mid;
        row.queries = queries;
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "scheme,amp_mode,n_t,snr_db,mean_rate,sop,accuracy,m_train,m_test,seed\n";
    for (const auto& p : result.points) {
        out << to_string(p.scheme) << ',' << to_string(p.op.amp_mode) << ',' << p.op.n_t << ','
            << detail::format_double(p.op.snr_db) << ',' << detail::format_double(p.mean_rate) << ','
            << detail::format_double(p.sop) << ',' << detail::format_double(p.accuracy) << ',' << p.m_train << ','
            << p.m_test << ',' << p.seed << '\n';
    }
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& matrix, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "oracle\\predicted";
    for (std::size_t c = 0; c < matrix.classes; ++c) out << ',' << c + 1;
    out << '\n';
    for (std::size_t r = 0; r < matrix.classes; ++r) {
        out << r + 1;
        for (std::size_t c = 0; c < matrix.classes; ++c) out << ',' << detail::format_double(matrix.rate(r, c));
        out << '\n';
    }
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "scheme,train_seconds,median_query_ns,queries\n";
    for (const auto& r : rows) {
        out << to_string(r.scheme) << ',' << detail::format_double(r.train_seconds) << ','
            << detail::format_double(r.median_query_ns) << ',' << r.queries << '\n';
    }
}

}  // namespace tas
