#include "tas/features.hpp"

#include <algorithm>
#include <complex>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tas/error.hpp"
#include "text_util.hpp"

namespace tas {

std::vector<double> build_feature(const ChannelSample& sample) {
    std::vector<double> d;
    d.reserve(sample.h.size() + 1);
    for (const auto& h : sample.h) d.push_back(std::abs(h));
    d.push_back(std::abs(sample.g));
    return d;
}

std::vector<double> normalize(std::span<const double> d) {
    std::vector<double> t(d.size(), 0.0);
    if (d.empty()) return t;
    const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return t;
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) t[i] = (d[i] - mean) / range;
    return t;
}

FeatureVector make_feature_vector(const ChannelSample& sample) {
    FeatureVector fv;
    fv.raw = build_feature(sample);
    fv.normalized = normalize(fv.raw);
    return fv;
}

void FeatureMatrix::push_back(std::span<const double> values) {
    if (rows_ == 0 && dim_ == 0) dim_ = values.size();
    if (values.size() != dim_) {
        throw InputDomainError("feature row has length " + std::to_string(values.size()) +
                               ", matrix dimension is " + std::to_string(dim_));
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

std::string OperatingPoint::to_string() const {
    std::ostringstream os;
    os << "snr_db=" << detail::format_double(snr_db) << " amp_mode=" << tas::to_string(amp_mode)
       << " n_t=" << n_t << " n_s=" << n_s;
    return os.str();
}

void require_same_operating_point(const OperatingPoint& expected, const OperatingPoint& actual,
                                  std::string_view what) {
    const auto fail = [&](const std::string& field, const std::string& a, const std::string& b) {
        throw ConfigurationError(std::string(what) + ": operating point mismatch on " + field + " (" + a +
                                 " vs " + b + ")");
    };
    if (expected.n_s != actual.n_s) fail("n_s", std::to_string(expected.n_s), std::to_string(actual.n_s));
    if (expected.n_t != actual.n_t) fail("n_t", std::to_string(expected.n_t), std::to_string(actual.n_t));
    if (expected.amp_mode != actual.amp_mode) {
        fail("amp_mode", std::string(to_string(expected.amp_mode)), std::string(to_string(actual.amp_mode)));
    }
    if (expected.snr_db != actual.snr_db) {
        fail("snr_db", detail::format_double(expected.snr_db), detail::format_double(actual.snr_db));
    }
}

bool matches(const OperatingPoint& op, const SystemConfig& config) {
    if (op.n_s != config.n_s || op.n_t != config.n_t || op.amp_mode != config.amp_mode) return false;
    const auto powers = snr_to_powers(op.snr_db, op.amp_mode);
    const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    if (!close(powers.p_s, config.p_s) || !close(powers.p_d, config.p_d)) return false;
    return op.amp_mode == AmpMode::Unit || close(powers.p_r, config.p_r);
}

LabeledDataset build_labeled_dataset(std::span<const ChannelSample> channels, const OperatingPoint& op,
                                     const CombinationSet& combos, std::uint64_t seed) {
    if (channels.empty()) throw InputDomainError("cannot label an empty channel set");
    const auto config = op.config();
    LabeledDataset ds;
    ds.op = op;
    ds.seed = seed;
    ds.labels.reserve(channels.size());
    for (const auto& sample : channels) {
        ds.features.push_back(normalize(build_feature(sample)));
        ds.labels.push_back(oracle_label(sample, config, combos));
    }
    return ds;
}

void write_labeled_csv(std::ostream& out, const LabeledDataset& dataset,
                       const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "# operating_point " << dataset.op.to_string() << " seed=" << dataset.seed << '\n';
    const std::size_t dim = dataset.features.dim();
    for (std::size_t i = 1; i <= dim; ++i) out << "t_" << i << ',';
    out << "label\n";
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        for (const double v : dataset.features.row(r)) out << detail::format_double(v) << ',';
        out << dataset.labels[r].one_based() << '\n';
    }
}

namespace {

void parse_operating_point(std::string_view text, std::size_t line_no, LabeledDataset& ds,
                           bool& have_op) {
    bool snr = false, mode = false, nt = false, ns = false;
    for (const auto token : detail::split(text, ' ')) {
        if (token.empty()) continue;
        const auto eq = token.find('=');
        if (eq == std::string_view::npos) throw ParseError("malformed operating_point token", line_no);
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        if (key == "snr_db") {
            ds.op.snr_db = detail::parse_double(value, line_no);
            snr = true;
        } else if (key == "amp_mode") {
            try {
                ds.op.amp_mode = parse_amp_mode(value);
            } catch (const InputDomainError& e) {
                throw ParseError(e.what(), line_no);
            }
            mode = true;
        } else if (key == "n_t") {
            ds.op.n_t = detail::parse_u64(value, line_no);
            nt = true;
        } else if (key == "n_s") {
            ds.op.n_s = detail::parse_u64(value, line_no);
            ns = true;
        } else if (key == "seed") {
            ds.seed = detail::parse_u64(value, line_no);
        } else {
            throw ParseError("unknown operating_point key '" + std::string(key) + "'", line_no);
        }
    }
    if (!(snr && mode && nt && ns)) throw ParseError("incomplete operating_point line", line_no);
    if (ds.op.n_t < 1 || ds.op.n_t > ds.op.n_s) throw ParseError("invalid n_t/n_s in operating_point", line_no);
    have_op = true;
}

}  // namespace

LabeledDataset read_labeled_csv(std::istream& in) {
    constexpr std::string_view kOpPrefix = "# operating_point ";
    LabeledDataset ds;
    std::string line;
    std::size_t line_no = 0;
    bool have_op = false;
    bool have_header = false;
    std::size_t dim = 0;
    while (detail::next_line(in, line, line_no)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (line.starts_with(kOpPrefix)) {
                parse_operating_point(std::string_view(line).substr(kOpPrefix.size()), line_no, ds, have_op);
            }
            continue;
        }
        const auto fields = detail::split(line, ',');
        if (!have_header) {
            if (!have_op) throw ParseError("labeled CSV is missing its operating_point line", line_no);
            if (fields.size() < 2 || detail::trim(fields.back()) != "label") {
                throw ParseError("labeled CSV header must be t_1,...,t_N,label", line_no);
            }
            dim = fields.size() - 1;
            if (dim != ds.op.feature_dim()) {
                throw ParseError("feature count " + std::to_string(dim) + " does not match n_s+1=" +
                                     std::to_string(ds.op.feature_dim()),
                                 line_no);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != dim + 1) {
            throw ParseError("expected " + std::to_string(dim + 1) + " fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        std::vector<double> row(dim);
        for (std::size_t i = 0; i < dim; ++i) row[i] = detail::parse_double(fields[i], line_no);
        const auto label = detail::parse_u64(fields[dim], line_no);
        if (label < 1 || label > ds.class_count()) {
            throw ParseError("label " + std::to_string(label) + " outside [1, " +
                                 std::to_string(ds.class_count()) + "]",
                             line_no);
        }
        ds.features.push_back(row);
        ds.labels.push_back(ClassLabel::from_one_based(label));
    }
    if (!have_header) throw ParseError("labeled CSV has no header row", line_no);
    if (ds.labels.empty()) throw ParseError("labeled CSV has no rows", line_no);
    return ds;
}

}  // namespace tas
