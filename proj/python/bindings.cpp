#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "tas/channel.hpp"
#include "tas/classifiers.hpp"
#include "tas/error.hpp"
#include "tas/evaluation.hpp"
#include "tas/features.hpp"
#include "tas/run_config.hpp"
#include "tas/secrecy.hpp"
#include "tas/selector.hpp"

namespace py = pybind11;
using namespace tas;

namespace {

using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

// h: (m, n_s), g: (m,) complex arrays -> channel samples.
std::vector<ChannelSample> to_samples(const ComplexArray& h, const ComplexArray& g) {
    if (h.ndim() != 2 || g.ndim() != 1 || h.shape(0) != g.shape(0)) {
        throw InputDomainError("expected h with shape (m, n_s) and g with shape (m,)");
    }
    const auto hv = h.unchecked<2>();
    const auto gv = g.unchecked<1>();
    std::vector<ChannelSample> out(static_cast<std::size_t>(h.shape(0)));
    for (py::ssize_t i = 0; i < h.shape(0); ++i) {
        auto& s = out[static_cast<std::size_t>(i)];
        s.h.resize(static_cast<std::size_t>(h.shape(1)));
        for (py::ssize_t k = 0; k < h.shape(1); ++k) s.h[static_cast<std::size_t>(k)] = hv(i, k);
        s.g = gv(i);
    }
    return out;
}

ChannelSample to_sample(const ComplexArray& h, std::complex<double> g) {
    if (h.ndim() != 1) throw InputDomainError("expected a 1-D h vector");
    ChannelSample s;
    const auto hv = h.unchecked<1>();
    for (py::ssize_t k = 0; k < h.shape(0); ++k) s.h.push_back(hv(k));
    s.g = g;
    return s;
}

AntennaSubset to_subset(const std::vector<std::size_t>& one_based) {
    std::vector<std::size_t> idx;
    for (auto v : one_based) {
        if (v < 1) throw InputDomainError("antenna indices are 1-based");
        idx.push_back(v - 1);
    }
    return AntennaSubset(std::move(idx));
}

py::array_t<double> to_numpy(const FeatureMatrix& m) {
    py::array_t<double> out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.dim())});
    std::copy(m.data().begin(), m.data().end(), out.mutable_data());
    return out;
}

py::array_t<std::int64_t> labels_to_numpy(const std::vector<ClassLabel>& labels) {
    py::array_t<std::int64_t> out(static_cast<py::ssize_t>(labels.size()));
    auto v = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < labels.size(); ++i) v(static_cast<py::ssize_t>(i)) = labels[i].one_based();
    return out;
}

FeatureMatrix from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
    if (x.ndim() != 2) throw InputDomainError("expected a 2-D feature matrix");
    FeatureMatrix m(static_cast<std::size_t>(x.shape(0)), static_cast<std::size_t>(x.shape(1)));
    std::copy(x.data(), x.data() + x.size(), m.row(0).data());
    return m;
}

py::dict metrics_dict(const PointMetrics& p) {
    py::dict d;
    d["scheme"] = std::string(to_string(p.scheme));
    d["amp_mode"] = std::string(to_string(p.op.amp_mode));
    d["n_t"] = p.op.n_t;
    d["snr_db"] = p.op.snr_db;
    d["mean_rate"] = p.mean_rate;
    d["mean_rate_unclamped"] = p.mean_rate_unclamped;
    d["rate_std_error"] = p.rate_std_error;
    d["sop"] = p.sop;
    d["accuracy"] = p.accuracy;
    d["r_t"] = p.r_t;
    d["m_train"] = p.m_train;
    d["m_test"] = p.m_test;
    d["seed"] = p.seed;
    d["train_seconds"] = p.train_seconds;
    return d;
}

struct Model {
    ClassifierModel inner;

    std::string kind() const { return std::string(model_kind(inner)); }
    const OperatingPoint& op() const { return model_operating_point(inner); }

    py::array_t<std::int64_t> predict(const py::array_t<double, py::array::c_style | py::array::forcecast>& x) const {
        const auto m = from_numpy(x);
        std::vector<ClassLabel> out;
        out.reserve(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(tas::predict(inner, m.row(i)));
        return labels_to_numpy(out);
    }
};

LabeledDataset make_dataset(const OperatingPoint& op,
                            const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                            const std::vector<std::size_t>& labels) {
    LabeledDataset ds;
    ds.op = op;
    ds.features = from_numpy(x);
    if (labels.size() != ds.features.rows()) throw InputDomainError("labels and features differ in length");
    for (auto l : labels) {
        if (l < 1 || l > op.class_count()) throw InputDomainError("label outside the combination set");
        ds.labels.push_back(ClassLabel::from_one_based(l));
    }
    return ds;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Transmit antenna selection for untrusted AF relay networks with destination jamming";
    m.attr("__version__") = kToolVersion;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
    py::register_exception<InputDomainError>(m, "InputDomainError", PyExc_ValueError);

    py::class_<OperatingPoint>(m, "OperatingPoint")
        .def(py::init([](double snr_db, const std::string& amp_mode, std::size_t n_t, std::size_t n_s) {
                 return OperatingPoint{n_s, n_t, snr_db, parse_amp_mode(amp_mode)};
             }),
             py::arg("snr_db"), py::arg("amp_mode") = "constrained", py::arg("n_t") = 1, py::arg("n_s") = 6)
        .def_readonly("snr_db", &OperatingPoint::snr_db)
        .def_readonly("n_t", &OperatingPoint::n_t)
        .def_readonly("n_s", &OperatingPoint::n_s)
        .def_property_readonly("amp_mode", [](const OperatingPoint& op) { return std::string(to_string(op.amp_mode)); })
        .def_property_readonly("class_count", &OperatingPoint::class_count)
        .def("__eq__", [](const OperatingPoint& a, const OperatingPoint& b) { return a == b; })
        .def("__repr__", [](const OperatingPoint& op) { return "OperatingPoint(" + op.to_string() + ")"; });

    m.def(
        "generate_channels",
        [](std::size_t count, std::uint64_t seed, std::uint64_t stream, std::size_t n_s) {
            const auto samples = generate_dataset(RngSpec{seed, stream}, count, n_s);
            py::array_t<std::complex<double>> h({static_cast<py::ssize_t>(count), static_cast<py::ssize_t>(n_s)});
            py::array_t<std::complex<double>> g(static_cast<py::ssize_t>(count));
            auto hv = h.mutable_unchecked<2>();
            auto gv = g.mutable_unchecked<1>();
            for (std::size_t i = 0; i < count; ++i) {
                for (std::size_t k = 0; k < n_s; ++k) hv(i, k) = samples[i].h[k];
                gv(i) = samples[i].g;
            }
            return py::make_tuple(h, g);
        },
        py::arg("m"), py::arg("seed") = 1, py::arg("stream") = 0, py::arg("n_s") = 6,
        "Draw m i.i.d. CN(0,1) channel realisations; returns (h[m, n_s], g[m]).");

    m.def("combinations", [](std::size_t n_s, std::size_t n_t) {
        std::vector<std::vector<std::size_t>> out;
        for (const auto& s : enumerate_combinations(n_s, n_t)) {
            std::vector<std::size_t> v;
            for (auto i : s.indices()) v.push_back(i + 1);
            out.push_back(v);
        }
        return out;
    }, py::arg("n_s"), py::arg("n_t"), "All antenna subsets in label order, 1-based.");

    m.def(
        "sinr",
        [](const ComplexArray& h, std::complex<double> g, const std::vector<std::size_t>& subset, double snr_db,
           const std::string& amp_mode) {
            const auto s = to_sample(h, g);
            const auto sub = to_subset(subset);
            const auto cfg = make_config(s.h.size(), sub.size(), snr_db, parse_amp_mode(amp_mode));
            const auto b = sinr_breakdown(s, sub, cfg);
            const auto r = secrecy_from_sinr(b.gamma_r, b.gamma_d);
            py::dict d;
            d["gamma_r"] = b.gamma_r;
            d["gamma_d"] = b.gamma_d;
            d["beta_sq"] = b.beta_sq;
            d["eff_gain"] = b.eff_gain;
            d["rate_unclamped"] = r.rate_unclamped;
            d["rate"] = r.rate;
            return d;
        },
        py::arg("h"), py::arg("g"), py::arg("subset"), py::arg("snr_db"), py::arg("amp_mode") = "constrained",
        "SINRs, relay gain and secrecy rate of one sample for a 1-based antenna subset.");

    m.def(
        "oracle_labels",
        [](const ComplexArray& h, const ComplexArray& g, const OperatingPoint& op) {
            const auto samples = to_samples(h, g);
            const auto combos = enumerate_combinations(op.n_s, op.n_t);
            const auto cfg = op.config();
            std::vector<ClassLabel> out;
            for (const auto& s : samples) out.push_back(oracle_label(s, cfg, combos));
            return labels_to_numpy(out);
        },
        py::arg("h"), py::arg("g"), py::arg("op"), "Exhaustive-search labels (1-based).");

    m.def(
        "features",
        [](const ComplexArray& h, const ComplexArray& g) {
            FeatureMatrix out;
            for (const auto& s : to_samples(h, g)) out.push_back(make_feature_vector(s).normalized);
            return to_numpy(out);
        },
        py::arg("h"), py::arg("g"), "Per-vector normalised magnitude features, shape (m, n_s + 1).");

    py::class_<Model>(m, "Model")
        .def_property_readonly("kind", &Model::kind)
        .def_property_readonly("operating_point", &Model::op)
        .def("predict", &Model::predict, py::arg("features"), "1-based labels for each feature row.")
        .def("save", [](const Model& self) { return save_model(self.inner); })
        .def_static("load", [](const std::string& text) { return Model{load_model(text)}; }, py::arg("document"));

    m.def(
        "train",
        [](const std::string& scheme, const OperatingPoint& op,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
           const std::vector<std::size_t>& labels, double svm_c, std::optional<double> svm_sigma, std::size_t knn_k,
           bool nb_priors) {
            const auto ds = make_dataset(op, x, labels);
            switch (parse_scheme(scheme)) {
                case Scheme::Svm: {
                    SvmParams p;
                    p.c = svm_c;
                    p.sigma = svm_sigma;
                    py::gil_scoped_release release;
                    return Model{svm_train(ds, p)};
                }
                case Scheme::Nb: return Model{nb_train(ds, NbParams{nb_priors, 1e-9})};
                case Scheme::Knn: return Model{knn_train(ds, knn_k)};
                case Scheme::Conventional: break;
            }
            throw ConfigurationError("the conventional scheme has no model to train");
        },
        py::arg("scheme"), py::arg("op"), py::arg("features"), py::arg("labels"), py::arg("svm_c") = 10.0,
        py::arg("svm_sigma") = py::none(), py::arg("knn_k") = 1, py::arg("nb_priors") = false,
        "Train an svm|nb|knn selector on (features, 1-based labels) recorded at `op`.");

    m.def(
        "run_sweep",
        [](const std::string& config_json) {
            const auto cfg = apply_config_json(RunConfig{}, nlohmann::json::parse(config_json));
            cfg.validate();
            SweepResult result;
            {
                py::gil_scoped_release release;
                result = run_sweep(cfg.sweep_spec());
            }
            py::list out;
            for (const auto& p : result.points) out.append(metrics_dict(p));
            return out;
        },
        py::arg("config_json") = "{}",
        "Run a sweep described by a JSON run configuration; returns one dict per (mode, n_t, snr, scheme).");
}
