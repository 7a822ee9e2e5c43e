#include <json.hpp>

#include "tas/classifiers.hpp"
#include "tas/error.hpp"

namespace tas {

using nlohmann::json;

namespace {

json op_to_json(const OperatingPoint& op) {
    return {{"n_s", op.n_s}, {"n_t", op.n_t}, {"snr_db", op.snr_db}, {"amp_mode", to_string(op.amp_mode)}};
}

OperatingPoint op_from_json(const json& j) {
    OperatingPoint op;
    op.n_s = j.at("n_s").get<std::size_t>();
    op.n_t = j.at("n_t").get<std::size_t>();
    op.snr_db = j.at("snr_db").get<double>();
    op.amp_mode = parse_amp_mode(j.at("amp_mode").get<std::string>());
    if (op.n_t < 1 || op.n_t > op.n_s) throw ParseError("model operating point has invalid n_t/n_s");
    return op;
}

json matrix_to_json(const FeatureMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

FeatureMatrix matrix_from_json(const json& j, std::size_t dim) {
    FeatureMatrix m(0, dim);
    for (const auto& row : j) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != dim) throw ParseError("model matrix row has the wrong length");
        m.push_back(values);
    }
    return m;
}

json to_json(const SvmModel& m) {
    json coef = json::array();
    const std::size_t n_sv = m.support.rows();
    for (std::size_t l = 0; l < m.class_count; ++l) {
        coef.push_back(std::vector<double>(m.coef.begin() + static_cast<std::ptrdiff_t>(l * n_sv),
                                           m.coef.begin() + static_cast<std::ptrdiff_t>((l + 1) * n_sv)));
    }
    return {{"hyperparameters", {{"c", m.c}, {"sigma", m.sigma}, {"rbf_form", to_string(m.form)}}},
            {"dim", m.dim},
            {"class_count", m.class_count},
            {"present", m.present},
            {"support_vectors", matrix_to_json(m.support)},
            {"coefficients", coef}};
}

json to_json(const NbModel& m) {
    return {{"hyperparameters", {{"use_priors", m.use_priors}, {"variance_floor", m.variance_floor}}},
            {"dim", m.dim},
            {"class_count", m.class_count},
            {"counts", m.counts},
            {"mean", m.mean},
            {"variance", m.variance}};
}

json to_json(const KnnModel& m) {
    std::vector<std::size_t> labels;
    labels.reserve(m.labels.size());
    for (const auto& l : m.labels) labels.push_back(l.one_based());
    return {{"hyperparameters", {{"k", m.k}}},
            {"dim", m.points.dim()},
            {"class_count", m.class_count},
            {"points", matrix_to_json(m.points)},
            {"labels", labels}};
}

void check_class_count(std::size_t class_count, const OperatingPoint& op) {
    if (class_count != op.class_count()) throw ParseError("model class_count does not match its operating point");
}

SvmModel svm_from_json(const json& j, const OperatingPoint& op) {
    SvmModel m;
    m.op = op;
    const auto& hp = j.at("hyperparameters");
    m.c = hp.at("c").get<double>();
    m.sigma = hp.at("sigma").get<double>();
    m.form = parse_rbf_form(hp.at("rbf_form").get<std::string>());
    m.dim = j.at("dim").get<std::size_t>();
    m.class_count = j.at("class_count").get<std::size_t>();
    check_class_count(m.class_count, op);
    m.present = j.at("present").get<std::vector<std::uint8_t>>();
    m.support = matrix_from_json(j.at("support_vectors"), m.dim);
    const auto& coef = j.at("coefficients");
    if (m.present.size() != m.class_count || coef.size() != m.class_count) {
        throw ParseError("SVM model arrays do not match class_count");
    }
    for (const auto& row : coef) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != m.support.rows()) throw ParseError("SVM coefficient row has the wrong length");
        m.coef.insert(m.coef.end(), values.begin(), values.end());
    }
    if (!(m.sigma > 0.0) || !(m.c > 0.0)) throw ParseError("SVM hyperparameters must be positive");
    return m;
}

NbModel nb_from_json(const json& j, const OperatingPoint& op) {
    NbModel m;
    m.op = op;
    const auto& hp = j.at("hyperparameters");
    m.use_priors = hp.at("use_priors").get<bool>();
    m.variance_floor = hp.at("variance_floor").get<double>();
    m.dim = j.at("dim").get<std::size_t>();
    m.class_count = j.at("class_count").get<std::size_t>();
    check_class_count(m.class_count, op);
    m.counts = j.at("counts").get<std::vector<std::size_t>>();
    m.mean = j.at("mean").get<std::vector<double>>();
    m.variance = j.at("variance").get<std::vector<double>>();
    if (m.counts.size() != m.class_count || m.mean.size() != m.class_count * m.dim ||
        m.variance.size() != m.class_count * m.dim) {
        throw ParseError("naive Bayes model arrays do not match class_count x dim");
    }
    return m;
}

KnnModel knn_from_json(const json& j, const OperatingPoint& op) {
    KnnModel m;
    m.op = op;
    m.k = j.at("hyperparameters").at("k").get<std::size_t>();
    const auto dim = j.at("dim").get<std::size_t>();
    m.class_count = j.at("class_count").get<std::size_t>();
    check_class_count(m.class_count, op);
    m.points = matrix_from_json(j.at("points"), dim);
    for (const auto l : j.at("labels").get<std::vector<std::size_t>>()) {
        if (l < 1 || l > m.class_count) throw ParseError("k-NN label outside the combination set");
        m.labels.push_back(ClassLabel::from_one_based(l));
    }
    if (m.labels.size() != m.points.rows()) throw ParseError("k-NN labels do not match stored points");
    if (m.k < 1 || m.k > m.points.rows()) throw ParseError("k-NN k outside [1, training size]");
    return m;
}

}  // namespace

std::string_view model_kind(const ClassifierModel& model) {
    struct {
        std::string_view operator()(const SvmModel&) const { return "svm"; }
        std::string_view operator()(const NbModel&) const { return "nb"; }
        std::string_view operator()(const KnnModel&) const { return "knn"; }
    } visitor;
    return std::visit(visitor, model);
}

const OperatingPoint& model_operating_point(const ClassifierModel& model) {
    return std::visit([](const auto& m) -> const OperatingPoint& { return m.op; }, model);
}

ClassLabel predict(const ClassifierModel& model, std::span<const double> t) {
    struct {
        std::span<const double> t;
        ClassLabel operator()(const SvmModel& m) const { return svm_predict(m, t); }
        ClassLabel operator()(const NbModel& m) const { return nb_predict(m, t); }
        ClassLabel operator()(const KnnModel& m) const { return knn_predict(m, t); }
    } visitor{t};
    return std::visit(visitor, model);
}

std::string save_model(const ClassifierModel& model, const std::vector<std::string>& provenance) {
    json doc = std::visit([](const auto& m) { return to_json(m); }, model);
    doc["format"] = "tasml-model";
    doc["version"] = kModelFormatVersion;
    doc["kind"] = model_kind(model);
    doc["operating_point"] = op_to_json(model_operating_point(model));
    if (!provenance.empty()) doc["provenance"] = provenance;
    return doc.dump(1) + "\n";
}

ClassifierModel load_model(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ParseError("model document is not valid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        if (!doc.is_object() || doc.value("format", std::string{}) != "tasml-model") {
            throw ParseError("not a tasml model document");
        }
        const int version = doc.at("version").get<int>();
        if (version != kModelFormatVersion) {
            throw UnsupportedVersionError("unsupported model format version " + std::to_string(version) +
                                          " (this build reads version " + std::to_string(kModelFormatVersion) + ")");
        }
        const auto op = op_from_json(doc.at("operating_point"));
        const auto kind = doc.at("kind").get<std::string>();
        if (kind == "svm") return svm_from_json(doc, op);
        if (kind == "nb") return nb_from_json(doc, op);
        if (kind == "knn") return knn_from_json(doc, op);
        throw ParseError("unknown model kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model document: ") + e.what());
    } catch (const InputDomainError& e) {
        throw ParseError(std::string("malformed model document: ") + e.what());
    }
}

}  // namespace tas
