#include <algorithm>
#include <list>
#include <memory>
#include <cmath>
#include <limits>
#include <numeric>

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

#include "tas/classifiers.hpp"
#include "tas/error.hpp"

namespace tas {

std::string_view to_string(RbfForm form) { return form == RbfForm::Squared ? "squared" : "unsquared"; }

RbfForm parse_rbf_form(std::string_view text) {
    if (text == "squared") return RbfForm::Squared;
    if (text == "unsquared") return RbfForm::Unsquared;
    throw InputDomainError("unknown RBF form '" + std::string(text) + "' (expected squared|unsquared)");
}

namespace {

inline double squared_distance(const double* a, const double* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

inline double kernel_from_sqdist(double sq, double inv_two_sigma_sq, RbfForm form) {
    const double arg = form == RbfForm::Squared ? sq : std::sqrt(sq);
    return std::exp(-arg * inv_two_sigma_sq);
}

constexpr double kNone = -std::numeric_limits<double>::infinity();

// Projected gradient magnitude: max(-g if a < C, g if a > 0), i.e. |g| for free variables and
// one-sided at the bounds.
inline double projected(double a, double g, double c) {
    const double up = a < c ? -g : kNone;
    const double down = a > 0.0 ? g : kNone;
    return std::max(up, down);
}

// grad += step * y * k, refresh the violations, return their maximum. The SSE2 path performs the
// same IEEE operations in the same order as the scalar one.
double update_and_scan(double* grad, double* violation, const double* alpha, const double* y, const float* k,
                       double step, double c, std::size_t n) {
    double worst = 0.0;
    std::size_t j = 0;
#if defined(__SSE2__)
    const __m128d vstep = _mm_set1_pd(step);
    const __m128d vc = _mm_set1_pd(c);
    const __m128d vzero = _mm_setzero_pd();
    const __m128d vnone = _mm_set1_pd(kNone);
    const __m128d sign = _mm_set1_pd(-0.0);
    __m128d vworst = vzero;
    for (; j + 2 <= n; j += 2) {
        const __m128d kk = _mm_cvtps_pd(_mm_castsi128_ps(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(k + j))));
        const __m128d g = _mm_add_pd(_mm_loadu_pd(grad + j), _mm_mul_pd(_mm_mul_pd(vstep, _mm_loadu_pd(y + j)), kk));
        _mm_storeu_pd(grad + j, g);
        const __m128d a = _mm_loadu_pd(alpha + j);
        const __m128d below_c = _mm_cmplt_pd(a, vc);
        const __m128d above_0 = _mm_cmpgt_pd(a, vzero);
        const __m128d up = _mm_or_pd(_mm_and_pd(below_c, _mm_xor_pd(g, sign)), _mm_andnot_pd(below_c, vnone));
        const __m128d down = _mm_or_pd(_mm_and_pd(above_0, g), _mm_andnot_pd(above_0, vnone));
        const __m128d v = _mm_max_pd(up, down);
        _mm_storeu_pd(violation + j, v);
        vworst = _mm_max_pd(vworst, v);
    }
    alignas(16) double lanes[2];
    _mm_store_pd(lanes, vworst);
    worst = std::max(lanes[0], lanes[1]);
#endif
    for (; j < n; ++j) {
        const double g = grad[j] + step * y[j] * static_cast<double>(k[j]);
        grad[j] = g;
        violation[j] = projected(alpha[j], g, c);
        worst = std::max(worst, violation[j]);
    }
    return worst;
}

}  // namespace

double rbf_kernel(std::span<const double> a, std::span<const double> b, double sigma, RbfForm form) {
    if (a.size() != b.size()) throw InputDomainError("kernel arguments differ in length");
    return kernel_from_sqdist(squared_distance(a.data(), b.data(), a.size()), 1.0 / (2.0 * sigma * sigma),
                              form);
}

struct KernelRowCache::Impl {
    struct Entry {
        std::size_t index;
        std::unique_ptr<float[]> values;
    };
    std::list<Entry> lru;  // front = most recent
    std::vector<std::list<Entry>::iterator> where;
    std::vector<std::uint8_t> cached;
    std::size_t capacity_rows = 1;
};

KernelRowCache::KernelRowCache(const FeatureMatrix& x, double sigma, RbfForm form, std::size_t budget_bytes)
    : x_(x), inv_two_sigma_sq_(1.0 / (2.0 * sigma * sigma)), form_(form), impl_(new Impl) {
    const std::size_t row_bytes = std::max<std::size_t>(1, x.rows()) * sizeof(float);
    impl_->capacity_rows = std::max<std::size_t>(2, budget_bytes / row_bytes);
    impl_->where.resize(x.rows());
    impl_->cached.assign(x.rows(), 0);
}

KernelRowCache::~KernelRowCache() { delete impl_; }

std::span<const float> KernelRowCache::row(std::size_t i) {
    const std::size_t n = x_.rows();
    auto& lru = impl_->lru;
    if (impl_->cached[i]) {
        ++hits_;
        lru.splice(lru.begin(), lru, impl_->where[i]);
        return {lru.front().values.get(), n};
    }
    ++misses_;
    std::unique_ptr<float[]> values;
    if (lru.size() >= impl_->capacity_rows) {
        auto& victim = lru.back();
        impl_->cached[victim.index] = 0;
        values = std::move(victim.values);
        lru.pop_back();
    } else {
        values = std::make_unique<float[]>(n);
    }
    const std::size_t dim = x_.dim();
    const double* base = x_.data().data();
    const double* xi = base + i * dim;
    for (std::size_t j = 0; j < n; ++j) {
        values[j] = static_cast<float>(
            kernel_from_sqdist(squared_distance(xi, base + j * dim, dim), inv_two_sigma_sq_, form_));
    }
    lru.push_front({i, std::move(values)});
    impl_->where[i] = lru.begin();
    impl_->cached[i] = 1;
    return {lru.front().values.get(), n};
}

double median_pairwise_distance(const FeatureMatrix& features, std::size_t max_rows, std::uint64_t seed) {
    const std::size_t n = features.rows();
    if (n < 2) return 0.0;
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    if (n > max_rows) {
        // Partial Fisher-Yates: the first max_rows entries become a uniform subsample.
        Rng rng({seed, 0});
        for (std::size_t i = 0; i < max_rows; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (n - i));
            std::swap(rows[i], rows[j]);
        }
        rows.resize(max_rows);
    }
    std::vector<double> dist;
    dist.reserve(rows.size() * (rows.size() - 1) / 2);
    for (std::size_t a = 0; a < rows.size(); ++a) {
        for (std::size_t b = a + 1; b < rows.size(); ++b) {
            const auto ra = features.row(rows[a]);
            const auto rb = features.row(rows[b]);
            dist.push_back(std::sqrt(squared_distance(ra.data(), rb.data(), ra.size())));
        }
    }
    const std::size_t mid = dist.size() / 2;
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
    const double upper = dist[mid];
    if (dist.size() % 2 == 1) return upper;
    const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<double> solve_binary_svm(KernelRowCache& kernel, std::span<const int> labels, double c,
                                     double tolerance, std::size_t max_iterations, BinarySvmStats* stats) {
    const std::size_t n = labels.size();

    // Dual: min 1/2 a'Qa - 1'a, 0 <= a <= C, Q_ij = y_i y_j K_ij, Q_ii = 1.
    // grad_i = y_i f_i - 1 where f_i = sum_j a_j y_j K_ij is the decision value at x_i.
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] > 0 ? 1.0 : -1.0;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    std::vector<double> violation(n);

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        violation[i] = projected(alpha[i], grad[i], c);
        worst = std::max(worst, violation[i]);
    }

    std::size_t it = 0;
    for (; it < max_iterations && worst > tolerance; ++it) {
        const std::size_t pick = static_cast<std::size_t>(
            std::find(violation.begin(), violation.end(), worst) - violation.begin());

        const double updated = std::clamp(alpha[pick] - grad[pick], 0.0, c);
        const double step = (updated - alpha[pick]) * y[pick];
        alpha[pick] = updated;
        const float* k = kernel.row(pick).data();
        worst = update_and_scan(grad.data(), violation.data(), alpha.data(), y.data(), k, step, c, n);
    }

    if (stats) {
        stats->iterations = it;
        stats->max_violation = worst;
        stats->support_vectors =
            static_cast<std::size_t>(std::count_if(alpha.begin(), alpha.end(), [](double a) { return a > 0.0; }));
    }
    return alpha;
}

SvmModel svm_train(const LabeledDataset& dataset, const SvmParams& params) {
    if (dataset.size() == 0) throw InputDomainError("cannot train an SVM on an empty dataset");
    if (!(params.c > 0.0) || !std::isfinite(params.c)) throw InputDomainError("SVM penalty C must be positive");
    if (params.sigma && (!(*params.sigma > 0.0) || !std::isfinite(*params.sigma))) {
        throw InputDomainError("SVM bandwidth sigma must be positive");
    }

    const auto& x = dataset.features;
    const std::size_t n = dataset.size();
    const std::size_t classes = dataset.class_count();

    SvmModel model;
    model.op = dataset.op;
    model.dim = x.dim();
    model.class_count = classes;
    model.c = params.c;
    model.form = params.form;
    model.sigma = params.sigma ? *params.sigma
                               : median_pairwise_distance(x, params.sigma_subsample, params.sigma_seed);
    if (!(model.sigma > 0.0)) model.sigma = 1.0;  // every training vector identical

    model.present.assign(classes, 0);
    for (const auto& l : dataset.labels) {
        if (l.value >= classes) throw InputDomainError("training label outside the combination set");
        model.present[l.value] = 1;
    }
    const auto n_present = std::count(model.present.begin(), model.present.end(), std::uint8_t{1});
    if (n_present < 2) return model;  // single class: no support vectors, argmax over one class

    std::vector<std::vector<double>> alphas(classes);
    std::vector<std::vector<int>> signs(classes);
    KernelRowCache kernel(x, model.sigma, params.form, params.cache_mb << 20);
    std::vector<int> y(n);
    for (std::size_t l = 0; l < classes; ++l) {
        if (!model.present[l]) continue;
        for (std::size_t i = 0; i < n; ++i) y[i] = dataset.labels[i].value == l ? 1 : -1;
        alphas[l] = solve_binary_svm(kernel, y, params.c, params.tolerance, params.max_epochs * n);
        signs[l] = y;
    }

    std::vector<std::size_t> sv;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < classes; ++l) {
            if (!alphas[l].empty() && alphas[l][i] > 0.0) {
                sv.push_back(i);
                break;
            }
        }
    }
    model.coef.assign(classes * sv.size(), 0.0);
    for (std::size_t s = 0; s < sv.size(); ++s) {
        model.support.push_back(x.row(sv[s]));
        for (std::size_t l = 0; l < classes; ++l) {
            if (!alphas[l].empty()) model.coef[l * sv.size() + s] = alphas[l][sv[s]] * signs[l][sv[s]];
        }
    }
    return model;
}

std::vector<double> svm_decision_values(const SvmModel& model, std::span<const double> t) {
    if (!model.trained()) throw ConfigurationError("SVM model is not trained");
    if (t.size() != model.dim) {
        throw InputDomainError("query has " + std::to_string(t.size()) + " features, model expects " +
                               std::to_string(model.dim));
    }
    const std::size_t n_sv = model.support.rows();
    const double inv = 1.0 / (2.0 * model.sigma * model.sigma);
    std::vector<double> values(model.class_count, 0.0);
    for (std::size_t s = 0; s < n_sv; ++s) {
        const double k =
            kernel_from_sqdist(squared_distance(t.data(), model.support.row(s).data(), model.dim), inv, model.form);
        for (std::size_t l = 0; l < model.class_count; ++l) values[l] += model.coef[l * n_sv + s] * k;
    }
    for (std::size_t l = 0; l < model.class_count; ++l) {
        if (!model.present[l]) values[l] = -std::numeric_limits<double>::infinity();
    }
    return values;
}

ClassLabel svm_predict(const SvmModel& model, std::span<const double> t) {
    return argmax_label(svm_decision_values(model, t));
}

}  // namespace tas
