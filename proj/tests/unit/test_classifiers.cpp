#include <cmath>

#include <gtest/gtest.h>

#include "tas/channel.hpp"
#include "tas/classifiers.hpp"
#include "tas/error.hpp"
#include "tas/features.hpp"
#include "tas/rng.hpp"
#include "tas/selector.hpp"

namespace tas {
namespace {

// `classes` distinct classes need an operating point with that many combinations: n_s = classes, n_t = 1.
LabeledDataset toy(std::size_t classes, const std::vector<std::vector<double>>& x, const std::vector<std::size_t>& y) {
    LabeledDataset ds;
    ds.op = OperatingPoint{classes, 1, 0.0, AmpMode::Unit};
    for (std::size_t i = 0; i < x.size(); ++i) {
        ds.features.push_back(x[i]);
        ds.labels.push_back(ClassLabel{y[i]});
    }
    return ds;
}

LabeledDataset three_clusters() {
    Rng rng({1234, 0});
    const double centers[3][2] = {{-0.5, -0.4}, {0.5, -0.4}, {0.0, 0.5}};
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> y;
    for (std::size_t c = 0; c < 3; ++c) {
        for (int i = 0; i < 50; ++i) {
            x.push_back({centers[c][0] + 0.05 * (rng.uniform() - 0.5), centers[c][1] + 0.05 * (rng.uniform() - 0.5)});
            y.push_back(c);
        }
    }
    return toy(3, x, y);
}

LabeledDataset tas_dataset(std::size_t m, AmpMode mode, double snr, std::uint64_t seed) {
    const OperatingPoint op{6, 1, snr, mode};
    return build_labeled_dataset(generate_dataset(RngSpec{seed, 0}, m, 6), op, enumerate_combinations(6, 1), seed);
}

std::size_t training_correct(const ClassifierModel& model, const LabeledDataset& ds) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) ok += predict(model, ds.features.row(i)) == ds.labels[i];
    return ok;
}

TEST(Svm, TwoSeparatedClusters) {
    Rng rng({5, 5});
    std::vector<std::vector<double>> x;
    std::vector<std::size_t> y;
    for (int i = 0; i < 20; ++i) {
        x.push_back({-0.5 + 0.02 * (rng.uniform() - 0.5)});
        y.push_back(0);
        x.push_back({0.5 + 0.02 * (rng.uniform() - 0.5)});
        y.push_back(1);
    }
    const auto ds = toy(2, x, y);
    SvmParams p;
    p.c = 10;
    const auto m = svm_train(ds, p);
    EXPECT_EQ(training_correct(m, ds), ds.size());
    EXPECT_EQ(svm_predict(m, std::vector<double>{-0.5}).value, 0u);
}

TEST(Svm, SymmetricPairTiesToLowestClass) {
    const auto ds = toy(2, {{-0.3}, {0.3}}, {0, 1});
    // Solved to machine precision: the two dual coefficients coincide and the decision values tie.
    SvmParams p;
    p.sigma = 0.5;
    p.tolerance = 0.0;
    p.max_epochs = 1000;
    const auto m = svm_train(ds, p);
    ASSERT_EQ(m.coef.size(), 4u);
    EXPECT_EQ(m.coef[0], -m.coef[1]);
    EXPECT_EQ(svm_predict(m, std::vector<double>{0.0}).value, 0u);
    EXPECT_EQ(svm_predict(m, std::vector<double>{0.3}).value, 1u);
}

TEST(Svm, SingleClassAlwaysPredictsIt) {
    const auto ds = toy(3, {{0.1}, {0.2}, {0.3}}, {2, 2, 2});
    const auto m = svm_train(ds);
    for (double q : {-5.0, 0.0, 0.25, 9.0}) EXPECT_EQ(svm_predict(m, std::vector<double>{q}).value, 2u);
}

TEST(Svm, ErrorPaths) {
    const auto ds = three_clusters();
    SvmParams p;
    p.c = 0;
    EXPECT_THROW(svm_train(ds, p), InputDomainError);
    p = {};
    p.sigma = -1.0;
    EXPECT_THROW(svm_train(ds, p), InputDomainError);
    EXPECT_THROW(svm_train(LabeledDataset{}), InputDomainError);
    const auto m = svm_train(ds);
    EXPECT_THROW(svm_predict(m, std::vector<double>{1.0, 2.0, 3.0}), InputDomainError);
    EXPECT_THROW(svm_predict(SvmModel{}, std::vector<double>{1.0, 2.0}), ConfigurationError);
}

TEST(Svm, SolverReachesTolerance) {
    const auto ds = tas_dataset(600, AmpMode::Unit, 15, 8);
    const double sigma = median_pairwise_distance(ds.features, 1000, 0x5eed);
    KernelRowCache cache(ds.features, sigma, RbfForm::Squared, 1 << 20);
    std::vector<int> y(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) y[i] = ds.labels[i].value == 0 ? 1 : -1;
    BinarySvmStats stats;
    const auto alpha = solve_binary_svm(cache, y, 10.0, 1e-3, 1000000, &stats);
    EXPECT_LE(stats.max_violation, 1e-3);
    for (double a : alpha) {
        ASSERT_GE(a, 0.0);
        ASSERT_LE(a, 10.0);
    }
    EXPECT_GT(cache.hits(), 0u);
}

TEST(Svm, KernelForms) {
    const std::vector<double> a{0, 0}, b{3, 4};
    EXPECT_DOUBLE_EQ(rbf_kernel(a, b, 2.0, RbfForm::Squared), std::exp(-25.0 / 8.0));
    EXPECT_DOUBLE_EQ(rbf_kernel(a, b, 2.0, RbfForm::Unsquared), std::exp(-5.0 / 8.0));
    EXPECT_DOUBLE_EQ(rbf_kernel(a, a, 0.3, RbfForm::Squared), 1.0);
    EXPECT_EQ(parse_rbf_form("unsquared"), RbfForm::Unsquared);
}

TEST(Svm, MedianPairwiseDistanceSmallSet) {
    FeatureMatrix m;
    for (double v : {0.0, 1.0, 3.0}) m.push_back(std::vector<double>{v});
    // Distances 1, 2, 3.
    EXPECT_DOUBLE_EQ(median_pairwise_distance(m, 1000, 1), 2.0);
    m.push_back(std::vector<double>{7.0});
    // Distances 1, 2, 3, 4, 6, 7.
    EXPECT_DOUBLE_EQ(median_pairwise_distance(m, 1000, 1), 3.5);
}

TEST(SvmProperty, DecisionValuesContinuous) {
    const auto ds = tas_dataset(400, AmpMode::Constrained, 15, 9);
    const auto m = svm_train(ds);
    Rng rng({10, 0});
    for (int i = 0; i < 100; ++i) {
        const auto t = normalize(build_feature(sample_channel(rng, 6)));
        auto tp = t;
        for (auto& v : tp) v += 1e-9 / std::sqrt(7.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const auto a = svm_decision_values(m, t), b = svm_decision_values(m, tp);
        for (std::size_t l = 0; l < a.size(); ++l) {
            if (std::isinf(a[l])) continue;
            ASSERT_LE(std::abs(a[l] - b[l]), 1e-6);
        }
    }
}

TEST(NaiveBayes, ToyMeansAndPredictions) {
    const auto ds = toy(2, {{0, 0}, {0.2, 0}, {1, 1}, {0.8, 1}}, {0, 0, 1, 1});
    const auto m = nb_train(ds);
    EXPECT_NEAR(m.mean[0], 0.1, 1e-15);
    EXPECT_EQ(m.mean[1], 0.0);
    EXPECT_NEAR(m.mean[2], 0.9, 1e-15);
    EXPECT_EQ(m.mean[3], 1.0);
    EXPECT_EQ(m.variance[1], 1e-9);  // constant feature within class 1
    EXPECT_NEAR(m.variance[0], 0.01, 1e-15);
    EXPECT_EQ(nb_predict(m, std::vector<double>{0.1, 0}).value, 0u);
    EXPECT_EQ(nb_predict(m, std::vector<double>{0.9, 1}).value, 1u);
    EXPECT_THROW(nb_predict(m, std::vector<double>{0.9}), InputDomainError);
    EXPECT_THROW(nb_train(LabeledDataset{}), InputDomainError);
}

TEST(NaiveBayes, PriorsShiftScoresByLogFrequency) {
    const auto ds = toy(2, {{0.0}, {0.1}, {0.2}, {0.3}, {0.9}, {1.1}}, {0, 0, 0, 0, 1, 1});
    NbParams with;
    with.use_priors = true;
    const auto a = nb_train(ds), b = nb_train(ds, with);
    const std::vector<double> q{0.5};
    const auto sa = nb_log_scores(a, q), sb = nb_log_scores(b, q);
    EXPECT_NEAR(sb[0] - sa[0], std::log(4.0 / 6.0), 1e-12);
    EXPECT_NEAR(sb[1] - sa[1], std::log(2.0 / 6.0), 1e-12);
}

TEST(NaiveBayesProperty, ArgmaxInvariantUnderUniformMonotoneTransform) {
    const auto ds = tas_dataset(2000, AmpMode::Unit, 15, 11);
    const auto m = nb_train(ds);
    Rng rng({12, 0});
    for (int i = 0; i < 500; ++i) {
        const auto t = normalize(build_feature(sample_channel(rng, 6)));
        auto scores = nb_log_scores(m, t);
        const auto label = nb_predict(m, t);
        ASSERT_EQ(argmax_label(scores), label);
        const double shift = 100.0 * (rng.uniform() - 0.5);
        for (auto& s : scores) s = 3.0 * (s + shift) + 1.0;
        ASSERT_EQ(argmax_label(scores), label);
        for (auto& s : scores) s = std::atan(s / 1e6);
        ASSERT_EQ(argmax_label(scores), label);
    }
}

TEST(NaiveBayes, UnseenClassNeverPredicted) {
    const auto ds = toy(3, {{0.0}, {0.1}, {1.0}, {1.1}}, {0, 0, 2, 2});
    const auto m = nb_train(ds);
    for (double q : {-1.0, 0.5, 0.55, 3.0}) EXPECT_NE(nb_predict(m, std::vector<double>{q}).value, 1u);
}

TEST(Knn, Examples) {
    const auto two = knn_train(toy(2, {{0, 0}, {1, 1}}, {0, 1}), 1);
    EXPECT_EQ(knn_predict(two, std::vector<double>{0.1, 0.1}).value, 0u);
    EXPECT_EQ(knn_predict(two, std::vector<double>{1, 1}).value, 1u);
    const auto three = knn_train(toy(2, {{0}, {2}, {2.1}}, {0, 1, 1}), 3);
    EXPECT_EQ(knn_predict(three, std::vector<double>{1.2}).value, 1u);
    EXPECT_THROW(knn_predict(three, std::vector<double>{1, 2}), InputDomainError);
    EXPECT_THROW(knn_train(toy(2, {{0}}, {0}), 2), InputDomainError);
    EXPECT_THROW(knn_train(toy(2, {{0}}, {0}), 0), InputDomainError);
}

TEST(Knn, DistanceTieGoesToLowerTrainingIndex) {
    const auto m = knn_train(toy(2, {{-1}, {1}}, {1, 0}), 1);
    EXPECT_EQ(knn_predict(m, std::vector<double>{0}).value, 1u);
}

TEST(Knn, VoteTieGoesToLowestLabel) {
    const auto m = knn_train(toy(3, {{-1}, {1}}, {2, 1}), 2);
    EXPECT_EQ(knn_predict(m, std::vector<double>{0.5}).value, 1u);
}

TEST(KnnProperty, SelfPredictionIdentity) {
    const auto ds = tas_dataset(3000, AmpMode::Constrained, 10, 13);
    const auto m = knn_train(ds, 1);
    EXPECT_EQ(training_correct(m, ds), ds.size());
}

TEST(ClassifierProperty, ThreeClustersFullTrainingAccuracy) {
    const auto ds = three_clusters();
    EXPECT_EQ(training_correct(svm_train(ds), ds), ds.size());
    EXPECT_EQ(training_correct(nb_train(ds), ds), ds.size());
    EXPECT_EQ(training_correct(knn_train(ds, 1), ds), ds.size());
}

TEST(ClassifierProperty, PredictionsDeterministic) {
    const auto ds = tas_dataset(500, AmpMode::Unit, 20, 14);
    const auto s1 = svm_train(ds), s2 = svm_train(ds);
    EXPECT_EQ(save_model(s1), save_model(s2));
    EXPECT_EQ(save_model(nb_train(ds)), save_model(nb_train(ds)));
}

class RoundTrip : public ::testing::TestWithParam<int> {};

TEST_P(RoundTrip, SaveLoadPredictsIdentically) {
    const auto ds = tas_dataset(800, AmpMode::Constrained, 15, 15);
    ClassifierModel model;
    switch (GetParam()) {
        case 0: model = svm_train(ds); break;
        case 1: model = nb_train(ds, NbParams{true, 1e-9}); break;
        default: model = knn_train(ds, 3); break;
    }
    const auto text = save_model(model, {"tasml test"});
    const auto back = load_model(text);
    EXPECT_EQ(model_kind(back), model_kind(model));
    EXPECT_EQ(model_operating_point(back), ds.op);
    EXPECT_EQ(save_model(back, {"tasml test"}), text);
    Rng rng({16, 0});
    for (int i = 0; i < 100; ++i) {
        const auto t = normalize(build_feature(sample_channel(rng, 6)));
        ASSERT_EQ(predict(back, t), predict(model, t));
    }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, RoundTrip, ::testing::Values(0, 1, 2));

TEST(ModelIo, MalformedDocuments) {
    const auto ds = tas_dataset(50, AmpMode::Unit, 5, 17);
    const auto text = save_model(knn_train(ds, 1));
    EXPECT_THROW(load_model(text.substr(0, text.size() / 2)), ParseError);
    EXPECT_THROW(load_model("{}"), ParseError);
    EXPECT_THROW(load_model("[1,2]"), ParseError);

    auto bumped = text;
    const auto pos = bumped.find("\"version\": 1");
    ASSERT_NE(pos, std::string::npos);
    bumped.replace(pos, 12, "\"version\": 2");
    EXPECT_THROW(load_model(bumped), UnsupportedVersionError);

    auto bad_kind = text;
    bad_kind.replace(bad_kind.find("\"knn\""), 5, "\"mlp\"");
    EXPECT_THROW(load_model(bad_kind), ParseError);
}

}  // namespace
}  // namespace tas
