#include <algorithm>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "tas/channel.hpp"
#include "tas/error.hpp"
#include "tas/features.hpp"
#include "tas/rng.hpp"
#include "tas/selector.hpp"

namespace tas {
namespace {

void expect_vec_near(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << i;
}

TEST(Features, BuildFeature) {
    ChannelSample s{{{3, 4}, 0, 0, 0, 0, 0}, 1};
    expect_vec_near(build_feature(s), {5, 0, 0, 0, 0, 0, 1}, 0.0);
    ChannelSample z{std::vector<std::complex<double>>(6), 0};
    expect_vec_near(build_feature(z), std::vector<double>(7, 0.0), 0.0);
    EXPECT_EQ(make_feature_vector(s).normalized.size(), 7u);
}

TEST(Features, NormalizeExamples) {
    const std::vector<double> a{1, 2, 3}, b{4, 4, 4, 4}, c{0, 1};
    expect_vec_near(normalize(a), {-0.5, 0, 0.5}, 1e-15);
    expect_vec_near(normalize(b), {0, 0, 0, 0}, 0.0);
    expect_vec_near(normalize(c), {-0.5, 0.5}, 1e-15);
}

TEST(FeaturesProperty, MeanZeroRangeOneAndShiftScaleInvariant) {
    Rng rng({808, 0});
    for (int i = 0; i < 10000; ++i) {
        const auto d = build_feature(sample_channel(rng, 6));
        const auto t = normalize(d);
        const double mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
        const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
        ASSERT_NEAR(mean, 0.0, 1e-12);
        ASSERT_NEAR(*hi - *lo, 1.0, 1e-12);

        const double shift = 10.0 * rng.uniform() - 5.0;
        const double scale = 0.01 + 100.0 * rng.uniform();
        std::vector<double> shifted(d), scaled(d);
        for (auto& v : shifted) v += shift;
        for (auto& v : scaled) v *= scale;
        const auto ts = normalize(shifted), tc = normalize(scaled);
        for (std::size_t k = 0; k < t.size(); ++k) {
            ASSERT_NEAR(ts[k], t[k], 1e-12);
            ASSERT_NEAR(tc[k], t[k], 1e-12);
        }
    }
}

TEST(FeatureMatrix, PushBackChecksDimension) {
    FeatureMatrix m;
    const std::vector<double> a{1, 2, 3}, b{1, 2};
    m.push_back(a);
    m.push_back(a);
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m.dim(), 3u);
    EXPECT_THROW(m.push_back(b), InputDomainError);
}

TEST(OperatingPoint, MatchesConfig) {
    const OperatingPoint op{6, 2, 15, AmpMode::Constrained};
    EXPECT_TRUE(matches(op, op.config()));
    EXPECT_FALSE(matches(op, make_config(6, 1, 15, AmpMode::Constrained)));
    EXPECT_FALSE(matches(op, make_config(6, 2, 20, AmpMode::Constrained)));
    EXPECT_EQ(op.feature_dim(), 7u);
    EXPECT_EQ(op.class_count(), 15u);
    EXPECT_THROW(require_same_operating_point(op, OperatingPoint{6, 1, 15, AmpMode::Constrained}, "x"),
                 ConfigurationError);
    EXPECT_NO_THROW(require_same_operating_point(op, op, "x"));
}

TEST(LabeledDataset, BuildAndReproduce) {
    const auto channels = generate_dataset(RngSpec{3, 0}, 10000, 6);
    const OperatingPoint op{6, 1, 15, AmpMode::Constrained};
    const auto combos = enumerate_combinations(6, 1);
    const auto ds = build_labeled_dataset(channels, op, combos, 3);
    ASSERT_EQ(ds.size(), 10000u);
    ASSERT_EQ(ds.features.rows(), 10000u);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        ASSERT_LT(ds.labels[i].value, combos.size());
        const auto t = normalize(build_feature(channels[i]));
        for (std::size_t k = 0; k < t.size(); ++k) ASSERT_EQ(ds.features.row(i)[k], t[k]);
        if (i < 500) {
            ASSERT_EQ(ds.labels[i], oracle_label(channels[i], op.config(), combos));
        }
    }
    const auto again = build_labeled_dataset(channels, op, combos, 3);
    EXPECT_EQ(again.labels, ds.labels);
}

TEST(LabeledDataset, ZeroChannelRow) {
    const std::vector<ChannelSample> one{{std::vector<std::complex<double>>(6), 0}};
    const auto ds = build_labeled_dataset(one, OperatingPoint{6, 1, 10, AmpMode::Unit}, enumerate_combinations(6, 1));
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds.labels[0].one_based(), 1u);
    for (double v : ds.features.row(0)) EXPECT_EQ(v, 0.0);
}

TEST(LabeledDataset, LabelsDependOnSnrInConstrainedMode) {
    const auto channels = generate_dataset(RngSpec{17, 0}, 2000, 6);
    const auto combos = enumerate_combinations(6, 1);
    const auto lo = build_labeled_dataset(channels, {6, 1, 0, AmpMode::Constrained}, combos);
    const auto hi = build_labeled_dataset(channels, {6, 1, 30, AmpMode::Constrained}, combos);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (lo.labels[i] != hi.labels[i]) ++differ;
    }
    EXPECT_GT(differ, 0u);
}

TEST(LabeledCsv, RoundTripAndValidation) {
    const auto channels = generate_dataset(RngSpec{21, 0}, 100, 6);
    const OperatingPoint op{6, 2, 25, AmpMode::Unit};
    const auto ds = build_labeled_dataset(channels, op, enumerate_combinations(6, 2), 21);
    std::stringstream ss;
    write_labeled_csv(ss, ds, {"note"});
    const std::string text = ss.str();
    EXPECT_NE(text.find("# operating_point snr_db=25 amp_mode=unit n_t=2 n_s=6 seed=21"), std::string::npos);
    const auto back = read_labeled_csv(ss);
    EXPECT_EQ(back.op, op);
    EXPECT_EQ(back.seed, 21u);
    EXPECT_EQ(back.labels, ds.labels);
    EXPECT_EQ(back.features, ds.features);

    std::istringstream no_op("t_1,t_2,t_3,t_4,t_5,t_6,t_7,label\n0,0,0,0,0,0,0,1\n");
    EXPECT_THROW(read_labeled_csv(no_op), ParseError);
    std::istringstream bad_label(
        "# operating_point snr_db=25 amp_mode=unit n_t=1 n_s=6 seed=0\nt_1,t_2,t_3,t_4,t_5,t_6,t_7,label\n"
        "0,0,0,0,0,0,0,7\n");
    EXPECT_THROW(read_labeled_csv(bad_label), ParseError);
}

}  // namespace
}  // namespace tas
