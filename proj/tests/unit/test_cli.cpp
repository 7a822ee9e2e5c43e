#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome tas_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = tas::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::size_t count_data_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::size_t rows = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tas_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        unsetenv("TAS_SEED");
    }
    void TearDown() override {
        fs::remove_all(dir_);
        unsetenv("TAS_SEED");
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    void write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name, std::ios::binary) << text;
    }
    fs::path dir_;
};

TEST_F(Cli, GenerateIsDeterministicAndCarriesProvenance) {
    ASSERT_EQ(tas_run({"generate", "--seed", "7", "--m", "50", "--out", path("a.csv")}).code, 0);
    ASSERT_EQ(tas_run({"generate", "--seed", "7", "--m", "50", "--out", path("b.csv")}).code, 0);
    const auto a = slurp(path("a.csv"));
    EXPECT_EQ(a, slurp(path("b.csv")));
    EXPECT_EQ(a.rfind("# tasml 0.1.0 generate\n# config_hash=", 0), 0u);
    EXPECT_NE(a.find(" seed=7\n"), std::string::npos);
    EXPECT_EQ(count_data_rows(a), 50u);
}

TEST_F(Cli, SeedPrecedence) {
    setenv("TAS_SEED", "99", 1);
    auto r = tas_run({"generate", "--m", "1"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find(" seed=99\n"), std::string::npos);

    write("cfg.json", R"({"seed": 5})");
    r = tas_run({"generate", "--m", "1", "--config", path("cfg.json")});
    EXPECT_NE(r.out.find(" seed=5\n"), std::string::npos);

    r = tas_run({"generate", "--m", "1", "--config", path("cfg.json"), "--seed", "3"});
    EXPECT_NE(r.out.find(" seed=3\n"), std::string::npos);

    unsetenv("TAS_SEED");
    r = tas_run({"generate", "--m", "1"});
    EXPECT_NE(r.out.find(" seed=1\n"), std::string::npos);

    setenv("TAS_SEED", "banana", 1);
    r = tas_run({"generate", "--m", "1"});
    EXPECT_NE(r.code, 0);
}

TEST_F(Cli, LabelTrainEvaluatePipeline) {
    ASSERT_EQ(tas_run({"generate", "--seed", "2", "--m", "400", "--out", path("train.csv")}).code, 0);
    ASSERT_EQ(tas_run({"generate", "--seed", "3", "--m", "200", "--out", path("test.csv")}).code, 0);
    const auto before = slurp(path("train.csv"));
    ASSERT_EQ(tas_run({"label", "--in", path("train.csv"), "--snr-db", "10", "--amp-mode", "unit", "--out",
                       path("lab.csv")})
                  .code,
              0);
    EXPECT_EQ(slurp(path("train.csv")), before);  // inputs untouched
    const auto lab = slurp(path("lab.csv"));
    EXPECT_NE(lab.find("# operating_point snr_db=10 amp_mode=unit n_t=1 n_s=6"), std::string::npos);
    EXPECT_NE(lab.find("# config_hash="), std::string::npos);

    for (const std::string scheme : {"svm", "nb", "knn"}) {
        const auto model = path(scheme + ".json");
        ASSERT_EQ(tas_run({"train", "--in", path("lab.csv"), "--scheme", scheme, "--out", model}).code, 0) << scheme;
        const auto text = slurp(model);
        EXPECT_NE(text.find("\"provenance\""), std::string::npos);

        auto r = tas_run({"evaluate", "--model", model, "--in", path("test.csv"), "--snr-db", "10", "--amp-mode",
                          "unit"});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_NE(r.out.find("\"sop\""), std::string::npos);
        EXPECT_NE(r.out.find("\"mean_rate\""), std::string::npos);

        r = tas_run({"evaluate", "--model", model, "--in", path("lab.csv")});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_NE(r.out.find("\"accuracy\""), std::string::npos);
    }
    const auto knn = tas_run({"evaluate", "--model", path("knn.json"), "--in", path("lab.csv")});
    EXPECT_NE(knn.out.find("\"accuracy\": 1.0"), std::string::npos);
}

TEST_F(Cli, OperatingPointMismatchIsAnError) {
    ASSERT_EQ(tas_run({"generate", "--seed", "2", "--m", "100", "--out", path("ch.csv")}).code, 0);
    ASSERT_EQ(tas_run({"label", "--in", path("ch.csv"), "--nt", "2", "--out", path("lab2.csv")}).code, 0);
    ASSERT_EQ(tas_run({"label", "--in", path("ch.csv"), "--nt", "1", "--out", path("lab1.csv")}).code, 0);
    ASSERT_EQ(tas_run({"train", "--in", path("lab2.csv"), "--scheme", "knn", "--out", path("m2.json")}).code, 0);

    auto r = tas_run({"evaluate", "--model", path("m2.json"), "--in", path("lab1.csv")});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("n_t"), std::string::npos);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

    r = tas_run({"evaluate", "--model", path("m2.json"), "--in", path("ch.csv"), "--nt", "1"});
    EXPECT_NE(r.code, 0);
}

TEST_F(Cli, ConfigErrorsNameTheKey) {
    write("bad.json", R"({"m_trian": 10})");
    auto r = tas_run({"generate", "--config", path("bad.json")});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("m_trian"), std::string::npos);

    write("neg.json", R"({"r_t": -1})");
    r = tas_run({"sweep", "--config", path("neg.json")});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("r_t"), std::string::npos);

    write("broken.json", "{\"seed\": ");
    r = tas_run({"generate", "--config", path("broken.json")});
    EXPECT_NE(r.code, 0);
}

TEST_F(Cli, MalformedCsvNamesTheLine) {
    write("bad.csv", "re_h1,im_h1,re_h2,im_h2,re_h3,im_h3,re_h4,im_h4,re_h5,im_h5,re_h6,im_h6,re_g,im_g\n"
                     "1,2,3,4,5,6,7,8,9,10,11,12,13,14\n1,2,3\n");
    const auto r = tas_run({"label", "--in", path("bad.csv")});
    EXPECT_NE(r.code, 0);
    EXPECT_NE(r.err.find("line 3"), std::string::npos);
    EXPECT_NE(tas_run({"label", "--in", path("missing.csv")}).code, 0);
    EXPECT_NE(tas_run({"frobnicate"}).code, 0);
    EXPECT_NE(tas_run({"train", "--in", path("bad.csv"), "--scheme", "tree"}).code, 0);
}

TEST_F(Cli, SweepConfusionBench) {
    write("small.json", R"({"m_train": 40, "m_test": 40, "seed": 4})");
    auto r = tas_run({"sweep", "--config", path("small.json"), "--out", path("sweep.csv"), "--workers", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto sweep = slurp(path("sweep.csv"));
    EXPECT_EQ(count_data_rows(sweep), 112u);
    EXPECT_NE(sweep.find("# config_hash="), std::string::npos);

    r = tas_run({"confusion", "--config", path("small.json"), "--scheme", "knn", "--out", path("cm.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto cm = slurp(path("cm.csv"));
    EXPECT_NE(cm.find("oracle\\predicted,1,2,3,4,5,6\n"), std::string::npos);
    EXPECT_EQ(count_data_rows(cm), 6u);

    r = tas_run({"bench", "--config", path("small.json"), "--queries", "200"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# tasml 0.1.0 bench"), std::string::npos);
    EXPECT_EQ(count_data_rows(r.out), 4u);
}

TEST_F(Cli, ClassifierOverridesReachTheModel) {
    ASSERT_EQ(tas_run({"generate", "--m", "60", "--out", path("ch.csv")}).code, 0);
    ASSERT_EQ(tas_run({"label", "--in", path("ch.csv"), "--out", path("lab.csv")}).code, 0);
    ASSERT_EQ(tas_run({"train", "--in", path("lab.csv"), "--scheme", "svm", "--svm-c", "3", "--svm-sigma", "0.25",
                       "--out", path("svm.json")})
                  .code,
              0);
    const auto svm = slurp(path("svm.json"));
    EXPECT_NE(svm.find("\"c\": 3.0"), std::string::npos);
    EXPECT_NE(svm.find("\"sigma\": 0.25"), std::string::npos);
    ASSERT_EQ(tas_run({"train", "--in", path("lab.csv"), "--scheme", "knn", "--knn-k", "5", "--out", path("k.json")})
                  .code,
              0);
    EXPECT_NE(slurp(path("k.json")).find("\"k\": 5"), std::string::npos);
    ASSERT_EQ(tas_run({"train", "--in", path("lab.csv"), "--scheme", "nb", "--nb-priors", "--out", path("nb.json")})
                  .code,
              0);
    EXPECT_NE(slurp(path("nb.json")).find("\"use_priors\": true"), std::string::npos);
    EXPECT_NE(tas_run({"train", "--in", path("lab.csv"), "--scheme", "conventional"}).code, 0);
    EXPECT_NE(tas_run({"train", "--in", path("lab.csv"), "--scheme", "svm", "--svm-sigma", "wide"}).code, 0);
}

}  // namespace
