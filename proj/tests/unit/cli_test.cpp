#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mdgi/error.hpp"
#include "mdgi/io.hpp"
#include "mdgi_cli/cli.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;

namespace mdgi::cli {
namespace {

using testing::row_dem;

struct Result {
  int code = 0;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mdgi");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("mdgi_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string put(const std::string& name, const Dem& dem) {
    std::ofstream out(dir_ / name);
    write_fixture_csv(out, dem);
    return (dir_ / name).string();
  }
  std::string put_text(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST(Format, Numbers) {
  EXPECT_EQ(format_probability(6, 16), "6/16");
  EXPECT_EQ(format_probability(0, 16), "0");
  EXPECT_EQ(format_real(0.6615632), "0.661563");
  EXPECT_EQ(format_real(1.0), "1");
  EXPECT_EQ(format_real(-0.0), "0");
  EXPECT_EQ(format_real(1234567.0), "1.23457e+06");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
}

TEST(Format, FeatureRowFromZ) {
  FeatureRecord r;
  r.id = "w";
  r.z = {0.8, 0.5, 0.9, 0.5};
  r.x = order_stat_features(r.z);
  const auto fields = lines(features_row(r, false)).at(0);
  std::vector<std::string> f;
  std::stringstream ss(fields);
  for (std::string s; std::getline(ss, s, ',');) f.push_back(s);
  ASSERT_EQ(f.size(), 1u + 5 + 4 + 16 + 3);
  std::vector<std::size_t> nonzero;
  for (std::size_t k = 0; k < 16; ++k)
    if (f[10 + k] != "0") nonzero.push_back(k);
  EXPECT_EQ(nonzero, (std::vector<std::size_t>{2, 4, 11, 13}));
  EXPECT_EQ(f[10 + 2], "0.8");
  EXPECT_EQ(f[10 + 11], "0.9");
  EXPECT_EQ(f[27], "B3");
  EXPECT_EQ(f[28], "B2");
}

TEST(Format, FeaturesRoundTrip) {
  FeatureRecord r;
  r.id = "a,b";
  r.gi = {1, 2, 3, 4, 5};
  r.x[3] = 0.25;
  r.label = "x";
  std::stringstream csv(features_header(true) + "\n" + features_row(r, true) + "\n");
  const auto back = read_features_csv(csv, "label", true);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].id, "a,b");
  EXPECT_EQ(back[0].x[3], 0.25);
  EXPECT_EQ(back[0].gi[4], 5);
  EXPECT_EQ(back[0].label, "x");
}

TEST(Format, MalformedFeatures) {
  std::stringstream missing("id,X0\nw,1\n");
  EXPECT_THROW(read_features_csv(missing, "", false), ParseError);
  std::stringstream text(features_header(false) + "\nw" + std::string(16 + 9, ',') + "\n");
  EXPECT_THROW(read_features_csv(text, "", false), ParseError);
  std::stringstream ragged(features_header(false) + "\nw,1,2\n");
  try {
    read_features_csv(ragged, "", false);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST_F(Cli, SpectrumRowExample) {
  const auto in = put("r.csv", row_dem({2, 5, 5, 2, 2}));
  const auto r = invoke({"spectrum", in, "-o", path("out"), "--se", "B4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "out/r.B4.csv"), "n,volume,p_n\n0,16,6/16\n1,10,0\n2,10,10/16\n");
  EXPECT_FALSE(fs::exists(dir_ / "out/r.B1.csv"));
  const auto summary = nlohmann::json::parse(slurp(dir_ / "out/r.summary.json"));
  EXPECT_EQ(summary["spectra"]["B4"]["n0"], 3);
  EXPECT_DOUBLE_EQ(summary["spectra"]["B4"]["gi"].get<double>(), 0.661563);
  EXPECT_EQ(summary["metadata"]["pad_convention"], "zero");
  EXPECT_EQ(summary["metadata"]["log_base"], "e");
  EXPECT_EQ(summary["metadata"]["quantization"]["mode"], "exact");
}

TEST_F(Cli, SpectrumJsonFormatAndQuantization) {
  const auto in = put_text("g.csv", "10.2,40.1,40.9,10.0,19.9\n");
  const auto r = invoke({"spectrum", in, "-o", path("out"), "--se", "B4", "--format", "json", "--step", "10",
                       "--datum", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = nlohmann::json::parse(slurp(dir_ / "out/g.summary.json"));
  EXPECT_EQ(s["spectra"]["B4"]["volumes"], (std::vector<int>{16, 10, 10, 0}));
  EXPECT_EQ(s["spectra"]["B4"]["p"], (std::vector<std::string>{"6/16", "0", "10/16"}));
  EXPECT_EQ(s["metadata"]["quantization"]["step"], 10.0);
  EXPECT_FALSE(fs::exists(dir_ / "out/g.B4.csv"));
}

TEST_F(Cli, ConstantDemHasZeroGi) {
  const auto in = put("flat.csv", row_dem({1, 1, 1, 1}));
  ASSERT_EQ(invoke({"spectrum", in, "-o", path("out"), "--se", "B4"}).code, 0);
  const auto s = nlohmann::json::parse(slurp(dir_ / "out/flat.summary.json"));
  EXPECT_EQ(s["spectra"]["B4"]["gi"].get<double>(), 0.0);
}

TEST_F(Cli, MissingFileFailsAlone) {
  const auto good = put("good.csv", row_dem({1, 2, 1}));
  const auto r = invoke({"spectrum", path("absent.csv"), good, "-o", path("out")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("absent.csv"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "out/good.summary.json"));
  const auto errors = lines(slurp(dir_ / "out/errors.csv"));
  ASSERT_EQ(errors.size(), 2u);
  EXPECT_EQ(errors[1].rfind(path("absent.csv"), 0), 0u);
}

TEST_F(Cli, ParseErrorIsReportedPerFile) {
  put_text("bad.csv", "1,2\n3,x\n");
  put("ok.csv", row_dem({3, 1}));
  const auto r = invoke({"features", dir_.string(), "-o", path("out")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_EQ(lines(slurp(dir_ / "out/features.csv")).size(), 2u);
}

TEST_F(Cli, FeaturesBatchOrderAndDeterminism) {
  put("c.csv", Dem::from_rows(testing::Rows{{1, 3, 2}, {2, 2, 4}}));
  put("a.csv", row_dem({2, 5, 5, 2, 2}));
  put("b.csv", Dem::from_rows(testing::Rows{{4, 4, 4}, {4, 4, 4}, {4, 4, 4}}));
  ASSERT_EQ(invoke({"features", path("*.csv"), "-o", path("one")}).code, 0);
  ASSERT_EQ(invoke({"features", dir_.string(), "-o", path("par"), "-j", "3"}).code, 0);
  const auto text = slurp(dir_ / "one/features.csv");
  EXPECT_EQ(text, slurp(dir_ / "par/features.csv"));
  const auto rows = lines(text);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1].substr(0, 2), "a,");
  EXPECT_EQ(rows[2].substr(0, 2), "b,");
  EXPECT_EQ(rows[3].substr(0, 2), "c,");
  // flat 3x3: no square scale survives, GI_B = 0
  EXPECT_NE(rows[2].find(",0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,1,,"), std::string::npos);
}

TEST_F(Cli, SpectrumOutputsAreByteIdentical) {
  ASSERT_EQ(invoke({"gen-fixtures", "-o", path("fx")}).code, 0);
  ASSERT_EQ(invoke({"spectrum", path("fx"), "-o", path("s1")}).code, 0);
  ASSERT_EQ(invoke({"spectrum", path("fx"), "-o", path("s2"), "-j", "4"}).code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "s1")) {
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "s2" / e.path().filename())) << e.path();
    ++files;
  }
  EXPECT_GT(files, 100u);
}

TEST_F(Cli, GeneratedFixtures) {
  ASSERT_EQ(invoke({"gen-fixtures", "-o", path("fx")}).code, 0);
  std::ifstream in(dir_ / "fx/masked_4x5.csv");
  const Dem masked = parse_fixture_csv(in);
  EXPECT_EQ(volume(masked), 46u);
  std::ifstream asc(dir_ / "fx/masked_4x5_grid.asc");
  EXPECT_EQ(parse_esri_ascii(asc), masked);
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "fx/fixtures.json"));
  for (const auto& f : manifest["fixtures"]) EXPECT_TRUE(fs::exists(dir_ / "fx" / f["file"].get<std::string>()));
  // scaled copies share the spectrum
  ASSERT_EQ(invoke({"spectrum", path("fx/row_25522*.csv"), "-o", path("s"), "--se", "B4"}).code, 0);
  for (const char* k : {"_x2", "_x3", "_x7"})
    EXPECT_EQ(lines(slurp(dir_ / ("s/row_25522" + std::string(k) + ".B4.csv"))).size(), 4u);
}

TEST_F(Cli, OracleCheckPassesOnFixtures) {
  ASSERT_EQ(invoke({"gen-fixtures", "-o", path("fx")}).code, 0);
  const auto r = invoke({"oracle-check", path("fx"), "-o", path("oc")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("0 fail, 0 skipped"), std::string::npos);
}

TEST_F(Cli, OracleCheckCorruptionReportsIndex) {
  const auto in = put("r.csv", row_dem({2, 5, 5, 2, 2}));
  const auto r = invoke({"oracle-check", in, "-o", path("oc"), "--se", "B4", "--corrupt-at", "1"});
  EXPECT_EQ(r.code, 1);
  const auto report = lines(slurp(dir_ / "oc/oracle_report.csv"));
  ASSERT_EQ(report.size(), 3u);
  EXPECT_EQ(report[1], "r,B4,homothetic,FAIL,1,morphology 1/16 vs runs 0");
  EXPECT_EQ(report[2].rfind("r,B4,line,FAIL,1,", 0), 0u);
}

TEST_F(Cli, OracleCheckEmptyAndCapped) {
  auto r = invoke({"oracle-check", "-o", path("oc")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "oc/oracle_report.csv"), "id,se,family,status,first_diff_index,detail\n");
  const auto in = put("big.csv", row_dem({9, 9, 9, 9}));
  r = invoke({"oracle-check", in, "-o", path("oc"), "--max-work", "35"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("SKIP"), std::string::npos);
  EXPECT_NE(r.err.find("skipped"), std::string::npos);
}

std::string separable_csv(std::size_t n) {
  std::string text = features_header(true) + "\n";
  for (std::size_t i = 0; i < n; ++i) {
    FeatureRecord r;
    r.id = "w" + std::to_string(i);
    r.x[7] = double(i % 3);
    r.x[2] = double(i);
    r.label = std::string(1, char('a' + i % 3));
    text += features_row(r, true) + "\n";
  }
  return text;
}

TEST_F(Cli, TrainAndClassify) {
  const auto csv = put_text("f.csv", separable_csv(12));
  auto r = invoke({"train-tree", "--features", csv, "--max-depth", "3", "-o", path("t")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accuracy 12/12 = 1"), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "t/tree.txt").rfind("|--- X7 <= 0.5", 0), 0u);
  const auto doc = nlohmann::json::parse(slurp(dir_ / "t/tree.json"));
  EXPECT_EQ(doc["training"]["accuracy"], "1");
  EXPECT_EQ(doc["metadata"]["log_base"], "e");

  r = invoke({"classify", "--tree", path("t/tree.json"), "--features", csv, "-o", path("c")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pred = lines(slurp(dir_ / "c/predictions.csv"));
  ASSERT_EQ(pred.size(), 13u);
  EXPECT_EQ(pred[0], "id,predicted,label");
  EXPECT_EQ(pred[2], "w1,b,b");
}

TEST_F(Cli, DepthZeroIsMajorityShare) {
  const auto csv = put_text("f.csv", separable_csv(7));  // a,b,c,a,b,c,a
  const auto r = invoke({"train-tree", "--features", csv, "--max-depth", "0", "-o", path("t")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("class: a [a: 3, b: 2, c: 2]"), std::string::npos);
  EXPECT_NE(r.out.find("accuracy 3/7 = 0.428571"), std::string::npos);
}

TEST_F(Cli, MalformedFeaturesCsv) {
  const auto csv = put_text("f.csv", "id,X0\nw,1\n");
  const auto r = invoke({"train-tree", "--features", csv, "-o", path("t")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("missing column"), std::string::npos);
  const auto unlabeled = put_text("u.csv", separable_csv(3) + "w9" + std::string(28, ',') + "\n");
  EXPECT_EQ(invoke({"train-tree", "--features", unlabeled, "-o", path("t")}).code, 1);
}

TEST_F(Cli, ConfigFileAndOverride) {
  const auto csv = put_text("f.csv", separable_csv(7));
  const auto cfg = put_text("cfg.json", R"({"max_depth": 0, "out_dir": ")" + path("fromfile") + R"("})");
  auto r = invoke({"--config", cfg, "train-tree", "--features", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accuracy 3/7"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "fromfile/tree.json"));
  r = invoke({"--config", cfg, "train-tree", "--features", csv, "--max-depth", "4"});
  EXPECT_NE(r.out.find("accuracy 7/7"), std::string::npos);

  const auto dem = put("r.csv", row_dem({2, 5, 5, 2, 2}));
  const auto cfg2 = put_text("cfg2.json", R"({"inputs": [")" + dem + R"("], "se": ["B4"], "out_dir": ")" +
                                              path("s") + R"("})");
  ASSERT_EQ(invoke({"--config", cfg2, "spectrum"}).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "s/r.B4.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "s/r.B.csv"));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 106);  // CLI11 RequiredError
  EXPECT_EQ(invoke({"spectrum"}).code, 2);
  EXPECT_EQ(invoke({"spectrum", "x.csv", "--step", "-1"}).code, 2);
  EXPECT_EQ(invoke({"spectrum", "x.csv", "-j", "0"}).code, 2);
  EXPECT_EQ(invoke({"spectrum", "x.csv", "--se", "B9"}).code, 2);
  EXPECT_EQ(invoke({"spectrum", "x.csv", "--format", "xml"}).code, 105);
  const auto bad = put_text("bad.json", R"({"nope": 1})");
  EXPECT_EQ(invoke({"--config", bad, "gen-fixtures", "-o", path("g")}).code, 2);
  const auto typed = put_text("typed.json", R"({"jobs": "many"})");
  EXPECT_EQ(invoke({"--config", typed, "spectrum", "x.csv"}).code, 2);
}

}  // namespace
}  // namespace mdgi::cli
