#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "qbench/report.hpp"
#include "qbench/serialize.hpp"
#include "test_util.hpp"

using namespace qbench;
using qbench::testing::data_path;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome qbench_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qbench_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_config(const std::string& device) const {
    const Json j = {{"schema", "runcfg/1"},
                    {"device", data_path(device)},
                    {"seed", 3},
                    {"verification", {{"n", 3}, {"circuits", 3}, {"shots", 500}}},
                    {"protocols", Json::array({Json{{"name", "mirror"}, {"widths", {3}}, {"depths", {2}}, {"shots", 20}},
                                               Json{{"name", "qv"},
                                                    {"max_width", 3},
                                                    {"circuits_per_width", 5},
                                                    {"shots", 100},
                                                    {"strict", false}}})}};
    const std::string p = path("cfg_" + device);
    write_text_file(p, j.dump());
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(qbench_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(qbench_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(qbench_cli({"verify"}).code, cli::kExitUsage);
  EXPECT_EQ(qbench_cli({"verify", "--device", path("nope.json")}).code, cli::kExitUsage);
  EXPECT_EQ(qbench_cli({"--seed", "-4", "parse", "--qasm", data_path("ghz3.qasm")}).code, cli::kExitUsage);
  EXPECT_EQ(qbench_cli({"report", "--in", data_path("line5.json"), "--format", "pdf"}).code, cli::kExitUsage);
}

TEST_F(CliTest, HelpIsOk) { EXPECT_EQ(qbench_cli({"--help"}).code, cli::kExitOk); }

TEST_F(CliTest, VerifyExitCodes) {
  const Outcome ok = qbench_cli({"--seed", "1", "verify", "--device", data_path("line5.json"), "--n", "4",
                                 "--circuits", "3", "--shots", "500"});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.err;
  EXPECT_TRUE(Json::parse(ok.out)["verified"].get<bool>());

  const Outcome bad = qbench_cli({"--seed", "1", "verify", "--device", data_path("depolarized5.json"), "--n", "4",
                                  "--circuits", "3", "--shots", "500"});
  EXPECT_EQ(bad.code, cli::kExitUnverified);
  EXPECT_FALSE(Json::parse(bad.out)["verified"].get<bool>());
}

TEST_F(CliTest, RunReportCheckCycle) {
  const std::string cfg = write_config("line5.json");
  const std::string report = path("report.json");
  const Outcome run = qbench_cli({"--seed", "9", "--repetitions", "2", "--out", report, "run", "--config", cfg,
                                  "--text", path("report.txt")});
  ASSERT_EQ(run.code, cli::kExitOk) << run.err;
  EXPECT_TRUE(run.out.empty());
  const Json j = load_json_file(report);
  EXPECT_EQ(j["master_seed"], 9);
  EXPECT_EQ(j["repetitions"], 2);
  EXPECT_EQ(j["status"], "verified");
  EXPECT_TRUE(fs::exists(path("report.txt")));

  const Outcome text = qbench_cli({"report", "--in", report, "--format", "text"});
  EXPECT_EQ(text.code, cli::kExitOk);
  EXPECT_NE(text.out.find("Base results"), std::string::npos);
  const Outcome json = qbench_cli({"report", "--in", report, "--format", "json"});
  EXPECT_EQ(json.out, read_text_file(report));

  const Outcome check = qbench_cli({"check", "--report", report, "--reexecute", "1"});
  EXPECT_EQ(check.code, cli::kExitOk) << check.out;
  EXPECT_EQ(check.out.rfind("status: ok", 0), 0U);

  Json tampered = j;
  tampered["base"][0]["repetitions"][0]["aggregate"]["mean_success"] = 0.25;
  write_text_file(path("tampered.json"), tampered.dump());
  const Outcome bad = qbench_cli({"check", "--report", path("tampered.json")});
  EXPECT_EQ(bad.code, cli::kExitDiscrepancy);
  EXPECT_NE(bad.out.find("discrepancy: base.mirror"), std::string::npos) << bad.out;

  Json stripped = j;
  stripped["base"][1]["repetitions"][0].erase("records");
  write_text_file(path("stripped.json"), stripped.dump());
  const Outcome unv = qbench_cli({"check", "--report", path("stripped.json")});
  EXPECT_EQ(unv.code, cli::kExitDiscrepancy);
  EXPECT_NE(unv.out.find("status: unverifiable"), std::string::npos);
}

TEST_F(CliTest, RunIsReproducibleAcrossInvocations) {
  const std::string cfg = write_config("line5.json");
  ASSERT_EQ(qbench_cli({"--out", path("a.json"), "run", "--config", cfg}).code, cli::kExitOk);
  ASSERT_EQ(qbench_cli({"--out", path("b.json"), "run", "--config", cfg}).code, cli::kExitOk);
  EXPECT_EQ(canonical_json(strip_timing_fields(load_json_file(path("a.json")))),
            canonical_json(strip_timing_fields(load_json_file(path("b.json")))));
}

TEST_F(CliTest, RunOnDepolarizedDeviceFailsVerification) {
  const Outcome r = qbench_cli({"run", "--config", write_config("depolarized5.json")});
  EXPECT_EQ(r.code, cli::kExitUnverified);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["status"], report_status_name(ReportStatus::VerificationFailed));
  EXPECT_TRUE(j["base"].empty());
}

TEST_F(CliTest, RunWithPeakFlag) {
  const Outcome r = qbench_cli({"run", "--config", write_config("line5.json"), "--peak"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(Json::parse(r.out)["peak"].size(), 2U);
}

TEST_F(CliTest, BadConfigIsUsageError) {
  write_text_file(path("bad.json"), R"({"schema": "runcfg/1", "device": "x.json", "protocols": [{"name": "warp"}]})");
  const Outcome r = qbench_cli({"run", "--config", path("bad.json")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, ParseAndStats) {
  const Outcome p = qbench_cli({"parse", "--qasm", data_path("ghz3.qasm")});
  ASSERT_EQ(p.code, cli::kExitOk);
  const Circuit c = circuit_from_json(Json::parse(p.out));
  EXPECT_EQ(c.n_qubits(), 3);

  const Outcome s = qbench_cli({"stats", "--qasm", data_path("ghz3.qasm")});
  ASSERT_EQ(s.code, cli::kExitOk);
  const Json j = Json::parse(s.out);
  EXPECT_EQ(j["width"], 3);
  EXPECT_EQ(j["two_qubit_count"], 2);

  write_text_file(path("broken.qasm"), "OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n");
  const Outcome e = qbench_cli({"parse", "--qasm", path("broken.qasm")});
  EXPECT_EQ(e.code, cli::kExitUsage);
  EXPECT_NE(e.err.find("3"), std::string::npos);
}
