#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "gavekit/cli.hpp"
#include "test_support.hpp"

using namespace gavekit;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gavekit");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return testsupport::fixture_path(name); }

}  // namespace

TEST_CASE("analyze reports the strongest conclusion for the worked instance") {
  const RunResult r = run_cli({"analyze", fx("exam_inf.json")});
  REQUIRE(r.code == cli::kOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["strongest"]["theorem"] == "ThmInfo");
  CHECK(j["strongest"]["conclusion"] == "infinite_any_b");
  CHECK(j["verdicts"].size() >= 2);
}

TEST_CASE("analyze output is byte-identical across runs") {
  const RunResult a = run_cli({"analyze", fx("exam_inf.json")});
  const RunResult b = run_cli({"analyze", fx("exam_inf.json")});
  CHECK(a.out == b.out);

  // json -> parse -> json is idempotent
  const nlohmann::json j = nlohmann::json::parse(a.out);
  CHECK(nlohmann::json::parse(j.dump(2)) == j);
}

TEST_CASE("analyze text rendering names the strict-cone constant") {
  const RunResult r = run_cli({"analyze", fx("zn1_example.json"), "--splitting", fx("zn1_splitting.json"),
                               "--pattern", "+,-,+", "--format", "text"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("gamma=0.4") != std::string::npos);
  CHECK(r.out.find("ThmZn1b") != std::string::npos);
}

TEST_CASE("solve with a pattern returns the worked solution") {
  const RunResult r = run_cli({"solve", "--pattern", "-,+,0", fx("sec32_inf22.json")});
  REQUIRE(r.code == cli::kOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "solved");
  CHECK(j["x"][0].get<double>() == Catch::Approx(-1.0 / 3).margin(1e-9));
  CHECK(j["x"][1].get<double>() == Catch::Approx(1.0).margin(1e-9));
  CHECK(j["x"][2].get<double>() == 0.0);
  CHECK(j["multiplicity"] == "unique_in_pattern");
}

TEST_CASE("solve without a pattern runs the fixed-point route") {
  const RunResult r = run_cli({"solve", fx("mp_remark.json")});
  REQUIRE(r.code == cli::kOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "solved");
  CHECK(j["x"][0].get<double>() == Catch::Approx(7.0 / 6).margin(1e-8));
}

TEST_CASE("enumerate matches the published table") {
  const RunResult r = run_cli({"enumerate", fx("remns_b00.json")});
  REQUIRE(r.code == cli::kOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["total"] == "finite");
  CHECK(j["count_if_finite"] == 1);

  const RunResult rinf = run_cli({"enumerate", fx("remns_b11.json")});
  CHECK(nlohmann::json::parse(rinf.out)["total"] == "infinite");

  const RunResult tight = run_cli({"enumerate", "--budget", "8", fx("remns_b00.json")});
  CHECK(tight.code == cli::kInconclusive);
}

TEST_CASE("certify emits a verified certificate") {
  const RunResult r = run_cli({"certify", "--pattern", "-,-,-", fx("sec32_inf22.json")});
  REQUIRE(r.code == cli::kOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["status"] == "infeasible");
  CHECK(j["verified"] == true);
  REQUIRE(j.contains("certificate"));

  const RunResult feasible = run_cli({"certify", "--pattern", "+,+,0", fx("sec32_inf22.json")});
  REQUIRE(feasible.code == cli::kOk);
  CHECK(nlohmann::json::parse(feasible.out)["status"] == "feasible");
}

TEST_CASE("generate is reproducible and respects the property flag") {
  const auto tmp = fs::temp_directory_path() / "gavekit_cli_test";
  fs::create_directories(tmp);
  const std::string out1 = (tmp / "g1.json").string();
  const std::string out2 = (tmp / "g2.json").string();

  const RunResult r1 = run_cli({"generate", "--m", "2", "--n", "4", "--property", "contraction-A",
                                "--seed", "5", "--output", out1});
  const RunResult r2 = run_cli({"generate", "--m", "2", "--n", "4", "--property", "contraction-A",
                                "--seed", "5", "--output", out2});
  REQUIRE(r1.code == cli::kOk);
  REQUIRE(r2.code == cli::kOk);
  CHECK(read_file(out1) == read_file(out2));

  const GaveInstance inst = parse_instance(read_file(out1));
  CHECK(op_norm(pinv(inst.A) * inst.B, NormKind::Two) < 1.0);

  const std::string split_out = (tmp / "split.json").string();
  const RunResult r3 = run_cli({"generate", "--m", "2", "--n", "3", "--property", "signcone-B",
                                "--seed", "9", "--output", (tmp / "g3.json").string(),
                                "--splitting-out", split_out});
  REQUIRE(r3.code == cli::kOk);
  const GaveInstance cone = parse_instance(read_file((tmp / "g3.json").string()));
  const Splitting split = parse_splitting(read_file(split_out), cone);
  bool ok = false;
  for (const TheoremVerdict& v : check_signcone_B(cone, split, SignPattern::all_ones(3), NormKind::Two))
    if (v.applies) ok = true;
  CHECK(ok);
  fs::remove_all(tmp);
}

TEST_CASE("verify accepts every shipped solution fixture") {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"exam_inf.json", "solutions/exam_inf_x1.json"}, {"exam_inf.json", "solutions/exam_inf_x2.json"},
      {"exam_inf.json", "solutions/exam_inf_x3.json"}, {"mp_remark.json", "solutions/mp_remark_x1.json"},
      {"mp_remark.json", "solutions/mp_remark_x2.json"}, {"sec32_inf22.json", "solutions/sec32_x1.json"},
      {"sec32_inf22.json", "solutions/sec32_x2.json"},  {"zn1_example.json", "solutions/zn1_x1.json"},
      {"egs4.json", "solutions/egs4_x1.json"},          {"egs4.json", "solutions/egs4_x2.json"},
      {"egs7.json", "solutions/egs7_x1.json"},
  };
  for (const auto& [inst, sol] : pairs) {
    const RunResult r = run_cli({"verify", fx(inst), "--solution", fx(sol)});
    INFO(inst << " / " << sol);
    CHECK(r.code == cli::kOk);
    CHECK(nlohmann::json::parse(r.out)["ok"] == true);
  }

  // a wrong solution fails with the dedicated exit code
  const auto tmp = fs::temp_directory_path() / "gavekit_verify_test";
  fs::create_directories(tmp);
  write_file((tmp / "bad.json").string(), R"({"x": [1, 1, 1]})");
  const RunResult bad = run_cli({"verify", fx("exam_inf.json"), "--solution", (tmp / "bad.json").string()});
  CHECK(bad.code == cli::kVerifyFailed);
  fs::remove_all(tmp);
}

TEST_CASE("input problems map to the input-error exit code") {
  CHECK(run_cli({"analyze", "/nonexistent/nope.json"}).code == cli::kInputError);
  CHECK(run_cli({"solve", "--pattern", "+,?,0", fx("exam_inf.json")}).code == cli::kInputError);
  CHECK(run_cli({"solve", "--pattern", "+,-", fx("exam_inf.json")}).code == cli::kInputError);
  CHECK(run_cli({"bogus-command"}).code == cli::kInputError);
  CHECK(run_cli({"generate", "--m", "3", "--n", "2"}).code == cli::kInputError);
}

TEST_CASE("golden files pin the analyze and enumerate reports") {
  const std::vector<std::string> instances = {
      "exam_inf",  "mp_remark", "sec32_inf22", "sec32_gaveinf", "zn1_example",     "remns_b00",
      "remns_b11", "remns_b1m1", "remns_bm11", "egs1",          "egs2",            "egs3",
      "egs4",      "egs5",      "egs6",        "egs7",          "lemuleg_counter",
  };
  for (const std::string& name : instances) {
    const RunResult r = run_cli({"analyze", fx(name + ".json")});
    REQUIRE(r.code == cli::kOk);
    const std::string golden_path = std::string(GAVEKIT_GOLDEN_DIR) + "/" + name + ".analyze.json";
    INFO("golden file " << golden_path << " (regenerate by saving the command output)");
    CHECK(r.out == read_file(golden_path));
  }
  for (const std::string& name :
       {std::string("remns_b00"), std::string("remns_b11"), std::string("remns_b1m1"),
        std::string("remns_bm11"), std::string("egs4"), std::string("egs7")}) {
    const RunResult r = run_cli({"enumerate", fx(name + ".json")});
    REQUIRE(r.code == cli::kOk);
    const std::string golden_path = std::string(GAVEKIT_GOLDEN_DIR) + "/" + name + ".enumerate.json";
    INFO("golden file " << golden_path);
    CHECK(r.out == read_file(golden_path));
  }
}

TEST_CASE("GAVEKIT_TOL loosens the acceptance threshold") {
  const auto tmp = fs::temp_directory_path() / "gavekit_tol_test";
  fs::create_directories(tmp);
  write_file((tmp / "near.json").string(), R"({"x": [1.715285714285714, "-3/7", 1]})");
  const RunResult strict = run_cli({"verify", fx("exam_inf.json"), "--solution", (tmp / "near.json").string()});
  CHECK(strict.code == cli::kVerifyFailed);
  setenv("GAVEKIT_TOL", "0.01", 1);
  const RunResult loose = run_cli({"verify", fx("exam_inf.json"), "--solution", (tmp / "near.json").string()});
  unsetenv("GAVEKIT_TOL");
  CHECK(loose.code == cli::kOk);
  fs::remove_all(tmp);
}
