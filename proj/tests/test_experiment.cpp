#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hgsim/experiment.hpp"
#include "hgsim/io.hpp"
#include "hgsim/types.hpp"

using namespace hgsim;
using json = nlohmann::ordered_json;

namespace {

std::string temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("hgsim_test_" + tag);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string slurp(const std::string& path) { return read_file(path); }

json run_and_parse(const json& cfg) {
  RunArtifact artifact = run_task_json(cfg.dump());
  return json::parse(artifact.summary_json);
}

}  // namespace

TEST_CASE("config validation reports field paths") {
  auto expect_error = [](const json& cfg, const std::string& needle) {
    try {
      run_task_json(cfg.dump());
      FAIL_CHECK("expected a config error mentioning " << needle);
    } catch (const Error& e) {
      CHECK(e.code() == errc::invalid_argument);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_error(json{{"engine", "warp"}, {"out", "x"}}, "engine");
  expect_error(json{{"out", "x"}}, "engine");
  expect_error(json{{"engine", "analytic"}}, "out");
  expect_error(json{{"engine", "analytic"}, {"out", "x"}, {"model", {{"order", 0}}}},
               "model.order");
  expect_error(json{{"engine", "quantum"}, {"out", "x"}, {"tail_tol", 2.0}}, "tail_tol");
  expect_error(json{{"engine", "quantum"}, {"out", "x"}, {"grid", {{"samples", 1}}}},
               "grid.samples");
  expect_error(json{{"task", "unknown-task"}, {"out", "x"}}, "task");
  CHECK_THROWS_AS(run_task_json("{nonsense"), Error);
}

TEST_CASE("analytic engine: summary carries the exact rationals") {
  std::string out = temp_dir("analytic");
  json cfg{{"engine", "analytic"},
           {"model", {{"order", 3}}},
           {"input", {{"alphaN", json::array({5.0, 0.0})}}},
           {"out", out}};
  json summary = run_and_parse(cfg);
  CHECK(summary["F1S"]["num"] == 29);
  CHECK(summary["F1S"]["den"] == 16);
  CHECK(summary["FNS"]["num"] == 13);
  CHECK(summary["FNS"]["den"] == 16);
  CHECK(summary["engine"] == "analytic");
  CHECK(summary["N"] == 3);
  CHECK(std::filesystem::exists(out + "/net.csv"));
  CHECK(std::filesystem::exists(out + "/config.json"));
  CHECK(std::filesystem::exists(out + "/summary.json"));
}

TEST_CASE("classical engine: trajectory file format and conservation") {
  std::string out = temp_dir("classical");
  json cfg{{"engine", "classical"},
           {"model", {{"order", 2}}},
           {"input", {{"alpha1", json::array({1.3, 0.0})}, {"alphaN", json::array({0.4, 0.2})}}},
           {"grid", {{"t_end", 3.0}, {"samples", 60}}},
           {"out", out}};
  json summary = run_and_parse(cfg);
  CHECK(summary["E_drift"].get<double>() < 1e-8);
  CHECK(summary["Gamma_drift"].get<double>() < 1e-8);

  std::string csv = slurp(out + "/trajectory.csv");
  CHECK(csv.rfind("gt,re1,im1,reN,imN,n1,nN,E,Gamma\n", 0) == 0);
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 61);
}

TEST_CASE("semiclassical engine: format, window stats, determinism across threads") {
  std::string out1 = temp_dir("ensemble1");
  json cfg{{"engine", "semiclassical"},
           {"model", {{"order", 2}}},
           {"input", {{"alpha1", json::array({6.0, 0.0})}, {"alphaN", json::array({3.0, 0.0})}}},
           {"grid", {{"tau_min", 0.0}, {"tau_max", 60.0}, {"samples", 120}}},
           {"window", {{"tau_min", 30.0}, {"tau_max", 60.0}}},
           {"min_window_samples", 50},
           {"noise", {{"count", 400}, {"sigma2", 0.25}}},
           {"seed", 7},
           {"snapshots", {{"gts", json::array({1.0})}, {"modes", json::array({2})}}},
           {"threads", 1},
           {"out", out1}};
  json s1 = run_and_parse(cfg);
  CHECK(s1["seed"] == 7);
  CHECK(s1["count"] == 400);
  CHECK(s1["F1_mean"].get<double>() > 1.0);
  CHECK(s1["FN_mean"].get<double>() < 1.0);

  std::string ensemble_csv = slurp(out1 + "/ensemble.csv");
  CHECK(ensemble_csv.rfind("gt,n1_mean,n1_second,F1,S1,nN_mean,nN_second,FN,SN\n", 0) == 0);
  std::string cloud_csv = slurp(out1 + "/cloud_mode2_gt1.csv");
  CHECK(cloud_csv.rfind("# mode=2 gt=1 seed=7 count=400\nre,im\n", 0) == 0);

  // same seed, different worker count: byte-identical data files
  std::string out2 = temp_dir("ensemble2");
  cfg["threads"] = 3;
  cfg["out"] = out2;
  run_task_json(cfg.dump());
  CHECK(slurp(out2 + "/ensemble.csv") == ensemble_csv);
  CHECK(slurp(out2 + "/cloud_mode2_gt1.csv") == cloud_csv);
}

TEST_CASE("artifact closure: the config echo reruns to identical data") {
  std::string out1 = temp_dir("closure1");
  json cfg{{"engine", "semiclassical"},
           {"model", {{"order", 2}}},
           {"input", {{"alpha1", json::array({2.0, 0.0})}, {"alphaN", json::array({1.0, 0.0})}}},
           {"grid", {{"t_end", 1.0}, {"samples", 20}}},
           {"noise", {{"count", 64}}},
           {"seed", 123},
           {"out", out1}};
  run_task_json(cfg.dump());
  json echo = json::parse(slurp(out1 + "/config.json"));
  std::string out2 = temp_dir("closure2");
  echo["out"] = out2;
  run_task_json(echo.dump());
  CHECK(slurp(out2 + "/ensemble.csv") == slurp(out1 + "/ensemble.csv"));
}

TEST_CASE("quantum engine: summary, series file, Q-function snapshot") {
  std::string out = temp_dir("quantum");
  json cfg{{"engine", "quantum"},
           {"model", {{"order", 2}}},
           {"input", {{"alpha1", json::array({2.0, 0.0})}, {"alphaN", json::array({1.0, 0.0})}}},
           {"grid", {{"t_end", 2.0}, {"samples", 41}}},
           {"snapshots", {{"gts", json::array({0.0})}, {"modes", json::array({1})}}},
           {"qgrid", {{"resolution", 41}}},
           {"tail_tol", 1e-10},
           {"out", out}};
  json summary = run_and_parse(cfg);
  CHECK(summary["cutoffs"]["cutoffE"].get<int>() > 4);
  CHECK(summary["max_norm_error"].get<double>() < 1e-10);
  CHECK(summary["FG1"].get<double>() > 0.0);

  std::string csv = slurp(out + "/fano.csv");
  CHECK(csv.rfind("gt,n1_mean,n1_second,F1,S1,nN_mean,nN_second,FN,SN\n", 0) == 0);

  // The t = 0 snapshot of mode 1 is the coherent blob; check the Q peak
  // value 1/pi on the grid.
  std::string qcsv = slurp(out + "/qfunc_mode1_gt0.csv");
  CHECK(qcsv.rfind("re,im,q\n", 0) == 0);
  std::istringstream lines(qcsv);
  std::string line;
  std::getline(lines, line);
  double best = 0.0;
  while (std::getline(lines, line)) {
    auto c2 = line.rfind(',');
    best = std::max(best, std::stod(line.substr(c2 + 1)));
  }
  CHECK(best > 0.9 / M_PI);
  CHECK(best < 1.0 / M_PI + 1e-9);
}

TEST_CASE("quantum engine: window requires containment in the grid") {
  json cfg{{"engine", "quantum"},
           {"model", {{"order", 2}}},
           {"input", {{"alpha1", json::array({2.0, 0.0})}, {"alphaN", json::array({1.0, 0.0})}}},
           {"grid", {{"tau_min", 0.0}, {"tau_max", 40.0}, {"samples", 50}}},
           {"window", {{"tau_min", 50.0}, {"tau_max", 150.0}}},
           {"out", temp_dir("badwindow")}};
  CHECK_THROWS_AS(run_task_json(cfg.dump()), Error);
}

TEST_CASE("reproduce-table: order 1 row is exact and orders validate") {
  std::string out = temp_dir("table");
  json cfg{{"task", "reproduce-table"},
           {"which", "table2"},
           {"orders", json::array({1})},
           {"r", 2.0},
           {"min_window_samples", 64},
           {"out", out}};
  json summary = run_and_parse(cfg);
  REQUIRE(summary["rows"].size() == 1);
  CHECK(summary["rows"][0]["N"] == 1);
  CHECK(summary["rows"][0]["F_quantum"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(summary["rows"][0]["F_semiclassical"]["num"] == 1);
  CHECK(summary["rows"][0]["rel_deviation"].get<double>() < 1e-8);
  CHECK(std::filesystem::exists(out + "/table.csv"));

  json bad = cfg;
  bad["orders"] = json::array({4});
  bad["out"] = temp_dir("table_bad");
  CHECK_THROWS_AS(run_task_json(bad.dump()), Error);  // slow orders need slow=true
}

TEST_CASE("reproduce-table: memory-bound rows report required dimensions") {
  std::string out = temp_dir("table_mem");
  json cfg{{"task", "reproduce-table"},
           {"which", "table1"},
           {"orders", json::array({3})},
           {"r", 200.0},  // block dimension far beyond the 4096 hard bound
           {"min_window_samples", 16},
           {"out", out}};
  json summary = run_and_parse(cfg);
  REQUIRE(summary["rows"].size() == 1);
  CHECK(summary["rows"][0].contains("error"));
  CHECK(summary["rows"][0]["required_block_dim"].get<int>() > 4096);
  CHECK(summary["rows"][0]["required_cutoffE"].get<int>() > 100000);
}

TEST_CASE("scan-global-fano: tiny grid marks the vacuum cell undefined") {
  std::string out = temp_dir("scan");
  json cfg{{"task", "scan-global-fano"},
           {"order", 2},
           {"alpha1_min", 0.0},
           {"alpha1_max", 1.0},
           {"alpha1_step", 1.0},
           {"alpha2_min", 0.0},
           {"alpha2_max", 0.5},
           {"alpha2_step", 0.5},
           {"t_end", 4.0},
           {"samples", 81},
           {"tail_tol", 1e-8},
           {"out", out}};
  json summary = run_and_parse(cfg);
  std::string csv = slurp(out + "/scan.csv");
  CHECK(csv.rfind(",0,1\n0,nan,", 0) == 0);  // header row then the vacuum cell
  CHECK(summary.contains("ridge"));
  CHECK(summary["FG_half_grid_delta_max"].get<double>() < 1e-3);
}
