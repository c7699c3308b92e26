#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "hgsim.h"

namespace {

std::string temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("hgsim_capi_" + tag);
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("version string is exposed") {
  const char* v = hg_version();
  REQUIRE(v != nullptr);
  CHECK(std::strlen(v) >= 5);
}

TEST_CASE("closed-form Fano factors through the C surface") {
  long long f1n = 0, f1d = 0, fnn = 0, fnd = 0;
  REQUIRE(hg_net_fano(3, &f1n, &f1d, &fnn, &fnd) == HG_OK);
  CHECK(f1n == 29);
  CHECK(f1d == 16);
  CHECK(fnn == 13);
  CHECK(fnd == 16);

  CHECK(hg_net_fano(0, &f1n, &f1d, &fnn, &fnd) == HG_ERROR_CONFIG);
  CHECK(std::strlen(hg_last_error()) > 0);
  CHECK(hg_net_fano(2, nullptr, nullptr, nullptr, nullptr) == HG_OK);
}

TEST_CASE("frequencies through the C surface") {
  double omega = 0.0, delta = 0.0, t_osc = 0.0, t_rel = 0.0;
  REQUIRE(hg_net_frequencies(2, 1.0, &omega, &delta, &t_osc, &t_rel) == HG_OK);
  CHECK(omega == doctest::Approx(6.9282).epsilon(1e-4));
  CHECK(t_osc == doctest::Approx(2.0 * 3.14159265358979 / omega).epsilon(1e-10));
  CHECK(hg_net_frequencies(1, 1.0, &omega, nullptr, nullptr, nullptr) == HG_ERROR_CONFIG);
}

TEST_CASE("run lifecycle: analytic task end to end") {
  std::string out = temp_dir("run");
  std::string cfg = R"({"engine":"analytic","model":{"order":2},)"
                    R"("input":{"alphaN":[5.0,0.0]},"out":")" +
                    out + R"("})";
  hg_run* run = nullptr;
  REQUIRE(hg_run_create(cfg.c_str(), &run) == HG_OK);
  REQUIRE(run != nullptr);
  CHECK(hg_run_summary_json(run) == nullptr);  // not executed yet
  REQUIRE(hg_run_execute(run) == HG_OK);

  const char* summary = hg_run_summary_json(run);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("\"num\": 3") != std::string::npos);
  CHECK(hg_run_output_count(run) >= 3);  // net.csv + config.json + summary.json
  bool saw_net = false;
  for (size_t i = 0; i < hg_run_output_count(run); ++i)
    if (std::string(hg_run_output_path(run, i)) == "net.csv") saw_net = true;
  CHECK(saw_net);
  CHECK(std::string(hg_run_output_dir(run)) == out);

  CHECK(hg_run_execute(run) == HG_ERROR_CONFIG);  // single-shot handle
  hg_run_destroy(run);
}

TEST_CASE("error paths: null arguments and invalid configs") {
  CHECK(hg_run_create(nullptr, nullptr) == HG_ERROR_CONFIG);
  hg_run* run = nullptr;
  CHECK(hg_run_create(nullptr, &run) == HG_ERROR_CONFIG);
  CHECK(run == nullptr);
  CHECK(hg_run_execute(nullptr) == HG_ERROR_CONFIG);
  CHECK(hg_run_summary_json(nullptr) == nullptr);
  CHECK(hg_run_output_count(nullptr) == 0);
  CHECK(hg_run_output_path(nullptr, 0) == nullptr);
  hg_run_destroy(nullptr);  // must be a no-op

  REQUIRE(hg_run_create("{\"engine\":\"warp\"}", &run) == HG_OK);
  CHECK(hg_run_execute(run) == HG_ERROR_CONFIG);
  CHECK(std::string(hg_last_error()).find("engine") != std::string::npos);
  hg_run_destroy(run);

  REQUIRE(hg_run_create("not json at all", &run) == HG_OK);
  CHECK(hg_run_execute(run) == HG_ERROR_CONFIG);
  hg_run_destroy(run);
}
