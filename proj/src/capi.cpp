#include "hgsim.h"

#include <string>

#include "hgsim/analytic.hpp"
#include "hgsim/experiment.hpp"
#include "hgsim/types.hpp"
#include "hgsim/version.hpp"

struct hg_run {
  std::string config_json;
  hgsim::RunArtifact artifact;
  bool executed = false;
};

namespace {

thread_local std::string g_last_error;

hg_status status_from(hgsim::errc code) {
  switch (code) {
    case hgsim::errc::invalid_argument:
      return HG_ERROR_CONFIG;
    case hgsim::errc::numerical:
      return HG_ERROR_NUMERICAL;
    case hgsim::errc::io:
      return HG_ERROR_IO;
    case hgsim::errc::memory_bound:
      return HG_ERROR_MEMORY;
  }
  return HG_ERROR_INTERNAL;
}

template <typename Fn>
hg_status guarded(Fn&& fn) {
  try {
    fn();
    return HG_OK;
  } catch (const hgsim::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HG_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return HG_ERROR_INTERNAL;
  }
}

hg_status invalid(const char* msg) {
  g_last_error = msg;
  return HG_ERROR_CONFIG;
}

}  // namespace

extern "C" {

const char* hg_version(void) { return HGSIM_VERSION; }

const char* hg_last_error(void) { return g_last_error.c_str(); }

hg_status hg_run_create(const char* config_json, hg_run** out) {
  if (out == nullptr) return invalid("hg_run_create: out must not be NULL");
  *out = nullptr;
  if (config_json == nullptr) return invalid("hg_run_create: config_json must not be NULL");
  return guarded([&] {
    auto* run = new hg_run;
    run->config_json = config_json;
    *out = run;
  });
}

hg_status hg_run_execute(hg_run* run) {
  if (run == nullptr) return invalid("hg_run_execute: run must not be NULL");
  if (run->executed) return invalid("hg_run_execute: run already executed");
  return guarded([&] {
    run->artifact = hgsim::run_task_json(run->config_json);
    run->executed = true;
  });
}

const char* hg_run_summary_json(const hg_run* run) {
  if (run == nullptr || !run->executed) return nullptr;
  return run->artifact.summary_json.c_str();
}

size_t hg_run_output_count(const hg_run* run) {
  if (run == nullptr || !run->executed) return 0;
  return run->artifact.files.size();
}

const char* hg_run_output_path(const hg_run* run, size_t index) {
  if (run == nullptr || !run->executed || index >= run->artifact.files.size()) return nullptr;
  return run->artifact.files[index].c_str();
}

const char* hg_run_output_dir(const hg_run* run) {
  if (run == nullptr || !run->executed) return nullptr;
  return run->artifact.out_dir.c_str();
}

void hg_run_destroy(hg_run* run) { delete run; }

hg_status hg_net_fano(int order, long long* f1_num, long long* f1_den, long long* fn_num,
                      long long* fn_den) {
  return guarded([&] {
    auto [f1, fn] = hgsim::net_fano(order);
    if (f1_num) *f1_num = f1.num;
    if (f1_den) *f1_den = f1.den;
    if (fn_num) *fn_num = fn.num;
    if (fn_den) *fn_den = fn.den;
  });
}

hg_status hg_net_frequencies(int order, double r, double* omega_bar, double* delta_omega,
                             double* t_osc, double* t_rel) {
  return guarded([&] {
    hgsim::NetFrequencies freq = hgsim::net_frequencies(order, r);
    if (omega_bar) *omega_bar = freq.omega_bar;
    if (delta_omega) *delta_omega = freq.delta_omega;
    if (t_osc) *t_osc = freq.t_osc;
    if (t_rel) *t_rel = freq.t_rel;
  });
}

}  // extern "C"
