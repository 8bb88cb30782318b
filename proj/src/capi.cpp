// SPDX-License-Identifier: Apache-2.0
//
// cothp - coordinated Tomlinson-Harashima precoding simulator for overloaded
// multi-user MIMO broadcast channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "cothp/cothp.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "experiments.hpp"

struct cothp_scenario {
  cothp::ScenarioConfig cfg;
};

struct cothp_results {
  std::vector<cothp::SweepResult> rows;
};

namespace {

thread_local std::string g_last_error;

cothp_status fail(cothp_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

cothp_status ok() {
  g_last_error.clear();
  return COTHP_OK;
}

/// Runs fn, translating exceptions into status codes.
template <typename Fn>
cothp_status guarded(Fn&& fn) {
  try {
    fn();
    return ok();
  } catch (const cothp::ConfigError& e) {
    return fail(COTHP_ERR_CONFIG, e.what());
  } catch (const cothp::RankDeficientError& e) {
    return fail(COTHP_ERR_RANK_DEFICIENT, e.what());
  } catch (const cothp::Error& e) {
    return fail(COTHP_ERR_DIMENSION, e.what());
  } catch (const std::exception& e) {
    return fail(COTHP_ERR_INTERNAL, e.what());
  }
}

std::string lower(const char* s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

std::vector<cothp::CoordAlgo> parse_algos(const char* text) {
  const std::string name = lower(text ? text : "all");
  if (name == "dthp") return {cothp::CoordAlgo::dTHP};
  if (name == "cthp") return {cothp::CoordAlgo::cTHP};
  if (name == "zf" || name == "zf-cbf" || name == "zfcbf") return {cothp::CoordAlgo::ZfCbf};
  if (name == "all")
    return {cothp::CoordAlgo::dTHP, cothp::CoordAlgo::cTHP, cothp::CoordAlgo::ZfCbf};
  throw cothp::ConfigError("unknown algorithm '" + std::string(text) +
                           "' (expected dthp, cthp, zf, or all)");
}

}  // namespace

extern "C" {

const char* cothp_version(void) { return "0.1.0"; }

const char* cothp_last_error(void) { return g_last_error.c_str(); }

cothp_status cothp_scenario_parse(const char* antennas, const char* streams,
                                  const char* modulation, double xi,
                                  cothp_scenario** out) {
  if (!antennas || !modulation || !out)
    return fail(COTHP_ERR_INVALID_ARGUMENT, "cothp_scenario_parse: null argument");
  *out = nullptr;
  return guarded([&] {
    auto sc = std::make_unique<cothp_scenario>();
    sc->cfg = cothp::ScenarioConfig::parse(antennas, streams ? streams : "", modulation,
                                           xi > 0.0 ? xi : 0.0);
    *out = sc.release();
  });
}

void cothp_scenario_destroy(cothp_scenario* sc) { delete sc; }

cothp_status cothp_scenario_label(const cothp_scenario* sc, char* buf, size_t buf_len) {
  if (!sc || !buf || buf_len == 0)
    return fail(COTHP_ERR_INVALID_ARGUMENT, "cothp_scenario_label: null argument");
  std::snprintf(buf, buf_len, "%s", sc->cfg.label.c_str());
  return ok();
}

cothp_status cothp_run_sweep(const cothp_scenario* sc, const cothp_sweep_opts* opts,
                             cothp_results** out) {
  if (!sc || !out)
    return fail(COTHP_ERR_INVALID_ARGUMENT, "cothp_run_sweep: null argument");
  *out = nullptr;
  return guarded([&] {
    cothp::SweepRequest req;
    req.scenario = sc->cfg;
    const cothp_sweep_opts defaults = {};
    const cothp_sweep_opts& o = opts ? *opts : defaults;
    req.algos = parse_algos(o.algo);
    req.ebn0_grid = cothp::parse_ebn0_grid(o.ebn0_grid ? o.ebn0_grid : "0:4:28");
    req.trials = o.trials > 0 ? o.trials : 500;
    req.frames = o.frames >= 0 ? o.frames : 100;
    req.seed = o.seed;
    req.coord.epsilon = o.epsilon > 0.0 ? o.epsilon : 1e-5;
    req.coord.max_iters = o.max_iters > 0 ? o.max_iters : 50;
    req.tau_override = o.tau_override;
    auto res = std::make_unique<cothp_results>();
    res->rows = cothp::run_sweep(req);
    *out = res.release();
  });
}

void cothp_results_destroy(cothp_results* res) { delete res; }

size_t cothp_results_count(const cothp_results* res) { return res ? res->rows.size() : 0; }

cothp_status cothp_results_row(const cothp_results* res, size_t index,
                               cothp_sweep_row* out) {
  if (!res || !out)
    return fail(COTHP_ERR_INVALID_ARGUMENT, "cothp_results_row: null argument");
  if (index >= res->rows.size())
    return fail(COTHP_ERR_INVALID_ARGUMENT, "cothp_results_row: index out of range");
  const cothp::SweepResult& r = res->rows[index];
  std::snprintf(out->algo, sizeof out->algo, "%s", cothp::to_string(r.algo));
  out->ebn0_db = r.ebn0_db;
  out->ber = r.ber;
  out->sum_rate_bits = r.sum_rate_bits;
  out->avg_iterations = r.avg_iterations;
  out->convergence_rate = r.convergence_rate;
  out->trials = r.trials;
  out->seed = r.seed;
  return ok();
}

cothp_status cothp_results_write(const cothp_results* res, const char* path,
                                 const char* format) {
  if (!res || !path || !format)
    return fail(COTHP_ERR_INVALID_ARGUMENT, "cothp_results_write: null argument");
  std::string body;
  const std::string fmt_name = lower(format);
  if (fmt_name == "csv") {
    body = cothp::to_csv(res->rows);
  } else if (fmt_name == "json") {
    body = cothp::to_json(res->rows);
  } else {
    return fail(COTHP_ERR_CONFIG,
                "unknown output format '" + std::string(format) + "' (expected csv or json)");
  }
  if (std::strcmp(path, "-") == 0) {
    if (std::fwrite(body.data(), 1, body.size(), stdout) != body.size())
      return fail(COTHP_ERR_IO, "short write to stdout");
    std::fflush(stdout);
    return ok();
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return fail(COTHP_ERR_IO, "cannot open '" + std::string(path) + "' for writing");
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  f.close();
  if (!f) return fail(COTHP_ERR_IO, "write failed for '" + std::string(path) + "'");
  return ok();
}

}  // extern "C"
