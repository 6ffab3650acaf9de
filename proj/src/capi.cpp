#include "erc.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "erc/channel.hpp"
#include "erc/config.hpp"
#include "erc/harness.hpp"
#include "erc/report.hpp"
#include "erc/threshold.hpp"

struct erc_config {
  erc::config::KeyValues kv;
};

struct erc_results {
  erc::report::Report rep;
};

namespace {

thread_local std::string g_last_error;

erc_status classify(const std::string& what) {
  if (what.find("cannot open") != std::string::npos ||
      what.find("write failed") != std::string::npos)
    return ERC_EIO;
  return ERC_EPARSE;
}

template <typename F>
erc_status guarded(F&& f) {
  try {
    f();
    return ERC_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return ERC_EINVAL;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ERC_ENOMEM;
  } catch (const std::runtime_error& e) {
    g_last_error = e.what();
    return classify(e.what());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ERC_EINTERNAL;
  }
}

erc_status copy_out(const std::string& s, char** out) {
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buf) {
    g_last_error = "out of memory";
    return ERC_ENOMEM;
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  *out = buf;
  return ERC_OK;
}

erc_status need(bool ok, const char* msg) {
  if (ok) return ERC_OK;
  g_last_error = msg;
  return ERC_EINVAL;
}

}  // namespace

extern "C" {

const char* erc_version(void) { return "1.0.0"; }

const char* erc_last_error(void) { return g_last_error.c_str(); }

erc_status erc_config_from_string(const char* text, erc_config** out) {
  if (auto s = need(text && out, "null argument"); s != ERC_OK) return s;
  return guarded([&] {
    auto cfg = std::make_unique<erc_config>();
    cfg->kv = erc::config::KeyValues::parse(text);
    *out = cfg.release();
  });
}

erc_status erc_config_from_file(const char* path, erc_config** out) {
  if (auto s = need(path && out, "null argument"); s != ERC_OK) return s;
  return guarded([&] {
    auto cfg = std::make_unique<erc_config>();
    cfg->kv = erc::config::KeyValues::parse_file(path);
    *out = cfg.release();
  });
}

erc_status erc_config_set(erc_config* cfg, const char* key, const char* value) {
  if (auto s = need(cfg && key && value, "null argument"); s != ERC_OK) return s;
  return guarded([&] { cfg->kv.set(key, value); });
}

erc_status erc_config_hash(const erc_config* cfg, char* buf, size_t size) {
  if (auto s = need(cfg && buf, "null argument"); s != ERC_OK) return s;
  if (auto s = need(size >= 17, "buffer too small (need 17 bytes)"); s != ERC_OK)
    return s;
  std::snprintf(buf, size, "%016llx",
                static_cast<unsigned long long>(cfg->kv.hash()));
  return ERC_OK;
}

void erc_config_free(erc_config* cfg) { delete cfg; }

erc_status erc_run_sweep(const erc_config* cfg, int threads, erc_results** out) {
  if (auto s = need(cfg && out, "null argument"); s != ERC_OK) return s;
  if (auto s = need(threads >= 1, "threads must be >= 1"); s != ERC_OK) return s;
  return guarded([&] {
    auto ex = erc::harness::Experiment::build(cfg->kv);
    auto res = std::make_unique<erc_results>();
    res->rep = ex.make_report(ex.run_sweep(threads));
    *out = res.release();
  });
}

erc_status erc_run_point(const erc_config* cfg, double power, int threads,
                         erc_results** out) {
  if (auto s = need(cfg && out, "null argument"); s != ERC_OK) return s;
  if (auto s = need(threads >= 1, "threads must be >= 1"); s != ERC_OK) return s;
  return guarded([&] {
    auto ex = erc::harness::Experiment::build(cfg->kv);
    auto res = std::make_unique<erc_results>();
    res->rep = ex.make_report({ex.run_point(power, threads)});
    *out = res.release();
  });
}

erc_status erc_run_power_split(const erc_config* cfg, int threads,
                               erc_results** out) {
  if (auto s = need(cfg && out, "null argument"); s != ERC_OK) return s;
  if (auto s = need(threads >= 1, "threads must be >= 1"); s != ERC_OK) return s;
  return guarded([&] {
    auto ex = erc::harness::Experiment::build(cfg->kv);
    auto res = std::make_unique<erc_results>();
    res->rep = ex.make_report(ex.run_power_split(threads));
    *out = res.release();
  });
}

erc_status erc_results_from_json(const char* text, erc_results** out) {
  if (auto s = need(text && out, "null argument"); s != ERC_OK) return s;
  return guarded([&] {
    auto res = std::make_unique<erc_results>();
    res->rep = erc::report::from_json(text);
    *out = res.release();
  });
}

size_t erc_results_row_count(const erc_results* r) {
  return r ? r->rep.rows.size() : 0;
}

erc_status erc_results_row(const erc_results* r, size_t index,
                           erc_result_row* out) {
  if (auto s = need(r && out, "null argument"); s != ERC_OK) return s;
  if (auto s = need(index < r->rep.rows.size(), "row index out of range");
      s != ERC_OK)
    return s;
  const auto& row = r->rep.rows[index];
  const auto [lo, hi] = erc::report::wilson_interval(row.bit_errors, row.bits);
  out->scheme = row.scheme.c_str();
  out->P = row.power;
  out->esn0_db = row.esn0_db;
  out->ebn0_db = row.ebn0_db;
  out->trials = row.trials;
  out->bit_errors = row.bit_errors;
  out->bits = row.bits;
  out->frame_errors = row.frame_errors;
  out->ber = row.ber();
  out->fer = row.fer();
  out->ber_ci_lo = lo;
  out->ber_ci_hi = hi;
  out->seed = row.point_seed;
  const auto k1 = row.extras.find("k1");
  const auto al = row.extras.find("alpha");
  out->k1 = k1 == row.extras.end() ? NAN : k1->second;
  out->alpha = al == row.extras.end() ? NAN : al->second;
  return ERC_OK;
}

erc_status erc_results_to_csv(const erc_results* r, char** out) {
  if (auto s = need(r && out, "null argument"); s != ERC_OK) return s;
  std::string csv;
  if (auto s = guarded([&] { csv = erc::report::to_csv(r->rep); }); s != ERC_OK)
    return s;
  return copy_out(csv, out);
}

erc_status erc_results_to_json(const erc_results* r, char** out) {
  if (auto s = need(r && out, "null argument"); s != ERC_OK) return s;
  std::string js;
  if (auto s = guarded([&] { js = erc::report::to_json(r->rep); }); s != ERC_OK)
    return s;
  return copy_out(js, out);
}

void erc_results_free(erc_results* r) { delete r; }

void erc_string_free(char* s) { std::free(s); }

erc_status erc_fit_threshold(const erc_results* r, double target_ber,
                             int degree, erc_threshold_result* out) {
  if (auto s = need(r && out, "null argument"); s != ERC_OK) return s;
  if (auto s = need(!r->rep.rows.empty(), "no rows to fit"); s != ERC_OK) return s;
  return guarded([&] {
    std::vector<erc::threshold::CurvePoint> pts;
    pts.reserve(r->rep.rows.size());
    for (const auto& row : r->rep.rows) {
      if (row.power <= 0.0) throw std::invalid_argument("fit: nonpositive power");
      pts.push_back({10.0 * std::log10(row.power), row.bit_errors, row.bits});
    }
    const auto th = erc::threshold::fit_threshold(pts, target_ber, degree);
    out->found = th.found ? 1 : 0;
    out->extrapolated = th.extrapolated ? 1 : 0;
    out->monotone = th.monotone ? 1 : 0;
    out->p_db = th.snr_db;
    out->deviance = th.fit.deviance;
    const int n = static_cast<int>(r->rep.cfg.get_int("n"));
    const int k = static_cast<int>(
        r->rep.cfg.get_int("k_effective", r->rep.cfg.get_int("k", n)));
    const double p = std::pow(10.0, th.snr_db / 10.0);
    out->esn0_db = erc::channel::snr_convert(p, n, k, erc::channel::SnrUnit::EsN0_dB);
    out->ebn0_db = erc::channel::snr_convert(p, n, k, erc::channel::SnrUnit::EbN0_dB);
  });
}

}  // extern "C"
