// Command line front end; everything below talks to the library exclusively
// through the C API in erc.h.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "erc.h"

namespace {

struct ConfigDeleter {
  void operator()(erc_config* c) const { erc_config_free(c); }
};
struct ResultsDeleter {
  void operator()(erc_results* r) const { erc_results_free(r); }
};
using ConfigPtr = std::unique_ptr<erc_config, ConfigDeleter>;
using ResultsPtr = std::unique_ptr<erc_results, ResultsDeleter>;

[[noreturn]] void die(const char* where, erc_status st) {
  std::cerr << "error: " << where << ": " << erc_last_error()
            << " (status " << static_cast<int>(st) << ")\n";
  std::exit(1);
}

void check(erc_status st, const char* where) {
  if (st != ERC_OK) die(where, st);
}

struct CommonOpts {
  std::string config_path;
  std::string scheme;
  std::string snr_grid;
  std::string seed;
  std::string format = "csv";
  std::string out;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config_path, "experiment config file");
  if (config_required) c->required();
  cmd->add_option("--scheme", o.scheme, "override the config's scheme");
  cmd->add_option("--snr-grid", o.snr_grid,
                  "override snr_grid (comma list or start:stop:step)");
  cmd->add_option("--seed", o.seed, "override master_seed");
  cmd->add_option("--format", o.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--threads", o.threads, "worker threads (results are invariant)")
      ->check(CLI::PositiveNumber);
}

ConfigPtr load_config(const CommonOpts& o) {
  erc_config* raw = nullptr;
  check(erc_config_from_file(o.config_path.c_str(), &raw), "config");
  ConfigPtr cfg(raw);
  if (!o.scheme.empty())
    check(erc_config_set(cfg.get(), "scheme", o.scheme.c_str()), "config");
  if (!o.snr_grid.empty())
    check(erc_config_set(cfg.get(), "snr_grid", o.snr_grid.c_str()), "config");
  if (!o.seed.empty())
    check(erc_config_set(cfg.get(), "master_seed", o.seed.c_str()), "config");
  return cfg;
}

void emit(const erc_results* res, const std::string& format,
          const std::string& out) {
  char* text = nullptr;
  if (format == "json")
    check(erc_results_to_json(res, &text), "serialize");
  else
    check(erc_results_to_csv(res, &text), "serialize");
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) {
      std::cerr << "error: cannot open " << out << "\n";
      std::exit(1);
    }
    f << text;
  }
  erc_string_free(text);
}

std::string read_all(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(1);
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error-reducing inner code simulator (SPARC / AMP, superposed "
               "LDPC / soft SIC, BER-FER Monte Carlo)"};
  app.require_subcommand(1);

  CommonOpts sweep_o, split_o, fit_o, report_o;

  auto* sweep = app.add_subcommand("sweep", "BER/FER sweep over the SNR grid");
  add_common(sweep, sweep_o, true);

  auto* split = app.add_subcommand(
      "power-split", "BER over k1_list x alpha_grid at split_snr");
  add_common(split, split_o, true);

  auto* fit = app.add_subcommand(
      "fit-threshold", "fit BER curve, report SNR* at the target BER");
  double target = 4.7e-3;
  int degree = 3;
  std::string fit_in;
  add_common(fit, fit_o, false);
  fit->add_option("--in", fit_in, "JSON report to fit (otherwise runs a sweep)");
  fit->add_option("--target", target, "target BER (default 4.7e-3)");
  fit->add_option("--degree", degree, "polynomial degree (default 3)");

  auto* rep = app.add_subcommand("report", "re-emit a JSON report as CSV or JSON");
  std::string rep_in;
  rep->add_option("--in", rep_in, "JSON report produced by sweep/power-split")
      ->required();
  rep->add_option("--format", report_o.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  rep->add_option("--out", report_o.out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (sweep->parsed()) {
    auto cfg = load_config(sweep_o);
    erc_results* res = nullptr;
    check(erc_run_sweep(cfg.get(), sweep_o.threads, &res), "sweep");
    ResultsPtr r(res);
    emit(r.get(), sweep_o.format, sweep_o.out);
  } else if (split->parsed()) {
    auto cfg = load_config(split_o);
    erc_results* res = nullptr;
    check(erc_run_power_split(cfg.get(), split_o.threads, &res), "power-split");
    ResultsPtr r(res);
    emit(r.get(), split_o.format, split_o.out);
  } else if (fit->parsed()) {
    ResultsPtr r;
    if (!fit_in.empty()) {
      const std::string text = read_all(fit_in);
      erc_results* res = nullptr;
      check(erc_results_from_json(text.c_str(), &res), "load report");
      r.reset(res);
    } else if (!fit_o.config_path.empty()) {
      auto cfg = load_config(fit_o);
      erc_results* res = nullptr;
      check(erc_run_sweep(cfg.get(), fit_o.threads, &res), "sweep");
      r.reset(res);
    } else {
      std::cerr << "error: fit-threshold needs --in or --config\n";
      return 1;
    }
    erc_threshold_result th{};
    check(erc_fit_threshold(r.get(), target, degree, &th), "fit");
    std::printf("target_ber %.6g\nfound %d\nextrapolated %d\nmonotone %d\n"
                "P_dB %.6f\nEsN0_dB %.6f\nEbN0_dB %.6f\ndeviance %.6g\n",
                target, th.found, th.extrapolated, th.monotone, th.p_db,
                th.esn0_db, th.ebn0_db, th.deviance);
    if (!th.found) return 2;
  } else if (rep->parsed()) {
    const std::string text = read_all(rep_in);
    erc_results* res = nullptr;
    check(erc_results_from_json(text.c_str(), &res), "load report");
    ResultsPtr r(res);
    emit(r.get(), report_o.format, report_o.out);
  }
  return 0;
}
