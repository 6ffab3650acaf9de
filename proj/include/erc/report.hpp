#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "erc/config.hpp"

namespace erc::report {

// 95% Wilson score interval for errors/total.
std::pair<double, double> wilson_interval(long errors, long total,
                                          double z = 1.959963984540054);

struct ResultRow {
  std::string scheme;
  double power = 0.0;       // linear P
  double esn0_db = 0.0;
  double ebn0_db = 0.0;
  long trials = 0;          // frames simulated
  long bit_errors = 0;
  long bits = 0;            // information bits counted
  long frame_errors = 0;
  std::uint64_t point_seed = 0;
  // extra per-row fields (power-split sweeps carry k1 and alpha)
  std::map<std::string, double> extras;

  double ber() const { return bits > 0 ? static_cast<double>(bit_errors) / bits : 0.0; }
  double fer() const { return trials > 0 ? static_cast<double>(frame_errors) / trials : 0.0; }
};

struct Report {
  config::KeyValues cfg;
  std::vector<ResultRow> rows;

  std::string config_hash_hex() const;
};

// Exact column set, in order: scheme,P,EsN0_dB,EbN0_dB,trials,bit_errors,
// bits,ber,ber_ci_lo,ber_ci_hi,frame_errors,fer,seed.  Extra fields append
// after seed, sorted by name, when present on any row.
std::string to_csv(const Report& r);
std::string to_json(const Report& r);
Report from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace erc::report
