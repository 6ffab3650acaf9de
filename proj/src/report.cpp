#include "erc/report.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace erc::report {

std::pair<double, double> wilson_interval(long errors, long total, double z) {
  if (total <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = (z / denom) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string Report::config_hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  return buf;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::vector<std::string> extra_names(const Report& r) {
  std::set<std::string> names;
  for (const auto& row : r.rows)
    for (const auto& [k, v] : row.extras) names.insert(k);
  return {names.begin(), names.end()};
}

}  // namespace

std::string to_csv(const Report& r) {
  std::ostringstream os;
  const auto extras = extra_names(r);
  os << "scheme,P,EsN0_dB,EbN0_dB,trials,bit_errors,bits,ber,ber_ci_lo,"
        "ber_ci_hi,frame_errors,fer,seed";
  for (const auto& e : extras) os << ',' << e;
  os << '\n';
  for (const auto& row : r.rows) {
    const auto [lo, hi] = wilson_interval(row.bit_errors, row.bits);
    os << row.scheme << ',' << fmt(row.power) << ',' << fmt(row.esn0_db) << ','
       << fmt(row.ebn0_db) << ',' << row.trials << ',' << row.bit_errors << ','
       << row.bits << ',' << fmt(row.ber()) << ',' << fmt(lo) << ',' << fmt(hi)
       << ',' << row.frame_errors << ',' << fmt(row.fer()) << ','
       << row.point_seed;
    for (const auto& e : extras) {
      const auto it = row.extras.find(e);
      os << ',' << (it == row.extras.end() ? "" : fmt(it->second));
    }
    os << '\n';
  }
  return os.str();
}

std::string to_json(const Report& r) {
  nlohmann::json j;
  j["config_hash"] = r.config_hash_hex();
  auto& cfg = j["config"];
  cfg = nlohmann::json::object();
  for (const auto& [k, v] : r.cfg.entries()) cfg[k] = v;
  auto& rows = j["results"];
  rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    const auto [lo, hi] = wilson_interval(row.bit_errors, row.bits);
    nlohmann::json o{{"scheme", row.scheme},
                     {"P", row.power},
                     {"EsN0_dB", row.esn0_db},
                     {"EbN0_dB", row.ebn0_db},
                     {"trials", row.trials},
                     {"bit_errors", row.bit_errors},
                     {"bits", row.bits},
                     {"ber", row.ber()},
                     {"ber_ci_lo", lo},
                     {"ber_ci_hi", hi},
                     {"frame_errors", row.frame_errors},
                     {"fer", row.fer()},
                     {"seed", row.point_seed}};
    for (const auto& [k, v] : row.extras) o[k] = v;
    rows.push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

Report from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Report r;
  for (const auto& [k, v] : j.at("config").items())
    r.cfg.set(k, v.get<std::string>());
  if (j.contains("config_hash") &&
      j.at("config_hash").get<std::string>() != r.config_hash_hex())
    throw std::runtime_error("report: config hash mismatch (file edited?)");
  static const std::set<std::string> core = {
      "scheme", "P",   "EsN0_dB",    "EbN0_dB",   "trials", "bit_errors", "bits",
      "ber",    "fer", "ber_ci_lo",  "ber_ci_hi", "frame_errors", "seed"};
  for (const auto& o : j.at("results")) {
    ResultRow row;
    row.scheme = o.at("scheme").get<std::string>();
    row.power = o.at("P").get<double>();
    row.esn0_db = o.at("EsN0_dB").get<double>();
    row.ebn0_db = o.at("EbN0_dB").get<double>();
    row.trials = o.at("trials").get<long>();
    row.bit_errors = o.at("bit_errors").get<long>();
    row.bits = o.at("bits").get<long>();
    row.frame_errors = o.at("frame_errors").get<long>();
    row.point_seed = o.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : o.items())
      if (!core.contains(k)) row.extras[k] = v.get<double>();
    r.rows.push_back(std::move(row));
  }
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace erc::report
