#include "erc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace erc::config {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValues KeyValues::parse(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key or value");
    kv.set(key, value);
  }
  return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const std::string* KeyValues::find(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return &v;
  return nullptr;
}

bool KeyValues::has(const std::string& key) const { return find(key) != nullptr; }

void KeyValues::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_)
    if (k == key) {
      v = value;
      return;
    }
  entries_.emplace_back(key, value);
}

std::string KeyValues::get_string(const std::string& key) const {
  const auto* v = find(key);
  if (!v) throw std::runtime_error("config: missing key '" + key + "'");
  return *v;
}

std::string KeyValues::get_string(const std::string& key, const std::string& dflt) const {
  const auto* v = find(key);
  return v ? *v : dflt;
}

long KeyValues::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  std::size_t used = 0;
  const long x = std::stol(v, &used);
  if (used != v.size()) throw std::runtime_error("config: '" + key + "' is not an integer");
  return x;
}

long KeyValues::get_int(const std::string& key, long dflt) const {
  return has(key) ? get_int(key) : dflt;
}

double KeyValues::get_real(const std::string& key) const {
  const std::string v = get_string(key);
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size()) throw std::runtime_error("config: '" + key + "' is not a number");
  return x;
}

double KeyValues::get_real(const std::string& key, double dflt) const {
  return has(key) ? get_real(key) : dflt;
}

bool KeyValues::get_bool(const std::string& key, bool dflt) const {
  if (!has(key)) return dflt;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error("config: '" + key + "' is not a boolean");
}

std::uint64_t KeyValues::get_seed(const std::string& key, std::uint64_t dflt) const {
  if (!has(key)) return dflt;
  const std::string v = get_string(key);
  std::size_t used = 0;
  const std::uint64_t x = std::stoull(v, &used, 0);
  if (used != v.size()) throw std::runtime_error("config: '" + key + "' is not a seed");
  return x;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
      throw std::runtime_error("grid: want start:stop:step with step > 0");
    for (double x = start; x <= stop + 1e-9 * step; x += step) out.push_back(x);
    return out;
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::runtime_error("grid: empty");
  return out;
}

std::vector<double> KeyValues::get_grid(const std::string& key) const {
  return parse_grid(get_string(key));
}

std::vector<long> KeyValues::get_int_list(const std::string& key) const {
  std::istringstream is(get_string(key));
  std::vector<long> out;
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) continue;
    out.push_back(std::stol(tok));
  }
  if (out.empty()) throw std::runtime_error("config: empty list for '" + key + "'");
  return out;
}

std::string KeyValues::canonical() const {
  auto sorted = entries_;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream os;
  for (const auto& [k, v] : sorted) os << k << '=' << v << '\n';
  return os.str();
}

std::uint64_t KeyValues::hash() const {
  const std::string c = canonical();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : c) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

void KeyValues::require_known(const std::vector<std::string>& known) const {
  for (const auto& [k, v] : entries_) {
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw std::runtime_error("config: unknown key '" + k + "'");
  }
}

}  // namespace erc::config
