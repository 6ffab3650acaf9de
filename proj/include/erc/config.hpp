#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace erc::config {

// Flat key = value configuration with # comments.  Keys are validated against
// the scheme's whitelist at parse time; unknown keys are errors, not typos.
class KeyValues {
 public:
  static KeyValues parse(const std::string& text);
  static KeyValues parse_file(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);  // insert or overwrite

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& dflt) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long dflt) const;
  double get_real(const std::string& key) const;
  double get_real(const std::string& key, double dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t dflt) const;
  // Comma list or "start:stop:step" range.
  std::vector<double> get_grid(const std::string& key) const;
  std::vector<long> get_int_list(const std::string& key) const;

  // Sorted key=value lines; the canonical form hashing and reports use.
  std::string canonical() const;
  std::uint64_t hash() const;  // FNV-1a over canonical()

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  void require_known(const std::vector<std::string>& known) const;

 private:
  const std::string* find(const std::string& key) const;
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::vector<double> parse_grid(const std::string& text);

}  // namespace erc::config
