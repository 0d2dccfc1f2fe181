#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gvr/experiments.hpp"

namespace gvrcli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `key = value` file; '#' starts a comment. Later assignments win.
class Config {
 public:
  static Config parse(std::istream& is);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  // Comma-separated lists.
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;

  // Throws ConfigError naming the first key not in `known`.
  void require_known(const std::set<std::string>& known) const;

 private:
  std::map<std::string, std::string> kv_;
};

gvr::StabilityConfig stability_config(const Config& c);
gvr::BenchConfig bench_config(const Config& c);
gvr::IdentifyConfig identify_config(const Config& c);

gvr::Provenance provenance(const gvr::StabilityConfig& c);
gvr::Provenance provenance(const gvr::BenchConfig& c);
gvr::Provenance provenance(const gvr::IdentifyConfig& c);

}  // namespace gvrcli
