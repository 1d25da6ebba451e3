#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace replilearn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value text: one key per line, '#' starts a comment, blank lines
// ignored, surrounding whitespace trimmed. Later keys override earlier ones.
class Config {
 public:
  Config() = default;
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key, double fallback) const;
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const;
  // Comma-separated numbers.
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace replilearn
