#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfbv::lab {

// Malformed or incomplete configuration. what() is "<source>:<line>: <message>"
// when a line is known, "<source>: <message>" otherwise.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

// Flat "key = value" text. '#' starts a comment; blank lines are ignored;
// keys are unique. Lists are comma-separated.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "config");
  static Config load(const std::string& path);

  const std::string& source() const { return source_; }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  int line_of(const std::string& key) const;

  // Rejects keys outside `allowed`, anchored at the offending line.
  void require_known(const std::vector<std::string>& allowed) const;

  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  std::uint64_t u64(const std::string& key) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  std::int64_t i64(const std::string& key) const;
  double real(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::uint64_t> u64s(const std::string& key) const;

  // "key=value" lines in key order; independent of comments, spacing and order.
  std::string canonical() const;

  ConfigError error(const std::string& key, const std::string& message) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry& need(const std::string& key) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace mfbv::lab
