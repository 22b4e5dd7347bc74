#include "mfbv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mfbv::lab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::optional<double> to_double(const std::string& s) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string{}) + ": " + message),
      line_(line) {}

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq)), value = trim(body.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(source, line, "invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(source, line, "empty value for '" + key + "'");
    if (c.entries_.count(key)) {
      throw ConfigError(source, line,
                        "duplicate key '" + key + "' (first set on line " + std::to_string(c.entries_[key].line) + ")");
    }
    c.entries_[key] = {value, line};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path);
}

int Config::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

ConfigError Config::error(const std::string& key, const std::string& message) const {
  return ConfigError(source_, line_of(key), message);
}

void Config::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, entry] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(source_, entry.line, "unknown key '" + key + "'");
  }
}

const Config::Entry& Config::need(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(source_, 0, "missing required key '" + key + "'");
  return it->second;
}

std::string Config::str(const std::string& key) const { return need(key).value; }

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

double Config::real(const std::string& key) const {
  const auto& e = need(key);
  const auto v = to_double(e.value);
  if (!v) throw ConfigError(source_, e.line, "'" + key + "' must be a number, got '" + e.value + "'");
  return *v;
}

double Config::real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

std::uint64_t Config::u64(const std::string& key) const {
  const auto& e = need(key);
  const auto v = to_double(e.value);
  // Accepts 1e6 as well as 1000000; rejects fractions and negatives.
  if (!v || *v < 0 || *v != std::floor(*v) || *v > 9.007199254740992e15)
    throw ConfigError(source_, e.line, "'" + key + "' must be a non-negative integer, got '" + e.value + "'");
  return static_cast<std::uint64_t>(*v);
}

std::uint64_t Config::u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? u64(key) : fallback;
}

std::int64_t Config::i64(const std::string& key) const {
  const auto& e = need(key);
  const auto v = to_double(e.value);
  if (!v || *v != std::floor(*v) || std::abs(*v) > 9.007199254740992e15)
    throw ConfigError(source_, e.line, "'" + key + "' must be an integer, got '" + e.value + "'");
  return static_cast<std::int64_t>(*v);
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& e = need(key);
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  throw ConfigError(source_, e.line, "'" + key + "' must be true or false, got '" + e.value + "'");
}

std::vector<double> Config::reals(const std::string& key) const {
  const auto& e = need(key);
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) {
    const auto v = to_double(item);
    if (!v) throw ConfigError(source_, e.line, "'" + key + "' must be a list of numbers, got '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& fallback) const {
  return has(key) ? reals(key) : fallback;
}

std::vector<std::uint64_t> Config::u64s(const std::string& key) const {
  const auto& e = need(key);
  std::vector<std::uint64_t> out;
  for (double v : reals(key)) {
    if (v < 0 || v != std::floor(v) || v > 9.007199254740992e15)
      throw ConfigError(source_, e.line, "'" + key + "' must list non-negative integers");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, entry] : entries_) out += key + "=" + entry.value + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mfbv::lab
