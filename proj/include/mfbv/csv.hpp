#pragma once

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mfbv::csv {

// Shortest round-trip decimal form ("%.17g"), '.' decimal point.
std::string num(double v);
std::string num(std::uint64_t v);
std::string num(std::int64_t v);
// re+imi, e.g. "1.5-2i"
std::string num(std::complex<double> z);

// Quotes a field when it contains a comma, quote or newline.
std::string field(const std::string& s);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void meta(const std::string& key, const std::string& value);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

}  // namespace mfbv::csv
