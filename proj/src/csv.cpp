#include "mfbv/csv.hpp"

#include <cmath>
#include <cstdio>

namespace mfbv::csv {

std::string num(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(std::int64_t v) { return std::to_string(v); }

std::string num(std::complex<double> z) {
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::string s = num(z.real());
  s += (std::signbit(im) ? "-" : "+");
  s += num(std::abs(im));
  s += 'i';
  return s;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void Writer::meta(const std::string& key, const std::string& value) {
  out_ << "# " << key << ": " << value << '\n';
}

void Writer::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << field(fields[i]);
  }
  out_ << '\n';
}

}  // namespace mfbv::csv
