#pragma once

#include <string>
#include <vector>

#include "mfbv/arith.hpp"

namespace mfbv::smooth {

using arith::u64;

inline constexpr u64 kPsiEnumerationBound = 1'000'000'000ULL;

struct SmoothFilter {
  enum class Kind { none, coprime, progression };
  Kind kind = Kind::none;
  u64 q = 1;
  u64 a = 0;

  static SmoothFilter none() { return {}; }
  static SmoothFilter coprime_to(u64 q) { return {Kind::coprime, q, 0}; }
  static SmoothFilter progression(u64 q, u64 a) { return {Kind::progression, q, a % q}; }
};

struct SmoothCount {
  double x = 1;
  double y = 2;
  double u = 0;  // log x / log y
  u64 value = 0;
  SmoothFilter filter;
};

// #{n <= x : P(n) <= y} with P(1) = 1, optionally restricted by the filter.
SmoothCount psi_exact(double x, double y, SmoothFilter filter = {});
u64 psi(double x, double y, SmoothFilter filter = {});

// Cross-checks for x <= 10^6: largest-prime-factor sieve and Buchstab's recursion.
u64 psi_naive(u64 x, u64 y);
u64 psi_buchstab(u64 x, u64 y);

// Dickman's function on [0, u_max], stepped from u rho(u) = int_{u-1}^u rho.
class DickmanRho {
 public:
  explicit DickmanRho(double u_max = 20.0, int steps_per_unit = 2048);

  double operator()(double u) const;
  double u_max() const { return u_max_; }
  double step() const { return h_; }
  int steps_per_unit() const { return n_; }
  const std::vector<double>& samples() const { return rho_; }  // rho(k * step)

 private:
  double u_max_;
  int n_;
  double h_;
  std::vector<double> rho_;
};

const DickmanRho& default_dickman();
double dickman_rho(double u);

struct SaddlePoint {
  double x = 0;
  double y = 0;
  double alpha = 0;
  double residual = 0;  // sum_{p<=y} log p / (p^alpha - 1) - log x
};

SaddlePoint alpha_saddle(double x, double y);
// sum_{p<=y} log p / (p^alpha - 1) - log x
double saddle_residual(double alpha, double x, double y);

// sum_{n > big_y, P(n) <= w} 1/n
double smooth_tail(u64 w, u64 big_y);

struct CompareRow {
  std::string quantity;
  std::string params;
  double value = 0;
};

struct CompareOptions {
  double x = 1e6;
  double y = 1e3;
  std::vector<double> d_list = {1, 2, 10};
  u64 tail_w = 5;
  u64 tail_y = 10'000;
};

// Ratios Psi/(x rho(u)), Psi(x/d,y) d^alpha / Psi(x,y), and the smooth tail sum.
std::vector<CompareRow> smooth_compare(const CompareOptions& opt);

}  // namespace mfbv::smooth
