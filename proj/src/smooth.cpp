#include "mfbv/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "mfbv/errors.hpp"

namespace mfbv::smooth {

namespace {

u64 floor_arg(double x, const char* what) {
  if (!(x >= 1.0)) throw DomainError(std::string(what) + ": x must be >= 1");
  if (x > double(kPsiEnumerationBound)) {
    throw ResourceError(std::string(what) + ": x exceeds the enumeration bound 1e9");
  }
  return static_cast<u64>(std::floor(x));
}

// Count of n <= m with every prime factor in ps[i..].
u64 count_from(const std::vector<u64>& ps, u64 m, std::size_t i) {
  u64 total = 1;
  for (std::size_t j = i; j < ps.size(); ++j) {
    const u64 p = ps[j];
    if (p > m) break;
    if (p > m / p) {
      // n = p' alone for every remaining p' <= m; nothing longer fits.
      const auto end = std::upper_bound(ps.begin() + j, ps.end(), m);
      total += u64(end - (ps.begin() + j));
      break;
    }
    total += count_from(ps, m / p, j);
  }
  return total;
}

u64 count_residue(const std::vector<u64>& ps, u64 m, std::size_t i, u64 r, u64 q, u64 a) {
  u64 total = (r == a) ? 1 : 0;
  for (std::size_t j = i; j < ps.size(); ++j) {
    const u64 p = ps[j];
    if (p > m) break;
    total += count_residue(ps, m / p, j, arith::mul_mod(r, p % q, q), q, a);
  }
  return total;
}

}  // namespace

SmoothCount psi_exact(double x, double y, SmoothFilter filter) {
  const u64 big_x = floor_arg(x, "psi_exact");
  if (!(y >= 2.0)) throw DomainError("psi_exact: y must be >= 2");
  if (filter.kind != SmoothFilter::Kind::none && filter.q == 0) {
    throw DomainError("psi_exact: filter modulus must be positive");
  }
  SmoothCount out{x, y, std::log(x) / std::log(y), 0, filter};

  const u64 ycap = y >= double(big_x) ? big_x : static_cast<u64>(std::floor(y));
  if (filter.kind == SmoothFilter::Kind::none && ycap == big_x) {
    out.value = big_x;
    return out;
  }
  auto ps = arith::primes_up_to(ycap);
  switch (filter.kind) {
    case SmoothFilter::Kind::none:
      out.value = count_from(ps, big_x, 0);
      break;
    case SmoothFilter::Kind::coprime:
      std::erase_if(ps, [&](u64 p) { return filter.q % p == 0; });
      out.value = count_from(ps, big_x, 0);
      break;
    case SmoothFilter::Kind::progression:
      out.value = count_residue(ps, big_x, 0, 1 % filter.q, filter.q, filter.a % filter.q);
      break;
  }
  return out;
}

u64 psi(double x, double y, SmoothFilter filter) { return psi_exact(x, y, filter).value; }

u64 psi_naive(u64 x, u64 y) {
  if (x > 10'000'000) throw ResourceError("psi_naive: x too large");
  std::vector<u64> lpf(x + 1, 0);
  if (x >= 1) lpf[1] = 1;
  for (u64 p = 2; p <= x; ++p) {
    if (lpf[p] != 0) continue;
    for (u64 m = p; m <= x; m += p) lpf[m] = p;
  }
  u64 count = 0;
  for (u64 n = 1; n <= x; ++n) count += lpf[n] <= y ? 1 : 0;
  return count;
}

namespace {

u64 buchstab(const std::vector<u64>& ps, u64 x, u64 y) {
  if (y >= x) return x;
  u64 value = x;
  for (auto it = std::upper_bound(ps.begin(), ps.end(), y); it != ps.end() && *it <= x; ++it) {
    value -= buchstab(ps, x / *it, *it);
  }
  return value;
}

}  // namespace

// Psi(x, y) = Psi(x, x) - sum_{y < p <= x} Psi(x/p, p)
u64 psi_buchstab(u64 x, u64 y) {
  if (x > 10'000'000) throw ResourceError("psi_buchstab: x too large");
  const auto ps = arith::primes_up_to(x);
  return buchstab(ps, x, y);
}

DickmanRho::DickmanRho(double u_max, int steps_per_unit) : u_max_(u_max), n_(steps_per_unit) {
  if (!(u_max >= 1.0) || steps_per_unit < 4) throw DomainError("DickmanRho: bad grid");
  h_ = 1.0 / n_;
  const std::size_t units = static_cast<std::size_t>(std::ceil(u_max));
  const std::size_t big_n = static_cast<std::size_t>(n_);
  const std::size_t total = units * big_n;
  rho_.assign(total + 1, 1.0);
  // delta[k] = integral of rho over [(k-1)h, kh] by the 4-point Adams-Moulton rule.
  std::vector<double> delta(total + 1, h_);
  delta[0] = 0.0;
  // Lower-order one-sided rules for the first steps after an integer keep stencils off the kink.
  const double w_am[3][4] = {{0.5, 0.5, 0.0, 0.0},
                             {5.0 / 12, 8.0 / 12, -1.0 / 12, 0.0},
                             {9.0 / 24, 19.0 / 24, -5.0 / 24, 1.0 / 24}};
  double window = 1.0;  // integral over [u_n - 1, u_n] at n = N
  for (std::size_t n = big_n + 1; n <= total; ++n) {
    const double u = double(n) * h_;
    const double* w = w_am[std::min<std::size_t>((n - 1) % big_n, 2)];
    const double known = window - delta[n - big_n] +
                         h_ * (w[1] * rho_[n - 1] + w[2] * rho_[n - 2] + w[3] * rho_[n - 3]);
    rho_[n] = known / (u - w[0] * h_);
    delta[n] = h_ * (w[0] * rho_[n] + w[1] * rho_[n - 1] + w[2] * rho_[n - 2] + w[3] * rho_[n - 3]);
    window += delta[n] - delta[n - big_n];
    if (n % big_n == 0) {
      // Resum once per unit so cancellation never spans more than one unit of decay.
      window = 0.0;
      for (std::size_t k = n - big_n + 1; k <= n; ++k) window += delta[k];
    }
  }
}

double DickmanRho::operator()(double u) const {
  if (u < 0.0 || std::isnan(u)) throw DomainError("dickman_rho: u must be >= 0");
  if (u > u_max_) throw DomainError("dickman_rho: u exceeds u_max");
  if (u <= 1.0) return 1.0;
  // Cubic Lagrange on four nodes of the unit interval containing u.
  auto unit = static_cast<std::size_t>(std::floor(u));
  if (double(unit) == u && unit > 0) --unit;
  const double t = (u - double(unit)) * n_;
  const int j = std::min(static_cast<int>(std::floor(t)), n_ - 1);
  const int s = std::clamp(j - 1, 0, n_ - 3);
  const std::size_t base = unit * static_cast<std::size_t>(n_) + static_cast<std::size_t>(s);
  const double r = t - s;
  double value = 0.0;
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b != a) w *= (r - b) / double(a - b);
    }
    value += w * rho_[base + static_cast<std::size_t>(a)];
  }
  return value;
}

const DickmanRho& default_dickman() {
  static const DickmanRho rho;
  return rho;
}

double dickman_rho(double u) { return default_dickman()(u); }

namespace {

double saddle_sum(const std::vector<u64>& ps, double alpha, double log_x) {
  double s = 0.0;
  for (u64 p : ps) {
    const double lp = std::log(double(p));
    s += lp / std::expm1(alpha * lp);
  }
  return s - log_x;
}

}  // namespace

double saddle_residual(double alpha, double x, double y) {
  const auto ps = arith::primes_up_to(static_cast<u64>(std::floor(y)));
  return saddle_sum(ps, alpha, std::log(x));
}

SaddlePoint alpha_saddle(double x, double y) {
  if (!(y >= 2.0) || !(x >= y)) throw DomainError("alpha_saddle: need 2 <= y <= x");
  const auto ps = arith::primes_up_to(static_cast<u64>(std::floor(y)));
  const double log_x = std::log(x);
  double lo = 1e-6, hi = 1.999;
  const double f_lo = saddle_sum(ps, lo, log_x), f_hi = saddle_sum(ps, hi, log_x);
  if (!(f_lo > 0.0) || !(f_hi < 0.0)) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "alpha_saddle: no sign change on [1e-6, 1.999] for x=%g y=%g (F(lo)=%g, F(hi)=%g)",
                  x, y, f_lo, f_hi);
    throw NumericError(buf);
  }
  // The sum is decreasing in alpha.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (saddle_sum(ps, mid, log_x) > 0.0 ? lo : hi) = mid;
  }
  const double r_lo = saddle_sum(ps, lo, log_x), r_hi = saddle_sum(ps, hi, log_x);
  const bool take_lo = std::abs(r_lo) <= std::abs(r_hi);
  return {x, y, take_lo ? lo : hi, take_lo ? r_lo : r_hi};
}

namespace {

void reciprocal_sum(const std::vector<u64>& ps, u64 n, u64 limit, std::size_t i, long double& acc) {
  acc += 1.0L / static_cast<long double>(n);
  for (std::size_t j = i; j < ps.size(); ++j) {
    if (ps[j] > limit / n) break;
    reciprocal_sum(ps, n * ps[j], limit, j, acc);
  }
}

}  // namespace

// prod_{p<=w} p/(p-1) - sum_{n<=Y, P(n)<=w} 1/n
double smooth_tail(u64 w, u64 big_y) {
  if (w < 2) throw DomainError("smooth_tail: w must be >= 2");
  if (big_y > kPsiEnumerationBound) throw ResourceError("smooth_tail: Y exceeds the enumeration bound");
  const auto ps = arith::primes_up_to(w);
  long double euler = 1.0L;
  for (u64 p : ps) euler *= static_cast<long double>(p) / static_cast<long double>(p - 1);
  long double head = 0.0L;
  if (big_y >= 1) reciprocal_sum(ps, 1, big_y, 0, head);
  return static_cast<double>(euler - head);
}

namespace {

std::string fmt_params(const char* format, double a, double b = 0.0) {
  char buf[96];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

}  // namespace

std::vector<CompareRow> smooth_compare(const CompareOptions& opt) {
  std::vector<CompareRow> rows;
  const auto base = psi_exact(opt.x, opt.y);
  const std::string xy = fmt_params("x=%.17g;y=%.17g", opt.x, opt.y);
  const double rho_u = dickman_rho(base.u);
  rows.push_back({"psi", xy, double(base.value)});
  rows.push_back({"u", xy, base.u});
  rows.push_back({"rho_u", xy, rho_u});
  rows.push_back({"psi_over_x_rho", xy, double(base.value) / (opt.x * rho_u)});
  const auto sp = alpha_saddle(opt.x, opt.y);
  rows.push_back({"alpha", xy, sp.alpha});
  rows.push_back({"alpha_residual", xy, sp.residual});
  for (double d : opt.d_list) {
    if (!(d >= 1.0)) throw DomainError("smooth_compare: d must be >= 1");
    const double ratio = double(psi(opt.x / d, opt.y)) * std::pow(d, sp.alpha) / double(base.value);
    rows.push_back({"psi_shift_ratio", xy + fmt_params(";d=%.17g", d), ratio});
  }
  rows.push_back({"tail", fmt_params("w=%.0f;Y=%.0f", double(opt.tail_w), double(opt.tail_y)),
                  smooth_tail(opt.tail_w, opt.tail_y)});
  return rows;
}

}  // namespace mfbv::smooth
