#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mfbv/errors.hpp"
#include "mfbv/smooth.hpp"

using namespace mfbv;
using namespace mfbv::smooth;

namespace {

// Largest prime factor by trial division.
u64 lpf_trial(u64 n) {
  u64 best = 1;
  for (u64 p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      best = p;
      n /= p;
    }
  }
  return n > 1 ? n : best;
}

}  // namespace

TEST_CASE("psi examples") {
  CHECK(psi(16, 3) == 9);
  CHECK(psi(100, 2) == 7);
  CHECK(psi(1000.7, 5000) == 1000);
  CHECK(psi(1, 2) == 1);
  CHECK(psi_exact(1000, 10).u == doctest::Approx(3.0));
  CHECK_THROWS_AS(psi(2e9, 3), ResourceError);
  CHECK_THROWS_AS(psi(0.5, 3), DomainError);
  CHECK_THROWS_AS(psi(10, 1.5), DomainError);
}

TEST_CASE("psi matches trial-division counts for x <= 1e5") {
  const u64 limit = 100'000;
  std::vector<u64> lpf(limit + 1);
  for (u64 n = 1; n <= limit; ++n) lpf[n] = lpf_trial(n);
  const std::vector<u64> ys = {2, 3, 5, 7, 10, 31, 100, 316, 1000, 3162, 10'000, 31'623, 100'000};
  for (u64 y : ys) {
    u64 count = 0;
    for (u64 n = 1; n <= limit; ++n) {
      count += lpf[n] <= y ? 1 : 0;
      if (n % 997 == 0 || n == limit) REQUIRE(psi(double(n), double(y)) == count);
    }
  }
  for (u64 x : {1'000ULL, 54'321ULL, 100'000ULL}) {
    for (u64 y : {2ULL, 7ULL, 50ULL, 400ULL}) {
      CHECK(psi_naive(x, y) == psi(double(x), double(y)));
      CHECK(psi_buchstab(x, y) == psi(double(x), double(y)));
    }
  }
  CHECK(psi_buchstab(1'000'000, 1000) == psi(1e6, 1e3));
}

TEST_CASE("psi monotone in x and y") {
  u64 prev = 0;
  for (double x = 1; x <= 1e6; x *= 1.7) {
    const u64 v = psi(x, 50);
    CHECK(v >= prev);
    prev = v;
  }
  prev = 0;
  for (double y = 2; y <= 1e4; y *= 1.9) {
    const u64 v = psi(1e6, y);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("filtered counts") {
  for (u64 q : {1ULL, 3ULL, 4ULL, 10ULL, 12ULL, 17ULL}) {
    for (double y : {3.0, 11.0, 200.0}) {
      const double x = 50'000;
      u64 sum = 0, units = 0, brute_units = 0;
      for (u64 a = 0; a < q; ++a) {
        const u64 v = psi(x, y, SmoothFilter::progression(q, a));
        sum += v;
        if (arith::gcd(a, q) == 1) units += v;
        u64 brute = 0;
        for (u64 n = a == 0 ? q : a; n <= 50'000; n += q) brute += lpf_trial(n) <= y ? 1 : 0;
        REQUIRE(brute == v);
      }
      for (u64 n = 1; n <= 50'000; ++n) brute_units += (arith::gcd(n, q) == 1 && lpf_trial(n) <= y) ? 1 : 0;
      CHECK(sum == psi(x, y));
      CHECK(units == psi(x, y, SmoothFilter::coprime_to(q)));
      CHECK(brute_units == units);
    }
  }
}

TEST_CASE("Dickman rho values") {
  CHECK(dickman_rho(0.5) == 1.0);
  CHECK(dickman_rho(0.0) == 1.0);
  CHECK(dickman_rho(1.0) == 1.0);
  for (double u = 1.0; u <= 2.0; u += 1.0 / 1237) {
    REQUIRE(std::abs(dickman_rho(u) - (1.0 - std::log(u))) < 1e-8);
  }
  CHECK(std::abs(dickman_rho(2.0) - 0.3068528194400547) < 1e-8);
  CHECK(std::abs(dickman_rho(3.0) - 0.0486083882911316) < 1e-6);

  const DickmanRho fine(4.0, 20'480);
  for (double u : {2.5, 3.0, 3.7}) CHECK(std::abs(fine(u) - dickman_rho(u)) < 1e-8);

  CHECK_THROWS_AS(dickman_rho(-0.1), DomainError);
  CHECK_THROWS_AS(dickman_rho(20.5), DomainError);
}

TEST_CASE("Dickman rho integral equation, positivity, monotonicity") {
  const auto& rho = default_dickman();
  auto integral = [&](double a, double b) {
    // Split at integers where rho has kinks.
    double total = 0.0;
    double lo = a;
    while (lo < b) {
      const double hi = std::min(b, std::floor(lo) + 1.0);
      total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double t) { return rho(t); }, lo, hi, 8, 1e-14);
      lo = hi;
    }
    return total;
  };
  for (double u = 1.0 + 1.0 / 37; u <= 20.0; u += 0.173) {
    const double lhs = u * rho(u);
    REQUIRE(std::abs(lhs - integral(u - 1.0, u)) < 1e-8);
  }
  double prev = 1.0;
  const auto& s = rho.samples();
  for (std::size_t k = std::size_t(rho.steps_per_unit()) + 1; k < s.size(); ++k) {
    REQUIRE(s[k] > 0.0);
    REQUIRE(s[k] < prev);
    prev = s[k];
  }
  // Known value rho(10) = 2.770941735e-11.
  CHECK(rho(10.0) == doctest::Approx(2.770941735e-11).epsilon(1e-6));
}

TEST_CASE("saddle point") {
  const auto sp = alpha_saddle(1e6, 1e3);
  CHECK(std::abs(sp.residual) < 1e-10);
  CHECK(std::abs(saddle_residual(sp.alpha, 1e6, 1e3)) < 1e-10);
  CHECK(sp.alpha > 0.0);
  CHECK(sp.alpha < 2.0);
  CHECK(alpha_saddle(1e6, 1e3).alpha < alpha_saddle(1e5, 1e3).alpha);

  const auto s8 = alpha_saddle(1e8, 1e2);
  const double u = 4.0;
  const double ratio = std::pow(1e2, 1.0 - s8.alpha) / (u * std::log(u));
  CHECK(ratio >= 0.2);
  CHECK(ratio <= 5.0);

  const std::vector<double> xs = {1e4, 1e5, 1e6, 1e7, 1e8};
  const std::vector<double> ys = {10, 30, 100, 300, 1000};
  std::vector<std::vector<double>> a(xs.size(), std::vector<double>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const auto r = alpha_saddle(xs[i], ys[j]);
      CHECK(std::abs(r.residual) < 1e-10);
      a[i][j] = r.alpha;
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      if (i + 1 < xs.size()) CHECK(a[i + 1][j] < a[i][j]);
      if (j + 1 < ys.size()) CHECK(a[i][j + 1] > a[i][j]);
    }
  }
  CHECK_THROWS_AS(alpha_saddle(10, 100), DomainError);
}

TEST_CASE("smooth tail matches enumeration") {
  // Enumerate 5-smooth n in (1e4, 1e15]; the remainder beyond 1e15 is below 1e-12.
  long double acc = 0.0L;
  for (u64 a = 1; a <= 1'000'000'000'000'000ULL; a *= 2) {
    for (u64 b = a; b <= 1'000'000'000'000'000ULL; b *= 3) {
      for (u64 c = b; c <= 1'000'000'000'000'000ULL; c *= 5) {
        if (c > 10'000) acc += 1.0L / static_cast<long double>(c);
        if (c > 1'000'000'000'000'000ULL / 5) break;
      }
      if (b > 1'000'000'000'000'000ULL / 3) break;
    }
    if (a > 1'000'000'000'000'000ULL / 2) break;
  }
  const double tail = smooth_tail(5, 10'000);
  CHECK(std::abs(tail - double(acc)) < 1e-11);
  CHECK(tail < 0.01);
  CHECK(tail > 0.0);
}

TEST_CASE("smooth_compare report") {
  CompareOptions opt;
  const auto rows = smooth_compare(opt);
  bool saw_ratio = false, saw_d1 = false, saw_tail = false;
  for (const auto& r : rows) {
    if (r.quantity == "psi_over_x_rho") {
      saw_ratio = true;
      CHECK(r.value >= 0.8);
      CHECK(r.value <= 1.25);
    }
    if (r.quantity == "psi_shift_ratio" && r.params.ends_with(";d=1")) {
      saw_d1 = true;
      CHECK(r.value == 1.0);
    }
    if (r.quantity == "tail") {
      saw_tail = true;
      CHECK(r.value < 0.01);
    }
  }
  CHECK(saw_ratio);
  CHECK(saw_d1);
  CHECK(saw_tail);
}
