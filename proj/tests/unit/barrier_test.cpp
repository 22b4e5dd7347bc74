#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mfbv/barrier.hpp"
#include "mfbv/errors.hpp"

using namespace mfbv;
using namespace mfbv::barrier;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double gk(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 8, 1e-13);
}

cplx unit(double frac) { return std::polar(1.0, 2.0 * kPi * frac); }

u64 inv_mod(u64 a, u64 m) {
  for (u64 x = 1; x < m; ++x)
    if (a * x % m == 1) return x;
  return 0;
}

// A quad with q, q' in (Q(1+eta)/2, 2Q], L > (1+2 eta) M and r on the plateau of psi(./M).
GQuadruple plateau_quad(const SmoothBump& bump) {
  const double m = 1e6 / 13.0, eta = bump.eta();
  for (i64 a = 1; a < 3000; ++a) {
    try {
      auto quad = make_quad(1000, 1006, 7, 13, a, m);
      if (quad.r > eta * m + 50 && quad.r < (1 - eta) * m - 50) return quad;
    } catch (const DomainError&) {
    }
  }
  throw std::runtime_error("no plateau quad");
}

}  // namespace

TEST_CASE("bump shape") {
  const auto bump = build_bump(0.05);
  CHECK(bump(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bump(-0.1) == 0.0);
  CHECK(bump(1.1) == 0.0);
  CHECK(bump(0.05) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(bump(0.95) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(bump(0.0) == doctest::Approx(0.5).epsilon(1e-13));
  for (double x = -0.06; x < 1.06; x += 0.0037) {
    CHECK(bump(x) >= 0.0);
    CHECK(bump(x) <= 1.0 + 1e-14);
  }
  const double mass = gk([&](double x) { return bump(x); }, -0.05, 0.05) +
                      gk([&](double x) { return bump(x); }, 0.05, 0.95) +
                      gk([&](double x) { return bump(x); }, 0.95, 1.05);
  CHECK(std::abs(mass - 1.0) < 1e-10);
  CHECK_THROWS_AS(SmoothBump(0.25), DomainError);
  CHECK_THROWS_AS(SmoothBump(0.0), DomainError);
}

TEST_CASE("mollifier cdf and transform") {
  Mollifier mo;
  CHECK(mo.mass_constant() == doctest::Approx(0.44399381616807942).epsilon(1e-14));
  CHECK(mo.cdf(-1.0) == doctest::Approx(0.0));
  CHECK(mo.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(mo.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (double s = -0.95; s < 1.0; s += 0.1) {
    const double ref = gk([&](double t) { return mo.density(t); }, -1.0, s);
    CHECK(std::abs(ref - mo.cdf(s)) < 1e-13);
  }
  for (double s : {0.0, 1.0, 7.5, 40.0, 150.0}) {
    const double ref = gk([&](double t) { return mo.density(t) * std::cos(s * t); }, -1.0, 1.0);
    CHECK(std::abs(ref - mo.fourier(s)) < 1e-12);
  }
  CHECK(std::abs(mo.fourier(5000.0)) < 1e-15);
}

TEST_CASE("bump transform convention") {
  const auto bump = build_bump(0.1);
  for (double t : {0.0, 0.7, 3.0, 12.0, 50.0}) {
    auto part = [&](double a, double b, bool im) {
      return gk([&](double x) { return bump(x) * (im ? -std::sin(t * x) : std::cos(t * x)); }, a, b);
    };
    cplx ref{};
    for (auto [a, b] : {std::pair{-0.1, 0.1}, {0.1, 0.9}, {0.9, 1.1}}) ref += cplx(part(a, b, false), part(a, b, true));
    CHECK(std::abs(ref - bump.fourier(t)) < 1e-10);
  }
}

TEST_CASE("decay constants") {
  const auto bump = build_bump(0.05);
  const double c0 = decay_constant(bump, 0, 1e3, 4000);
  CHECK(c0 == doctest::Approx(1.0 / 0.05).epsilon(1e-9));  // |psi^(0)| eta^{-1}
  const double c2 = decay_constant(bump, 2, 1e3, 4000);
  CHECK(std::isfinite(c2));
  CHECK(c2 > 0.0);
}

TEST_CASE("quad validation") {
  auto quad = make_quad(15, 21, 7, 13, 1, 100);
  CHECK(quad.d == 3);
  CHECK(quad.l == 5);
  CHECK(quad.l2 == 7);
  CHECK(quad.big_l == 105);
  CHECK((quad.p * quad.r) % quad.q == 1);
  CHECK((quad.p2 * quad.r) % quad.q2 == 1);
  CHECK(quad.k == 2);
  CHECK_THROWS_AS(make_quad(15, 21, 7, 14, 1, 100), DomainError);  // p != p' mod d
  CHECK_THROWS_AS(make_quad(15, 21, 7, 13, 3, 100), DomainError);  // a not a unit
  CHECK_THROWS_AS(make_quad(15, 21, 5, 11, 1, 100), DomainError);  // (p, q) > 1
  CHECK_THROWS_AS(make_quad(15, 21, 7, 7, 1, 100), DomainError);   // (p, p') > 1
  CHECK_THROWS_AS(make_quad(15, 21, 7, 13, 1, 0.5), DomainError);
}

TEST_CASE("exact against poisson") {
  const auto bump = build_bump(0.05);
  const auto quad = make_quad(15, 21, 7, 13, 1, 100);
  const double exact = g_exact(quad, bump);
  CHECK(std::abs(exact - g_poisson(quad, bump, 10'000)) < 1e-12);
  // Doubling H stops changing anything once psi^ is below the floor.
  CHECK(std::abs(g_poisson(quad, bump, 2'000) - g_poisson(quad, bump, 4'000)) < 1e-14);

  // Direct lattice count: sum over n = r mod L of psi(n/M), minus M/L.
  double direct = 0.0;
  for (i64 n = -10; n <= 120; ++n)
    if (((n % 105) + 105) % 105 == i64(quad.r)) direct += bump(double(n) / 100.0);
  CHECK(std::abs(direct - 100.0 / 105.0 - exact) < 1e-14);

  for (i64 a : {1, 2, 4, 7, 8, 13}) {
    for (double m : {50.0, 137.0, 420.0}) {
      const auto qd = make_quad(33, 55, 13, 2, a, m);
      CHECK(std::abs(g_exact(qd, bump) - g_poisson(qd, bump, 10'000)) < 1e-9);
    }
  }
}

TEST_CASE("coprime moduli bound") {
  const auto bump = build_bump(0.05);
  const auto quad = make_quad(7, 11, 2, 3, 1, 500);
  CHECK(quad.d == 1);
  CHECK(std::abs(g_exact(quad, bump)) <= 1.0 + 2 * 0.05 + 500.0 / 77.0);
}

TEST_CASE("main term integral") {
  const auto bump = build_bump(0.05);
  const auto quad = make_quad(15, 21, 7, 13, 1, 100);
  const double l = double(quad.l);
  // Over the full support the integral is psi^(2 pi M h / [q,q']) / l.
  for (i64 h : {1, 2, 5, 17, 60}) {
    const cplx numeric = main_integral_numeric(quad, bump, h, -0.05 / l, 1.05 / l);
    const cplx ident = bump.fourier(2.0 * kPi * quad.m * double(h) / double(quad.big_l)) / l;
    CHECK(std::abs(numeric - ident) < 1e-12);
  }
}

TEST_CASE("main term with a truncated window matches a direct sum") {
  const auto bump = build_bump(0.05);
  const auto quad = make_quad(15, 21, 7, 13, 1, 100);
  const double big_q = 1000.0, window = 2.0 * double(quad.d) / big_q;
  bool covers = true;
  const u64 h_max = 300;
  const double fast = g_mainterm(quad, bump, h_max, big_q, &covers);
  CHECK_FALSE(covers);

  const double l = double(quad.l);
  const double lo = std::max(-window, -0.05 / l), hi = std::min(window, 1.05 / l);
  const u64 mod = quad.p2 * quad.l;
  const u64 inv = inv_mod((quad.p * quad.l2) % mod, mod);
  double ref = 0.0;
  for (u64 h = 1; h <= h_max; ++h) {
    const i64 num = ((quad.k * i64(h) % i64(mod)) * i64(inv)) % i64(mod);
    const cplx coeff = unit(double((num + i64(mod)) % i64(mod)) / double(mod));
    ref += 2.0 * (coeff * main_integral_numeric(quad, bump, i64(h), lo, hi)).real();
  }
  ref *= quad.m / double(quad.q2);
  CHECK(std::abs(fast - ref) < 1e-10);
}

TEST_CASE("main term gap shrinks with H") {
  const auto bump = build_bump(0.05);
  const auto quad = plateau_quad(bump);
  const double exact = g_exact(quad, bump);
  double prev = INFINITY;
  for (u64 h : {100, 1000, 10000}) {
    bool covers = false;
    const double gap = std::abs(exact - g_mainterm(quad, bump, h, 1000.0, &covers));
    CHECK(covers);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("reciprocity") {
  CHECK(reciprocity_check(3, 5));
  CHECK(reciprocity_check(1, 7));
  CHECK(reciprocity_check(2, 1));
  // 3^{-1} mod 5 = 2, 5^{-1} mod 3 = 2: 2/5 + 2/3 = 16/15 = 1/15 + 1.
  for (u64 u = 1; u <= 200; ++u)
    for (u64 v = 1; v <= 200; ++v)
      if (std::gcd(u, v) == 1) REQUIRE(reciprocity_check(u, v));
}

TEST_CASE("phase identity") {
  std::mt19937_64 rng(11);
  const u64 primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  int done = 0;
  while (done < 1000) {
    const u64 p = primes[rng() % 12], p2 = primes[rng() % 12];
    const u64 l = 1 + rng() % 200, l2 = 1 + rng() % 200;
    if (std::gcd(p * l2, p2 * l) != 1) continue;
    const i64 w = i64(rng() % 2'000'001) - 1'000'000;
    REQUIRE(phase_identity_error(p, p2, l, l2, w) < 1e-12);
    ++done;
  }
  CHECK_THROWS_AS(phase_identity_error(2, 2, 1, 1, 1), DomainError);
}

TEST_CASE("compare and csv") {
  const auto bump = build_bump(0.05);
  const auto quad = make_quad(15, 21, 7, 13, 1, 100);
  GCompareParams params;
  params.h_main = 200;
  const auto g = g_compare(quad, bump, params);
  CHECK(g.h_main == 200);
  CHECK(g.diff_exact_poisson < 1e-12);
  std::ostringstream out;
  write_csv_header(out);
  write_csv_row(quad, g, out);
  CHECK(out.str().rfind("q,q',p,p',d,M,H,", 0) == 0);
  CHECK(out.str().find("\n15,21,7,13,3,100,") != std::string::npos);
}
