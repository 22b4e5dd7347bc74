#include "mfbv/barrier.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/rational.hpp>
#include <cmath>
#include <numbers>

#include "mfbv/csv.hpp"
#include "mfbv/errors.hpp"

namespace mfbv::barrier {

namespace {

using i128 = __int128;
constexpr double kPi = std::numbers::pi;
// Beyond this point phi^ sits below the trapezoid noise floor (~1e-18).
constexpr double kFourierCutoff = 3000.0;

double raw_mollifier(double t) {
  const double one_minus = 1.0 - t * t;
  return one_minus <= 0.0 ? 0.0 : std::exp(-1.0 / one_minus);
}

// Pieces are at most one panel wide, where the density is analytic enough for a fixed rule.
double integrate_raw(double a, double b) {
  return boost::math::quadrature::gauss<double, 30>::integrate(raw_mollifier, a, b);
}

// e(num / den) with num reduced exactly.
cplx phase(u64 num, u64 den) { return unit_phase(double(num % den) / double(den)); }

u64 mulmod(u64 a, u64 b, u64 m) { return u64((unsigned __int128)(a % m) * (b % m) % m); }

u64 inverse_or_throw(i64 a, u64 m, const char* what) {
  const auto inv = arith::inverse_mod(a, m);
  if (!inv) throw DomainError(std::string(what) + ": not invertible");
  return *inv;
}

}  // namespace

Mollifier::Mollifier() {
  const double width = 2.0 / kPanels;
  std::vector<double> cumulative(kPanels + 1, 0.0);
  for (int i = 0; i < kPanels; ++i) {
    const double a = -1.0 + i * width;
    cumulative[i + 1] = cumulative[i] + integrate_raw(a, a + width);
  }
  norm_ = cumulative[kPanels];

  const int n = kDegree + 1;
  coeffs_.assign(std::size_t(kPanels) * n, 0.0);
  std::vector<double> values(n);
  for (int i = 0; i < kPanels; ++i) {
    const double a = -1.0 + i * width;
    for (int k = 0; k < n; ++k) {
      const double node = a + 0.5 * width * (1.0 + std::cos(kPi * (k + 0.5) / n));
      values[k] = (cumulative[i] + integrate_raw(a, node)) / norm_;
    }
    for (int j = 0; j < n; ++j) {
      double c = 0.0;
      for (int k = 0; k < n; ++k) c += values[k] * std::cos(kPi * j * (k + 0.5) / n);
      coeffs_[std::size_t(i) * n + j] = (j == 0 ? 1.0 : 2.0) * c / n;
    }
  }

  // Trapezoid on [-1, 1]; spectrally accurate for a compactly supported smooth density.
  const double h = 2.0 / kFourierSamples;
  for (int j = 0; j <= kFourierSamples / 2; ++j) {
    const double t = j * h;
    const double v = raw_mollifier(t);
    if (v == 0.0) continue;
    grid_t_.push_back(t);
    grid_w_.push_back((j == 0 ? 1.0 : 2.0) * h * v / norm_);
  }
}

double Mollifier::density(double t) const { return raw_mollifier(t) / norm_; }

double Mollifier::cdf(double s) const {
  if (s <= -1.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double width = 2.0 / kPanels;
  const int i = std::min(kPanels - 1, static_cast<int>((s + 1.0) / width));
  const double a = -1.0 + i * width;
  const double y = 2.0 * (s - a) / width - 1.0;
  const double* c = &coeffs_[std::size_t(i) * (kDegree + 1)];
  double b1 = 0.0, b2 = 0.0;
  for (int j = kDegree; j >= 1; --j) {
    const double b0 = 2.0 * y * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return y * b1 - b2 + c[0];
}

double Mollifier::fourier(double s) const {
  s = std::abs(s);
  if (s > kFourierCutoff) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < grid_t_.size(); ++j) acc += grid_w_[j] * std::cos(s * grid_t_[j]);
  return acc;
}

namespace {

const Mollifier& shared_mollifier() {
  static const Mollifier m;
  return m;
}

}  // namespace

SmoothBump::SmoothBump(double eta) : eta_(eta), mollifier_(&shared_mollifier()) {
  if (!(eta > 0.0 && eta < 0.25)) throw DomainError("build_bump: eta must lie in (0, 1/4)");
}

double SmoothBump::operator()(double x) const {
  if (x <= -eta_ || x >= 1.0 + eta_) return 0.0;
  if (x >= eta_ && x <= 1.0 - eta_) return 1.0;
  return mollifier_->cdf(x / eta_) - mollifier_->cdf((x - 1.0) / eta_);
}

cplx SmoothBump::fourier(double t) const {
  if (t == 0.0) return 1.0;
  const double half = 0.5 * t;
  return mollifier_->fourier(eta_ * t) * (std::sin(half) / half) * std::polar(1.0, -half);
}

SmoothBump build_bump(double eta) { return SmoothBump(eta); }

double decay_constant(const SmoothBump& bump, int a, double t_max, int samples) {
  double c = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = t_max * i / samples;
    c = std::max(c, std::abs(bump.fourier(t)) * std::pow(1.0 + t, a) * std::pow(bump.eta(), a - 1));
  }
  return c;
}

void GQuadruple::validate() {
  if (q == 0 || q2 == 0 || p == 0 || p2 == 0) throw DomainError("quad: q, q', p, p' must be positive");
  if (!(m >= 1.0)) throw DomainError("quad: M must be >= 1");
  d = arith::gcd(q, q2);
  l = q / d;
  l2 = q2 / d;
  big_l = l * q2;
  if ((p > p2 ? p - p2 : p2 - p) % d != 0) throw DomainError("quad: need p = p' mod (q, q')");
  if (arith::gcd(arith::reduce(a, q), q) != 1 || arith::gcd(arith::reduce(a, q2), q2) != 1) {
    throw DomainError("quad: a must be a unit mod q and q'");
  }
  if (arith::gcd(p, q) != 1 || arith::gcd(p2, q2) != 1) throw DomainError("quad: need (p, q) = (p', q') = 1");
  if (arith::gcd(p, p2) != 1) throw DomainError("quad: need (p, p') = 1");

  const u64 r1 = mulmod(arith::reduce(a, q), inverse_or_throw(i64(p % q), q, "quad"), q);
  const u64 r2 = mulmod(arith::reduce(a, q2), inverse_or_throw(i64(p2 % q2), q2, "quad"), q2);
  const i128 diff = (i128(r2) - i128(r1)) / i128(d);
  const u64 t = mulmod(arith::reduce(i64(diff % i128(l2)), l2), inverse_or_throw(i64(l % l2), l2, "quad"), l2);
  r = u64((i128(r1) + i128(q) * t) % i128(big_l));
  k = (i64(p2) - i64(p)) / i64(d) * a;
}

GQuadruple make_quad(u64 q, u64 q2, u64 p, u64 p2, i64 a, double m) {
  GQuadruple quad;
  quad.q = q;
  quad.q2 = q2;
  quad.p = p;
  quad.p2 = p2;
  quad.a = a;
  quad.m = m;
  quad.validate();
  return quad;
}

double g_exact(const GQuadruple& quad, const SmoothBump& bump) {
  const double eta = bump.eta(), big_l = double(quad.big_l), r = double(quad.r);
  const i64 j_lo = static_cast<i64>(std::ceil((-eta * quad.m - r) / big_l));
  const i64 j_hi = static_cast<i64>(std::floor(((1.0 + eta) * quad.m - r) / big_l));
  double s = 0.0;
  for (i64 j = j_lo; j <= j_hi; ++j) s += bump((r + double(j) * big_l) / quad.m);
  return s - quad.m / big_l;
}

double g_poisson(const GQuadruple& quad, const SmoothBump& bump, u64 h_max) {
  const double big_l = double(quad.big_l);
  double s = 0.0;
  for (u64 h = 1; h <= h_max; ++h) {
    const cplx term = bump.fourier(2.0 * kPi * quad.m * double(h) / big_l) * phase(mulmod(quad.r, h, quad.big_l), quad.big_l);
    s += 2.0 * term.real();
  }
  return quad.m / big_l * s;
}

namespace {

// Gauss-Legendre nodes and weights (times psi(l u)) covering [lo, hi], fine
// enough to resolve the oscillation at frequency omega_max.
struct WeightedNodes {
  std::vector<double> u;
  std::vector<double> w;
};

WeightedNodes main_nodes(const GQuadruple& quad, const SmoothBump& bump, double omega_max, double lo, double hi) {
  WeightedNodes out;
  if (!(hi > lo)) return out;
  const double l = double(quad.l), eta = bump.eta();
  // Break at the edges of psi(l u) so every panel sees one smooth piece.
  std::vector<double> cuts = {lo, hi};
  for (double c : {-eta / l, eta / l, (1.0 - eta) / l, (1.0 + eta) / l}) {
    if (c > lo && c < hi) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  using rule = boost::math::quadrature::gauss<double, 20>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const int panels = 4 + static_cast<int>(std::ceil(omega_max * (b - a) / kPi));
    const double width = (b - a) / panels;
    for (int j = 0; j < panels; ++j) {
      const double mid = a + (j + 0.5) * width, half = 0.5 * width;
      for (std::size_t k = 0; k < abscissa.size(); ++k) {
        for (int sign : {-1, 1}) {
          if (abscissa[k] == 0.0 && sign < 0) continue;
          const double u = mid + sign * half * abscissa[k];
          out.u.push_back(u);
          out.w.push_back(half * weights[k] * bump(l * u));
        }
      }
    }
  }
  return out;
}

double main_frequency(const GQuadruple& quad, double h) {
  return 2.0 * kPi * quad.m * h / (double(quad.d) * double(quad.l2));
}

}  // namespace

cplx main_integral_numeric(const GQuadruple& quad, const SmoothBump& bump, i64 h, double lo, double hi) {
  const double omega = main_frequency(quad, double(h));
  const auto nodes = main_nodes(quad, bump, std::abs(omega), lo, hi);
  cplx s{};
  for (std::size_t j = 0; j < nodes.u.size(); ++j) s += nodes.w[j] * std::polar(1.0, -omega * nodes.u[j]);
  return s;
}

double g_mainterm(const GQuadruple& quad, const SmoothBump& bump, u64 h_max, double big_q, bool* covers_support) {
  const double l = double(quad.l), eta = bump.eta();
  const double window = 2.0 * double(quad.d) / big_q;
  const double lo = std::max(-window, -eta / l), hi = std::min(window, (1.0 + eta) / l);
  const bool covers = window >= (1.0 + eta) / l;
  if (covers_support) *covers_support = covers;

  const u64 mod = quad.p2 * quad.l;
  const u64 inv = inverse_or_throw(i64((quad.p * quad.l2) % mod), mod, "g_mainterm");
  const u64 kk = arith::reduce(quad.k, mod);

  // Truncated window: one node set for all h, phases advanced by e^{-i omega_1 u}
  // and recomputed exactly every kResync steps.
  constexpr u64 kResync = 64;
  WeightedNodes nodes;
  std::vector<cplx> step, current;
  if (!covers) {
    nodes = main_nodes(quad, bump, main_frequency(quad, double(h_max)), lo, hi);
    const double omega1 = main_frequency(quad, 1.0);
    for (double u : nodes.u) step.push_back(std::polar(1.0, -omega1 * u));
    current.assign(nodes.u.size(), cplx{1.0});
  }

  double s = 0.0;
  for (u64 h = 1; h <= h_max; ++h) {
    const cplx coeff = phase(mulmod(mulmod(kk, h, mod), inv, mod), mod);
    cplx integral;
    if (covers) {
      // Over the whole support the u-integral is psi^(2 pi M h / [q,q']) / l.
      integral = bump.fourier(2.0 * kPi * quad.m * double(h) / double(quad.big_l)) / l;
    } else {
      const double omega = main_frequency(quad, double(h));
      for (std::size_t j = 0; j < nodes.u.size(); ++j) {
        current[j] = h % kResync == 0 ? std::polar(1.0, -omega * nodes.u[j]) : current[j] * step[j];
        integral += nodes.w[j] * current[j];
      }
    }
    s += 2.0 * (coeff * integral).real();
  }
  return quad.m / double(quad.q2) * s;
}

u64 default_main_truncation(const GQuadruple& quad, const GCompareParams& params) {
  return static_cast<u64>(
      std::ceil(std::pow(params.x, 2.0 * params.sigma) * params.big_q * params.big_q / (double(quad.d) * quad.m)));
}

GCompare g_compare(const GQuadruple& quad, const SmoothBump& bump, const GCompareParams& params) {
  GCompare g;
  g.h_main = params.h_main != 0 ? params.h_main : default_main_truncation(quad, params);
  g.g_exact = g_exact(quad, bump);
  g.g_poisson = g_poisson(quad, bump, params.h_poisson);
  g.g_mainterm = g_mainterm(quad, bump, g.h_main, params.big_q, &g.window_covers_support);
  g.diff_exact_poisson = std::abs(g.g_exact - g.g_poisson);
  g.diff_exact_mainterm = std::abs(g.g_exact - g.g_mainterm);
  g.diff_poisson_mainterm = std::abs(g.g_poisson - g.g_mainterm);
  return g;
}

bool reciprocity_check(u64 u, u64 v) {
  if (u == 0 || v == 0 || arith::gcd(u, v) != 1) throw DomainError("reciprocity_check: need coprime u, v >= 1");
  using R = boost::rational<i64>;
  const i64 inv_v = i64(*arith::inverse_mod(i64(v % u), u) % u);
  const i64 inv_u = i64(*arith::inverse_mod(i64(u % v), v) % v);
  const R lhs = R(inv_v, i64(u)) + R(inv_u, i64(v)) - R(1, i64(u * v));
  return lhs.denominator() == 1;
}

double phase_identity_error(u64 p, u64 p2, u64 l, u64 l2, i64 w) {
  const u64 m1 = p * l2, m2 = p2 * l;
  if (arith::gcd(m1, m2) != 1) throw DomainError("phase_identity_error: need (p l', p' l) = 1");
  const u64 inv1 = *arith::inverse_mod(i64(m2 % m1), m1);
  const u64 inv2 = *arith::inverse_mod(i64(m1 % m2), m2);
  const cplx lhs = phase(mulmod(arith::reduce(w, m1), inv1, m1), m1) * phase(mulmod(arith::reduce(w, m2), inv2, m2), m2);
  const cplx rhs = phase(arith::reduce(w, m1 * m2), m1 * m2);
  return std::abs(lhs - rhs);
}

void write_csv_header(std::ostream& out) {
  csv::Writer(out).row({"q", "q'", "p", "p'", "d", "M", "H", "g_exact", "g_poisson", "g_mainterm",
                        "diff_exact_poisson", "diff_exact_mainterm", "diff_poisson_mainterm"});
}

void write_csv_row(const GQuadruple& quad, const GCompare& g, std::ostream& out) {
  csv::Writer(out).row({csv::num(quad.q), csv::num(quad.q2), csv::num(quad.p), csv::num(quad.p2), csv::num(quad.d),
                        csv::num(quad.m), csv::num(g.h_main), csv::num(g.g_exact), csv::num(g.g_poisson),
                        csv::num(g.g_mainterm), csv::num(g.diff_exact_poisson), csv::num(g.diff_exact_mainterm),
                        csv::num(g.diff_poisson_mainterm)});
}

}  // namespace mfbv::barrier
