#pragma once

#include <ostream>
#include <vector>

#include "mfbv/arith.hpp"
#include "mfbv/chars.hpp"

namespace mfbv::barrier {

using arith::i64;
using arith::u64;

// phi(t) = exp(-1/(1-t^2)) on (-1, 1), normalized to unit mass. Its CDF is
// tabulated as piecewise Chebyshev interpolants.
class Mollifier {
 public:
  Mollifier();

  double density(double t) const;
  double cdf(double s) const;
  // phi^(s) = integral phi(t) e^{-ist} dt (real, even)
  double fourier(double s) const;
  double mass_constant() const { return norm_; }

 private:
  static constexpr int kPanels = 64;
  static constexpr int kDegree = 16;
  static constexpr int kFourierSamples = 2048;
  double norm_ = 1;
  std::vector<double> coeffs_;  // kPanels * (kDegree + 1) Chebyshev coefficients
  std::vector<double> grid_t_;  // half trapezoid grid for the Fourier sum
  std::vector<double> grid_w_;
};

// psi = 1_[0,1] * phi_eta: 0 outside [-eta, 1+eta], 1 on [eta, 1-eta], unit mass.
class SmoothBump {
 public:
  explicit SmoothBump(double eta);

  double eta() const { return eta_; }
  double operator()(double x) const;
  // psi^(t) = integral psi(x) e^{-itx} dx = phi^(eta t) e^{-it/2} sin(t/2)/(t/2)
  cplx fourier(double t) const;

 private:
  double eta_;
  const Mollifier* mollifier_;
};

SmoothBump build_bump(double eta);

// max over the sampled t of |psi^(t)| (1+|t|)^A eta^{A-1}
double decay_constant(const SmoothBump& bump, int a, double t_max = 1e4, int samples = 20'000);

struct GQuadruple {
  u64 q = 1, q2 = 1;  // q and q'
  u64 p = 1, p2 = 1;  // p and p'
  i64 a = 1;
  double m = 1;  // M

  // Derived by validate().
  u64 d = 1, l = 1, l2 = 1;  // d = (q, q'), q = d l, q' = d l'
  u64 big_l = 1;             // [q, q']
  u64 r = 0;                 // p r = a (q), p' r = a (q'), 0 <= r < [q, q']
  i64 k = 0;                 // (p' - p) a / d

  // Checks the admissibility conditions and fills the derived fields.
  void validate();
};

GQuadruple make_quad(u64 q, u64 q2, u64 p, u64 p2, i64 a, double m);

struct GCompareParams {
  u64 h_poisson = 10'000;
  u64 h_main = 0;  // 0: H = x^{2 sigma} Q^2 / (d M)
  double sigma = 0.01;
  double x = 1e6;
  double big_q = 1e3;
};

struct GCompare {
  double g_exact = 0;
  double g_poisson = 0;
  double g_mainterm = 0;
  u64 h_main = 0;
  bool window_covers_support = false;
  double diff_exact_poisson = 0;
  double diff_exact_mainterm = 0;
  double diff_poisson_mainterm = 0;
};

double g_exact(const GQuadruple& quad, const SmoothBump& bump);
double g_poisson(const GQuadruple& quad, const SmoothBump& bump, u64 h_max);
// Terms h and -h are conjugate, so the main term is real.
double g_mainterm(const GQuadruple& quad, const SmoothBump& bump, u64 h_max, double big_q,
                  bool* covers_support = nullptr);
u64 default_main_truncation(const GQuadruple& quad, const GCompareParams& params);
GCompare g_compare(const GQuadruple& quad, const SmoothBump& bump, const GCompareParams& params);

// The u-integral of the main term by composite Gauss-Legendre, for any window.
cplx main_integral_numeric(const GQuadruple& quad, const SmoothBump& bump, i64 h, double lo, double hi);

// (v^{-1} mod u)/u + (u^{-1} mod v)/v == 1/(uv) mod 1, in exact rationals.
bool reciprocity_check(u64 u, u64 v);

// |e_{p l'}(w inv(p' l)) e_{p' l}(w inv(p l')) - e_{p p' l l'}(w)|
double phase_identity_error(u64 p, u64 p2, u64 l, u64 l2, i64 w);

void write_csv_header(std::ostream& out);
void write_csv_row(const GQuadruple& quad, const GCompare& g, std::ostream& out);

}  // namespace mfbv::barrier
