#include "mfbv/ramare.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mfbv/csv.hpp"
#include "mfbv/errors.hpp"
#include "mfbv/parallel.hpp"

namespace mfbv::ramare {

double RamareParams::u_ramare() const { return std::log(z) / std::log(y); }

void RamareParams::validate() const {
  if (!(y >= 2.0) || !(z > y)) throw DomainError("ramare: need 2 <= Y < Z");
  if (w < 2) throw DomainError("ramare: need w >= 2");
}

PrimeWindow PrimeWindow::of(double y, double z) {
  const u64 lo = std::max<u64>(2, static_cast<u64>(std::ceil(y)));
  const u64 hi = static_cast<u64>(std::ceil(z)) - 1;
  return {lo, hi};
}

namespace {

u64 window_divisors(u64 n, const PrimeWindow& win) {
  u64 count = 0;
  for (const auto& pp : arith::factorize(n).factors) count += win.contains(pp.prime) ? 1 : 0;
  return count;
}

}  // namespace

Rational weight(u64 n, double y, double z) {
  if (n == 0) throw DomainError("ramare::weight: n must be positive");
  return Rational(1, i64(window_divisors(n, PrimeWindow::of(y, z)) + 1));
}

Rational indicator_sum(u64 n, double y, double z) {
  if (n == 0) throw DomainError("ramare::indicator_sum: n must be positive");
  const auto win = PrimeWindow::of(y, z);
  Rational total(0);
  for (const auto& pp : arith::factorize(n).factors) {
    if (!win.contains(pp.prime)) continue;
    u64 m = n;
    for (int k = 0; k < pp.exponent; ++k) m /= pp.prime;
    total += Rational(1, i64(window_divisors(m, win) + 1));
  }
  return total;
}

FFunction::FFunction(FSpec spec) : spec_(std::move(spec)) {
  if (spec_.w < 2) throw DomainError("build_F: w must be >= 2");
  for (const auto& t : spec_.terms) {
    if (t.q == 0) throw DomainError("build_F: modulus must be positive");
    const u64 a = arith::reduce(t.a, t.q);
    if (arith::gcd(a, t.q) != 1) {
      throw DomainError("build_F: gcd(a_q, q) != 1 at q = " + std::to_string(t.q));
    }
    const auto split = arith::smooth_rough_split(t.q, spec_.w);
    splits_.push_back({t.q, split.smooth, split.rough, a, a % split.smooth, t.xi});
  }
}

cplx FFunction::operator()(u64 n) const {
  if (spec_.fixed_residue && i64(n) == *spec_.fixed_residue) return 0.0;
  cplx v{};
  for (const auto& s : splits_) {
    if (n % s.q == s.a_q) v += s.xi;
    if (n % s.q_s == s.a_s) v -= s.xi / double(s.q_r);
  }
  return v;
}

double FFunction::majorant(u64 n) const {
  double v = 0.0;
  for (const auto& s : splits_) {
    if (n % s.q == s.a_q) v += 1.0;
    if (n % s.q_s == s.a_s) v += 1.0 / double(s.q_r);
  }
  return v;
}

u64 FFunction::q_scale() const {
  u64 top = 1;
  for (const auto& s : splits_) top = std::max(top, s.q);
  return (top + 1) / 2;
}

std::vector<cplx> FFunction::table(u64 x) const {
  std::vector<cplx> out(x + 1);
  // Group the q_s-progressions so each (q_s, residue) is walked once.
  std::map<std::pair<u64, u64>, cplx> coarse;
  for (const auto& s : splits_) {
    for (u64 n = s.a_q == 0 ? s.q : s.a_q; n <= x; n += s.q) out[n] += s.xi;
    coarse[{s.q_s, s.a_s}] -= s.xi / double(s.q_r);
  }
  for (const auto& [key, c] : coarse) {
    const auto [m, r] = key;
    for (u64 n = r == 0 ? m : r; n <= x; n += m) out[n] += c;
  }
  if (spec_.fixed_residue && *spec_.fixed_residue >= 1 && u64(*spec_.fixed_residue) <= x) {
    out[static_cast<std::size_t>(*spec_.fixed_residue)] = 0.0;
  }
  out[0] = 0.0;
  return out;
}

FNorms norms(const std::vector<cplx>& f_table, u64 x) {
  FNorms n;
  for (u64 k = 1; k <= x && k < f_table.size(); ++k) {
    const double a = std::abs(f_table[k]);
    n.sup = std::max(n.sup, a);
    n.l2_squared += a * a;
  }
  return n;
}

double divisibility_sum(const std::vector<cplx>& f_table, u64 x, u64 d) {
  if (d == 0) throw DomainError("divisibility_sum: d must be positive");
  double s = 0.0;
  for (u64 n = d; n <= x; n += d) s += std::abs(f_table[n]);
  return s;
}

FSpec optimal_spec(const std::vector<cplx>& f, u64 x, const std::vector<u64>& moduli, u64 w,
                   std::optional<i64> fixed_residue) {
  if (f.size() < x + 1) throw DomainError("optimal_spec: value table shorter than x");
  FSpec spec{{}, w, fixed_residue};
  for (u64 q : moduli) {
    const auto split = arith::smooth_rough_split(q, w);
    std::vector<cplx> fine(q), coarse(split.smooth);
    for (u64 n = 1; n <= x; ++n) {
      fine[n % q] += f[n];
      coarse[n % split.smooth] += f[n];
    }
    auto value = [&](u64 a) { return fine[a] - coarse[a % split.smooth] / double(split.rough); };
    u64 best_a = 0;
    double best = -1.0;
    if (fixed_residue) {
      best_a = arith::reduce(*fixed_residue, q);
      if (arith::gcd(best_a, q) != 1) continue;
    } else {
      for (u64 a = 0; a < q; ++a) {
        if (arith::gcd(a, q) != 1) continue;
        const double v = std::abs(value(a));
        if (v > best) {
          best = v;
          best_a = a;
        }
      }
    }
    const cplx v = value(best_a);
    const cplx xi = std::abs(v) > 0.0 ? std::conj(v) / std::abs(v) : cplx{1.0};
    spec.terms.push_back({q, xi, fixed_residue ? *fixed_residue : i64(best_a)});
  }
  return spec;
}

RamareDecomposition decompose(const std::vector<cplx>& f, const std::vector<cplx>& big_f, u64 x,
                              const RamareParams& params, unsigned threads) {
  params.validate();
  if (f.size() < x + 1 || big_f.size() < x + 1) throw DomainError("decompose: tables shorter than x");
  const double z2 = params.z * params.z;
  if (z2 > double(x)) throw DomainError("decompose: Z^2 exceeds x");
  RamareDecomposition d;
  d.params = params;
  d.x = x;

  const double start = params.restrict_main ? std::pow(params.z, 9.0) : 1.0;
  for (u64 n = 1; n <= x; ++n) {
    if (double(n) >= start) d.main_sum += f[n] * big_f[n];
  }

  const u64 d_max = static_cast<u64>(std::floor(z2));
  d.t = -1.0;
  for (u64 k = 1; k <= d_max; ++k) {
    const double v = double(k) * divisibility_sum(big_f, x, k);
    if (v > d.t) {
      d.t = v;
      d.t_argmax = k;
    }
  }

  const auto win = PrimeWindow::of(params.y, params.z);
  std::vector<char> sifted(x + 1, 0);
  for (u64 p : arith::primes_in(win.lo - 1, win.hi)) {
    for (u64 n = p; n <= x; n += p) sifted[n] = 1;
  }
  for (u64 n = 1; n <= x; ++n) {
    if (!sifted[n]) d.e_sieve += std::abs(f[n] * big_f[n]);
  }

  for (double p_scale = params.y; p_scale < params.z; p_scale *= 2.0) {
    const auto ps = arith::primes_in(static_cast<u64>(std::floor(p_scale)), static_cast<u64>(std::floor(2.0 * p_scale)));
    if (ps.empty()) throw DomainError("decompose: no primes in (P, 2P]");
    const std::size_t np = ps.size();
    std::vector<double> pair_abs(np * np);
    std::vector<double> diag(np);
    parallel_for(np * np, threads, [&](std::size_t idx) {
      const u64 p = ps[idx / np], pp = ps[idx % np];
      const u64 m_max = x / std::max(p, pp);
      cplx s{};
      for (u64 m = 1; m <= m_max; ++m) s += big_f[p * m] * std::conj(big_f[pp * m]);
      pair_abs[idx] = std::abs(s);
      if (p == pp) diag[idx / np] = s.real();
    });
    BilinearScale sc;
    sc.p_scale = p_scale;
    sc.prime_count = np;
    for (double v : pair_abs) sc.average += v;
    for (double v : diag) sc.diagonal += v;
    sc.average /= double(np * np);
    sc.diagonal /= double(np * np);
    sc.value = std::sqrt(p_scale * double(x) * sc.average);
    d.e_bilinear = std::max(d.e_bilinear, sc.value);
    d.scales.push_back(sc);
  }
  return d;
}

double empirical_constant(const RamareDecomposition& d) {
  const double rhs = d.t / (d.params.y * std::log(d.params.y)) + d.e_sieve + d.e_bilinear;
  const double lhs = std::abs(d.main_sum);
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : INFINITY;
  return lhs / rhs;
}

SieveDiagnostic sieve_diagnostic(const std::vector<cplx>& big_f, u64 x, const RamareParams& params) {
  params.validate();
  const auto win = PrimeWindow::of(params.y, params.z);
  std::vector<char> sifted(x + 1, 0);
  for (u64 p : arith::primes_in(win.lo - 1, win.hi)) {
    for (u64 n = p; n <= x; n += p) sifted[n] = 1;
  }
  SieveDiagnostic s;
  for (u64 n = 1; n <= x; ++n) {
    if (!sifted[n]) s.sum += std::abs(big_f[n]);
  }
  s.bound = double(x) / params.u_ramare();
  s.ratio = s.sum / s.bound;
  return s;
}

std::vector<BilinearDiagnostic> bilinear_diagnostic(const RamareDecomposition& d, u64 q_scale) {
  std::vector<BilinearDiagnostic> out;
  const double w = double(d.params.w), x = double(d.x);
  for (const auto& sc : d.scales) {
    const double pi_p = double(arith::prime_count(static_cast<u64>(std::floor(sc.p_scale))));
    const double bound = x / sc.p_scale * (1.0 / (w * std::log(w)) + (std::pow(sc.p_scale, 0.1) + std::log(x)) / pi_p) +
                         double(q_scale) * double(q_scale);
    out.push_back({sc.p_scale, sc.average, bound, sc.average / bound});
  }
  return out;
}

void write_csv_rows(const RamareDecomposition& d, const SieveDiagnostic& sieve,
                    const std::vector<BilinearDiagnostic>& bilinear, std::ostream& out) {
  csv::Writer wr(out);
  wr.row({"quantity", "P", "value", "bound", "ratio"});
  const double rhs = d.t / (d.params.y * std::log(d.params.y)) + d.e_sieve + d.e_bilinear;
  wr.row({"main_sum", "", csv::num(d.main_sum), "", ""});
  wr.row({"T", "", csv::num(d.t), "", ""});
  wr.row({"E_sieve", "", csv::num(d.e_sieve), "", ""});
  wr.row({"E_bilinear", "", csv::num(d.e_bilinear), "", ""});
  for (const auto& sc : d.scales) wr.row({"bilinear_scale", csv::num(sc.p_scale), csv::num(sc.value), "", ""});
  wr.row({"main_vs_rhs", "", csv::num(std::abs(d.main_sum)), csv::num(rhs), csv::num(empirical_constant(d))});
  wr.row({"sieve_sum", "", csv::num(sieve.sum), csv::num(sieve.bound), csv::num(sieve.ratio)});
  for (const auto& b : bilinear) {
    wr.row({"bilinear_average", csv::num(b.p_scale), csv::num(b.average), csv::num(b.bound), csv::num(b.ratio)});
  }
}

}  // namespace mfbv::ramare
