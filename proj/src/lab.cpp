#include "mfbv/lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "mfbv/chars.hpp"
#include "mfbv/csv.hpp"
#include "mfbv/errors.hpp"

namespace mfbv::lab {

namespace {

using i128 = __int128;

// Squarefree divisors d of q with their Moebius signs.
std::vector<std::pair<u64, int>> mobius_divisors(u64 q) {
  std::vector<std::pair<u64, int>> out = {{1, 1}};
  for (const auto& pp : arith::factorize(q).factors) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back({out[i].first * pp.prime, -out[i].second});
  }
  return out;
}

// Delta(F, x; q, 1) read off a table F(0..x).
cplx delta_one(const std::vector<cplx>& f, u64 x, u64 q) {
  cplx in_class{};
  for (u64 n = 1; n <= x; n += q) in_class += f[n];
  cplx coprime{};
  for (const auto& [d, mu] : mobius_divisors(q)) {
    cplx s{};
    for (u64 n = d; n <= x; n += d) s += f[n];
    coprime += double(mu) * s;
  }
  return in_class - coprime / double(arith::euler_phi(q));
}

// Delta(1, x; q, 1) by counting.
double delta_unit(u64 x, u64 q) {
  const double in_class = x == 0 ? 0.0 : double((x - 1) / q + 1);
  double coprime = 0.0;
  for (const auto& [d, mu] : mobius_divisors(q)) coprime += double(mu) * double(x / d);
  return in_class - coprime / double(arith::euler_phi(q));
}

// Primes p in (x/2, x] with p = 1 mod some member of `moduli`.
std::vector<bool> hit_by(const std::vector<u64>& large_primes, const std::vector<u64>& moduli, u64 x) {
  const u64 lo = x / 2;
  std::vector<bool> marked(x - lo + 1, false);
  for (u64 m : moduli) {
    // smallest n > lo with n = 1 mod m
    u64 n = lo + 1 + (m - (lo % m)) % m;
    for (; n <= x; n += m) marked[n - lo] = true;
  }
  std::vector<bool> hit(large_primes.size());
  for (std::size_t i = 0; i < large_primes.size(); ++i) hit[i] = marked[large_primes[i] - lo];
  return hit;
}

std::vector<u64> integers_in(double lo, double hi) {
  std::vector<u64> out;
  for (u64 q = static_cast<u64>(std::floor(lo)) + 1; double(q) <= hi; ++q) out.push_back(q);
  return out;
}

std::vector<u64> primes_only(const std::vector<u64>& v) {
  std::vector<u64> out;
  std::copy_if(v.begin(), v.end(), std::back_inserter(out), [](u64 n) { return arith::is_prime(n); });
  return out;
}

void add_check(Obstruction& ob, u64 q, std::string quantity, cplx value, std::optional<cplx> expected) {
  CheckRow row;
  row.q = q;
  row.quantity = std::move(quantity);
  row.value = value.real();
  if (expected) {
    row.expected = expected->real();
    row.abs_error = std::abs(value - *expected);
    ob.max_error = std::max(ob.max_error, row.abs_error);
  }
  ob.rows.push_back(std::move(row));
}

std::vector<cplx> indicator_table(const std::vector<u64>& set, u64 x) {
  std::vector<cplx> t(x + 1);
  for (u64 p : set) t[p] = 1.0;
  return t;
}

void construct_pair(Obstruction& ob) {
  const auto& s = ob.spec;
  if (!(s.big_q >= 1.0 && s.big_q < double(s.x) / 2.0)) throw DomainError("large-prime-pair: need 1 <= Q < x/2");
  const auto moduli = integers_in(s.big_q, 2.0 * s.big_q);
  const auto large = arith::primes_in(s.x / 2, s.x);
  const auto hit = hit_by(large, moduli, s.x);
  for (std::size_t i = 0; i < large.size(); ++i)
    if (!hit[i]) ob.primes.push_back(large[i]);

  const MultFn base = s.base.value_or(builtin::mobius());
  std::map<u64, cplx> plus, minus;
  for (u64 p : ob.primes) {
    plus[p] = 1.0;
    minus[p] = -1.0;
  }
  ob.functions = {MultFn::with_overrides(base, plus), MultFn::with_overrides(base, minus)};
  const auto fp = ob.functions[0].table(s.x), fm = ob.functions[1].table(s.x);
  const double count = double(ob.primes.size());
  for (u64 q : moduli) {
    const cplx dp = delta_one(fp, s.x, q), dm = delta_one(fm, s.x, q);
    // Both signs are reported; which one is large depends on q.
    add_check(ob, q, "abs_delta_plus", std::abs(dp), std::nullopt);
    add_check(ob, q, "abs_delta_minus", std::abs(dm), std::nullopt);
    // P avoids 1 mod q, so P only enters the coprime average: the pair differs by -2#P/phi(q).
    add_check(ob, q, "pair_difference", dm - dp, 2.0 * count / double(arith::euler_phi(q)));
  }
}

// Shared by nobv and nobv2: f = 1 - 2 * 1_P on [1, x], checked on the given moduli.
void construct_minus_on_set(Obstruction& ob, const std::vector<u64>& divisor_set, const std::vector<u64>& check_moduli) {
  const auto& s = ob.spec;
  const auto large = arith::primes_in(s.x / 2, s.x);
  const auto hit = hit_by(large, divisor_set, s.x);
  std::map<u64, cplx> values;
  for (std::size_t i = 0; i < large.size(); ++i) {
    if (!hit[i]) continue;
    ob.primes.push_back(large[i]);
    values[large[i]] = -1.0;
  }
  ob.functions = {MultFn::from_prime_values(values, to_string(s.kind))};
  const auto f = ob.functions[0].table(s.x);
  const auto ind = indicator_table(ob.primes, s.x);
  const double count = double(ob.primes.size());
  std::vector<bool> in_set(s.x + 1, false);
  for (u64 p : ob.primes) in_set[p] = true;

  for (u64 m : check_moduli) {
    u64 pi_star = 0, missing = 0;
    for (u64 p : large) {
      if (p % m != 1 % m) continue;
      ++pi_star;
      if (!in_set[p]) ++missing;
    }
    add_check(ob, m, "pi_star", double(pi_star), std::nullopt);
    if (s.kind == ObstructionKind::nobv2) add_check(ob, m, "missing_members", double(missing), cplx(0.0));
    const cplx d_ind = delta_one(ind, s.x, m);
    add_check(ob, m, "delta_indicator", d_ind, double(pi_star) - count / double(arith::euler_phi(m)));
    add_check(ob, m, "delta_f", delta_one(f, s.x, m), delta_unit(s.x, m) - 2.0 * d_ind);
  }
}

void construct_nobv(Obstruction& ob) {
  const auto& s = ob.spec;
  const double x = double(s.x), q = s.big_q;
  if (!(q * q * q > x && q * q < x)) throw DomainError("nobv: need x^{1/3} < Q < x^{1/2}");
  const auto moduli = primes_only(integers_in(q, 2.0 * q));
  construct_minus_on_set(ob, moduli, moduli);
}

void construct_nobv2(Obstruction& ob) {
  const auto& s = ob.spec;
  const double x = double(s.x), q = s.big_q;
  if (!(std::pow(q, 5.0) > x * x && q * q < x)) throw DomainError("nobv2: need x^{2/5} < Q < x^{1/2}");
  // I = (x^{1/3}, x^{2/5}] decided in integers: l^3 > x and l^5 <= x^2.
  std::vector<u64> ell;
  for (u64 l = 2; i128(l) * l * l * l * l <= i128(s.x) * s.x; ++l)
    if (i128(l) * l * l > i128(s.x) && arith::is_prime(l)) ell.push_back(l);
  std::vector<u64> moduli;
  for (u64 m : integers_in(q, 2.0 * q))
    if (std::any_of(ell.begin(), ell.end(), [m](u64 l) { return m % l == 0; })) moduli.push_back(m);
  if (moduli.empty()) ob.warnings.push_back("nobv2: no modulus in (Q, 2Q] has a prime factor in I");
  construct_minus_on_set(ob, ell, moduli);
}

void construct_gauss(Obstruction& ob) {
  const auto& s = ob.spec;
  if (s.q < 3 || !arith::is_prime(s.q)) throw DomainError("gauss: q must be an odd prime");
  if (s.x < 2) throw DomainError("gauss: x must be >= 2");
  ob.functions = {builtin::gauss(s.q)};
  const auto& f = ob.functions[0];

  add_check(ob, s.q, "class_c", class_c_check(f, s.x).in_class ? 1.0 : 0.0, cplx(1.0));

  const auto chars = character_group(s.q);
  std::vector<cplx> g;
  for (const auto& chi : chars) g.push_back(gauss_g(chi));
  double recon = 0.0;
  for (u64 n = 1; n < s.q; ++n) {
    cplx c{};
    for (std::size_t i = 0; i < chars.size(); ++i) c += g[i] * chars[i](n);
    recon = std::max(recon, std::abs(c - unit_phase(double(n) / double(s.q))));
  }
  add_check(ob, s.q, "reconstruction", recon, cplx(0.0));

  const double modulus = std::sqrt(double(s.q)) / double(s.q - 1);
  for (std::size_t i = 1; i < chars.size(); ++i) add_check(ob, s.q, "abs_g:" + std::to_string(i), std::abs(g[i]), modulus);

  // c_q(n) = e(n/q) on units and 0 on multiples of q.
  const auto lam = lambda_f(f, s.x);
  double worst = 0.0;
  for (u64 n = 2; n <= s.x; ++n) {
    const double vm = arith::von_mangoldt(n);
    if (vm == 0.0) continue;
    const cplx c = n % s.q == 0 ? cplx{} : unit_phase(double(n % s.q) / double(s.q));
    worst = std::max(worst, std::abs(lam(n) - c * vm));
  }
  add_check(ob, s.q, "lambda_f", worst, cplx(0.0));
}

}  // namespace

std::string to_string(ObstructionKind kind) {
  switch (kind) {
    case ObstructionKind::large_prime_pair: return "large-prime-pair";
    case ObstructionKind::nobv: return "nobv";
    case ObstructionKind::nobv2: return "nobv2";
    case ObstructionKind::gauss: return "gauss";
  }
  return "?";
}

ObstructionKind obstruction_kind(const std::string& name) {
  for (auto k : {ObstructionKind::large_prime_pair, ObstructionKind::nobv, ObstructionKind::nobv2, ObstructionKind::gauss})
    if (to_string(k) == name) return k;
  throw DomainError("unknown obstruction kind '" + name + "'");
}

Obstruction construct_obstruction(const ObstructionSpec& spec) {
  Obstruction ob;
  ob.spec = spec;
  switch (spec.kind) {
    case ObstructionKind::large_prime_pair: construct_pair(ob); break;
    case ObstructionKind::nobv: construct_nobv(ob); break;
    case ObstructionKind::nobv2: construct_nobv2(ob); break;
    case ObstructionKind::gauss: construct_gauss(ob); break;
  }
  if (spec.kind != ObstructionKind::gauss && ob.primes.empty())
    ob.warnings.push_back(to_string(spec.kind) + ": the prime set is empty at this x");
  return ob;
}

void write_csv_rows(const Obstruction& ob, std::ostream& out) {
  csv::Writer w(out);
  for (const auto& msg : ob.warnings) w.meta("warning", msg);
  const std::string kind = to_string(ob.spec.kind), x = csv::num(ob.spec.x);
  const std::string q = ob.spec.kind == ObstructionKind::gauss ? "" : csv::num(ob.spec.big_q);
  w.row({"kind", "x", "Q", "q", "quantity", "value", "expected", "abs_error"});
  if (ob.spec.kind != ObstructionKind::gauss)
    w.row({kind, x, q, "0", "prime_set_size", csv::num(u64(ob.primes.size())), "", "0"});
  for (const auto& r : ob.rows) {
    w.row({kind, x, q, csv::num(r.q), r.quantity, csv::num(r.value), r.expected ? csv::num(*r.expected) : "",
           csv::num(r.abs_error)});
  }
}

u64 uk_group_order(u64 y, int k) { return arith::next_prime(2 * u64(k) * y); }

namespace {

void check_uk_args(const std::vector<cplx>& values, int k) {
  if (k != 2 && k != 3) throw DomainError("uk_norm: unsupported k = " + std::to_string(k) + " (only 2 and 3)");
  if (values.empty()) throw DomainError("uk_norm: empty interval");
  if (values.size() - 1 > kMaxUkInterval) throw ResourceError("uk_norm: Y exceeds " + std::to_string(kMaxUkInterval));
}

// Sum over integer cubes inside [0, Y] of the alternating conjugate product.
// N > 2kY means no cube wraps around Z_N, so this is N^{k+1} times the Z_N average.
double cube_sum(const std::vector<cplx>& f, int k) {
  const i64 y = i64(f.size()) - 1;
  auto at = [&](i64 n) { return f[std::size_t(n)]; };
  double total = 0.0;
  std::vector<cplx> g(f.size());
  for (i64 h1 = -y; h1 <= y; ++h1) {
    const i64 lo1 = std::max<i64>(0, -h1), hi1 = std::min(y, y - h1);
    if (k == 2) {
      cplx s{};
      for (i64 x = lo1; x <= hi1; ++x) s += at(x) * std::conj(at(x + h1));
      total += std::norm(s);
      continue;
    }
    for (i64 x = lo1; x <= hi1; ++x) g[std::size_t(x)] = at(x) * std::conj(at(x + h1));
    for (i64 h2 = -(hi1 - lo1); h2 <= hi1 - lo1; ++h2) {
      const i64 lo = std::max(lo1, lo1 - h2), hi = std::min(hi1, hi1 - h2);
      cplx s{};
      for (i64 x = lo; x <= hi; ++x) s += g[std::size_t(x)] * std::conj(g[std::size_t(x + h2)]);
      total += std::norm(s);
    }
  }
  return total;
}

}  // namespace

double uk_norm_values(const std::vector<cplx>& values, int k) {
  check_uk_args(values, k);
  const double ref = cube_sum(std::vector<cplx>(values.size(), 1.0), k);
  return std::pow(cube_sum(values, k) / ref, 1.0 / double(1 << k));
}

double u2_norm_fourier(const std::vector<cplx>& values) {
  check_uk_args(values, 2);
  const u64 n = uk_group_order(values.size() - 1, 2);
  std::vector<cplx> roots(n);
  for (u64 j = 0; j < n; ++j) roots[j] = unit_phase(-double(j) / double(n));
  auto fourth_moment = [&](const std::vector<cplx>& f) {
    double s = 0.0;
    for (u64 xi = 0; xi < n; ++xi) {
      cplx hat{};
      for (u64 x = 0; x < f.size(); ++x) hat += f[x] * roots[x * xi % n];
      s += std::norm(hat) * std::norm(hat);
    }
    return s;
  };
  const double ref = fourth_moment(std::vector<cplx>(values.size(), 1.0));
  return std::pow(fourth_moment(values) / ref, 0.25);
}

std::vector<cplx> progression_values(const MultFn& f, u64 q, u64 a, u64 y) {
  if (q == 0) throw DomainError("uk_norm: q must be positive");
  if (y > kMaxUkInterval) throw ResourceError("uk_norm: Y exceeds " + std::to_string(kMaxUkInterval));
  const auto table = f.table(q * y + a);
  std::vector<cplx> out(y + 1);
  for (u64 n = 0; n <= y; ++n) out[n] = table[q * n + a];
  return out;
}

double uk_norm(const MultFn& f, u64 q, u64 a, u64 y, int k) {
  if (k != 2 && k != 3) throw DomainError("uk_norm: unsupported k = " + std::to_string(k) + " (only 2 and 3)");
  return uk_norm_values(progression_values(f, q, a, y), k);
}

}  // namespace mfbv::lab
