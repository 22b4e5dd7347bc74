#include "mfbv/multfn.hpp"

#include <cmath>
#include <string>

#include "mfbv/chars.hpp"
#include "mfbv/errors.hpp"

namespace mfbv {

namespace {

constexpr double kBoundTol = 1e-12;

void require_bounded(cplx v, const std::string& where) {
  if (std::abs(v) > 1.0 + kBoundTol) {
    throw DomainError(where + ": value of modulus " + std::to_string(std::abs(v)) + " exceeds 1");
  }
}

// SplitMix64 finalizer; used as a stateless per-prime hash.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

MultFn MultFn::completely_multiplicative(PrimeValueFn prime_value, std::string name) {
  MultFn f;
  f.kind_ = Kind::kCompletelyMultiplicative;
  f.name_ = std::move(name);
  f.values_ = [pv = std::move(prime_value)](u64 p, int k) {
    const cplx base = pv(p);
    cplx v{1.0};
    for (int i = 0; i < k; ++i) v *= base;
    return v;
  };
  return f;
}

MultFn MultFn::prime_power_table(PrimePowerFn value, std::string name) {
  MultFn f;
  f.kind_ = Kind::kPrimePowerTable;
  f.name_ = std::move(name);
  f.values_ = std::move(value);
  return f;
}

MultFn MultFn::from_prime_values(const std::map<u64, cplx>& values, std::string name) {
  for (const auto& [p, v] : values) {
    if (!arith::is_prime(p)) throw DomainError("from_prime_values: key " + std::to_string(p) + " is not prime");
    require_bounded(v, "from_prime_values");
  }
  auto table = std::make_shared<const std::map<u64, cplx>>(values);
  return completely_multiplicative(
      [table](u64 p) {
        const auto it = table->find(p);
        return it == table->end() ? cplx{1.0} : it->second;
      },
      std::move(name));
}

MultFn MultFn::from_prime_power_values(const std::map<u64, cplx>& values, const MultFn& fallback,
                                       std::string name) {
  for (const auto& [pk, v] : values) {
    if (pk < 2 || arith::factorize(pk).factors.size() != 1) {
      throw DomainError("from_prime_power_values: key " + std::to_string(pk) + " is not a prime power");
    }
    require_bounded(v, "from_prime_power_values");
  }
  auto table = std::make_shared<const std::map<u64, cplx>>(values);
  return prime_power_table(
      [table, fallback](u64 p, int k) {
        u64 pk = 1;
        for (int i = 0; i < k; ++i) pk *= p;
        const auto it = table->find(pk);
        return it == table->end() ? fallback.prime_power(p, k) : it->second;
      },
      std::move(name));
}

MultFn MultFn::smooth_restricted(const MultFn& base, u64 y) {
  MultFn f = base;
  f.kind_ = Kind::kSmoothRestricted;
  f.name_ = base.name_ + "|y=" + std::to_string(y);
  f.smooth_bound_ = base.smooth_bound_ ? std::min(*base.smooth_bound_, y) : y;
  return f;
}

MultFn MultFn::with_overrides(const MultFn& base, std::map<u64, cplx> overrides) {
  for (const auto& [n, v] : overrides) {
    if (n == 0) throw DomainError("with_overrides: n must be positive");
    require_bounded(v, "with_overrides");
  }
  MultFn f = base;
  f.kind_ = Kind::kPointwiseOverride;
  f.name_ = base.name_ + "+overrides";
  auto merged = std::make_shared<std::map<u64, cplx>>(*base.overrides_);
  for (auto& [n, v] : overrides) (*merged)[n] = v;
  f.overrides_ = std::move(merged);
  return f;
}

cplx MultFn::base_prime_power(u64 p, int k) const {
  if (smooth_bound_ && p > *smooth_bound_) return {};
  return values_(p, k);
}

cplx MultFn::prime_power(u64 p, int k) const {
  if (!overrides_->empty()) {
    u64 pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    const auto it = overrides_->find(pk);
    if (it != overrides_->end()) return it->second;
  }
  return base_prime_power(p, k);
}

cplx MultFn::operator()(u64 n) const {
  if (n == 0) return {};
  if (const auto it = overrides_->find(n); it != overrides_->end()) return it->second;
  cplx v{1.0};
  for (const auto& [p, e] : arith::factorize(n).factors) {
    v *= prime_power(p, e);
    if (v == cplx{}) break;
  }
  return v;
}

std::vector<cplx> MultFn::table(u64 n) const {
  std::vector<cplx> out(n + 1);
  if (n == 0) return out;
  out[1] = 1.0;
  const auto& sieve = arith::default_sieve();
  if (n > sieve.limit()) {
    for (u64 m = 2; m <= n; ++m) out[m] = (*this)(m);
  } else {
    // pk[m] = full power of spf(m) dividing m; exps[m] its exponent.
    std::vector<std::uint32_t> pk(n + 1, 1);
    std::vector<std::uint8_t> exps(n + 1, 0);
    for (u64 m = 2; m <= n; ++m) {
      const u64 p = sieve.smallest_factor(m);
      const u64 rest = m / p;
      if (rest % p == 0) {
        pk[m] = pk[rest] * static_cast<std::uint32_t>(p);
        exps[m] = exps[rest] + 1;
      } else {
        pk[m] = static_cast<std::uint32_t>(p);
        exps[m] = 1;
      }
      if (pk[m] == m) {
        out[m] = prime_power(p, exps[m]);
      } else {
        out[m] = out[m / pk[m]] * out[pk[m]];
      }
    }
    for (const auto& [k, v] : *overrides_) {
      if (k <= n) out[k] = v;
    }
  }
  for (u64 m = 1; m <= n; ++m) {
    if (std::abs(out[m]) > 1.0 + kBoundTol) {
      throw DomainError(name_ + ": |f(" + std::to_string(m) + ")| exceeds 1");
    }
  }
  return out;
}

namespace builtin {

MultFn unit() {
  return MultFn::completely_multiplicative([](u64) { return cplx{1.0}; }, "unit");
}

MultFn mobius() {
  return MultFn::prime_power_table([](u64, int k) { return k == 1 ? cplx{-1.0} : cplx{}; }, "mobius");
}

MultFn liouville() {
  return MultFn::completely_multiplicative([](u64) { return cplx{-1.0}; }, "liouville");
}

MultFn character(const DirichletCharacter& chi) {
  return MultFn::completely_multiplicative([chi](u64 p) { return chi(p); },
                                           "chi(" + std::to_string(chi.modulus()) + "," +
                                               std::to_string(chi.index()) + ")");
}

MultFn random_sign(std::uint64_t seed) {
  return MultFn::completely_multiplicative(
      [seed](u64 p) { return (mix64(seed ^ mix64(p)) & 1) ? cplx{1.0} : cplx{-1.0}; },
      "random(" + std::to_string(seed) + ")");
}

MultFn quadratic3_extension() {
  return MultFn::completely_multiplicative(
      [](u64 p) {
        if (p == 3) return cplx{1.0};
        return p % 3 == 1 ? cplx{1.0} : cplx{-1.0};
      },
      "quad3");
}

MultFn gauss(u64 q) {
  const CharacterGroup group(q);
  const auto chars = group.all();
  auto coeff = std::make_shared<std::vector<cplx>>(q);
  for (const auto& chi : chars) {
    const cplx g = gauss_g(chi);
    for (u64 r = 0; r < q; ++r) (*coeff)[r] += g * chi(r);
  }
  return from_lambda(
      [coeff, q](u64 p, int k) {
        u64 r = 1;
        for (int i = 0; i < k; ++i) r = arith::mul_mod(r, p % q, q);
        return (*coeff)[r] * std::log(static_cast<double>(p));
      },
      "gauss(" + std::to_string(q) + ")");
}

}  // namespace builtin

std::vector<cplx> reconstruct_prime_powers(const std::function<cplx(int j)>& lambda_at_power, u64 p,
                                           int max_k) {
  std::vector<cplx> f(static_cast<std::size_t>(max_k) + 1);
  f[0] = 1.0;
  const double logp = std::log(static_cast<double>(p));
  for (int k = 1; k <= max_k; ++k) {
    cplx acc{};
    for (int j = 1; j <= k; ++j) acc += lambda_at_power(j) * f[static_cast<std::size_t>(k - j)];
    f[static_cast<std::size_t>(k)] = acc / (static_cast<double>(k) * logp);
  }
  return f;
}

MultFn from_lambda(std::function<cplx(u64 p, int k)> lambda, std::string name) {
  return MultFn::prime_power_table(
      [lambda = std::move(lambda)](u64 p, int k) {
        return reconstruct_prime_powers([&](int j) { return lambda(p, j); }, p, k).back();
      },
      std::move(name));
}

LambdaFTable::LambdaFTable(const MultFn& f, u64 bound) : bound_(bound), values_(bound + 1) {
  if (bound < 2) throw DomainError("lambda_f: bound must be >= 2");
  for (u64 p : arith::primes_up_to(bound)) {
    const double logp = std::log(static_cast<double>(p));
    std::vector<cplx> fpk{1.0};
    std::vector<cplx> lam{0.0};
    u64 pk = 1;
    for (int k = 1; pk <= bound / p; ++k) {
      pk *= p;
      fpk.push_back(f.prime_power(p, k));
      cplx acc = static_cast<double>(k) * logp * fpk[static_cast<std::size_t>(k)];
      for (int j = 1; j < k; ++j) acc -= lam[static_cast<std::size_t>(j)] * fpk[static_cast<std::size_t>(k - j)];
      lam.push_back(acc);
      values_[pk] = acc;
    }
  }
}

LambdaFTable lambda_f(const MultFn& f, u64 bound) { return LambdaFTable(f, bound); }

ClassCWitness class_c_check(const MultFn& f, u64 bound) {
  const LambdaFTable lam(f, bound);
  ClassCWitness w;
  for (u64 n = 2; n <= bound; ++n) {
    const cplx v = lam(n);
    if (v == cplx{}) continue;
    const double cap = arith::von_mangoldt(n);
    if (std::abs(v) > cap + 1e-12) {
      w.in_class = false;
      w.first_violation = n;
      return w;
    }
  }
  return w;
}

double harper_residual(const MultFn& f, const LambdaFTable& lam, u64 n) {
  if (n < 2) throw DomainError("harper_residual: n must be >= 2");
  if (n > lam.bound()) throw DomainError("harper_residual: Lambda_f not tabulated up to n");
  const auto divs = arith::divisors(arith::factorize(n));
  const double logn = std::log(static_cast<double>(n));
  cplx rhs = lam(n);
  for (u64 a : divs) {
    if (a == n) continue;
    const cplx la = lam(a);
    if (la == cplx{}) continue;
    const u64 rest = n / a;
    const double weight = 1.0 / std::log(static_cast<double>(rest));
    for (u64 b : arith::divisors(arith::factorize(rest))) {
      const cplx lb = lam(b);
      if (lb == cplx{}) continue;
      rhs += la * lb * f(rest / b) * weight;
    }
  }
  return std::abs(f(n) * logn - rhs);
}

}  // namespace mfbv
