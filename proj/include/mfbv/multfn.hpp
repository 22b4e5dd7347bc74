#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mfbv/arith.hpp"

namespace mfbv {

using cplx = std::complex<double>;
using arith::u64;

class DirichletCharacter;

// A 1-bounded multiplicative function, described by its values on prime
// powers. Evaluation at n multiplies the prime-power values of n's
// factorization; the override wrapper replaces values at listed n.
class MultFn {
 public:
  enum class Kind { kCompletelyMultiplicative, kPrimePowerTable, kSmoothRestricted, kPointwiseOverride };

  // Value at p^k (k >= 1) for a completely multiplicative or table-driven f.
  using PrimeValueFn = std::function<cplx(u64 p)>;
  using PrimePowerFn = std::function<cplx(u64 p, int k)>;

  static MultFn completely_multiplicative(PrimeValueFn prime_value, std::string name);
  static MultFn prime_power_table(PrimePowerFn value, std::string name);
  // Completely multiplicative from an explicit map of prime values; primes
  // missing from the map take the value 1.
  static MultFn from_prime_values(const std::map<u64, cplx>& values, std::string name);
  // Explicit prime-power values (keys must be prime powers); other prime
  // powers come from `fallback`.
  static MultFn from_prime_power_values(const std::map<u64, cplx>& values, const MultFn& fallback,
                                        std::string name);
  // f(p^k) = 0 for p > y.
  static MultFn smooth_restricted(const MultFn& base, u64 y);
  static MultFn with_overrides(const MultFn& base, std::map<u64, cplx> overrides);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::optional<u64> smooth_bound() const { return smooth_bound_; }
  const std::map<u64, cplx>& overrides() const { return *overrides_; }
  bool is_overridden(u64 n) const { return overrides_->count(n) != 0; }

  // f(p^k) for a prime p and k >= 1, including any override at p^k.
  cplx prime_power(u64 p, int k) const;
  cplx operator()(u64 n) const;

  // Values f(0..n) with f(0) = 0. Throws DomainError if some |f(m)| > 1.
  std::vector<cplx> table(u64 n) const;

 private:
  MultFn() = default;
  cplx base_prime_power(u64 p, int k) const;

  Kind kind_ = Kind::kCompletelyMultiplicative;
  std::string name_;
  PrimePowerFn values_;
  std::optional<u64> smooth_bound_;
  std::shared_ptr<const std::map<u64, cplx>> overrides_ = std::make_shared<std::map<u64, cplx>>();
};

namespace builtin {

MultFn unit();
MultFn mobius();
MultFn liouville();
MultFn character(const DirichletCharacter& chi);
// Completely multiplicative, f(p) = +-1 drawn from a hash of (seed, p).
MultFn random_sign(std::uint64_t seed);
// f(p) = (p/3) for p != 3, f(3) = 1; completely multiplicative.
MultFn quadratic3_extension();
// Lambda_f(n) = c_q(n) Lambda(n), c_q(n) = sum_chi g(chi) chi(n) = e(n/q) on units mod q.
MultFn gauss(u64 q);

}  // namespace builtin

// Lambda_f on prime powers up to `bound`, from f log = Lambda_f * f.
class LambdaFTable {
 public:
  LambdaFTable(const MultFn& f, u64 bound);

  u64 bound() const { return bound_; }
  // Lambda_f(n); zero off prime powers.
  cplx operator()(u64 n) const { return n <= bound_ ? values_[n] : cplx{}; }
  const std::vector<cplx>& dense() const { return values_; }

 private:
  u64 bound_;
  std::vector<cplx> values_;
};

LambdaFTable lambda_f(const MultFn& f, u64 bound);

// Rebuild f(p^k), k = 0..max_k, from Lambda_f(p^j) via the same recursion.
std::vector<cplx> reconstruct_prime_powers(const std::function<cplx(int j)>& lambda_at_power, u64 p,
                                           int max_k);

// Build the multiplicative f whose Lambda_f(p^k) = lambda(p, k).
MultFn from_lambda(std::function<cplx(u64 p, int k)> lambda, std::string name);

struct ClassCWitness {
  bool in_class = true;
  std::optional<u64> first_violation;
};

ClassCWitness class_c_check(const MultFn& f, u64 bound);

// |f(n) log n - Lambda_f(n) - sum_{abm=n, a<n} Lambda_f(a)Lambda_f(b)f(m)/log(n/a)|.
double harper_residual(const MultFn& f, const LambdaFTable& lam, u64 n);

}  // namespace mfbv
