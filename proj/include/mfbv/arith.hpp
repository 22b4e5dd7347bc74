#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace mfbv::arith {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline constexpr u64 kDefaultFactorBound = u64{1} << 50;

struct PrimePower {
  u64 prime = 0;
  int exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing
  u64 phi = 1;
  double von_mangoldt = 0.0;        // natural log units

  bool is_prime_power() const { return factors.size() == 1; }
};

// q = smooth * rough, smooth has every prime <= w, rough every prime > w.
struct SmoothRoughSplit {
  u64 q = 1;
  u64 w = 2;
  u64 smooth = 1;
  u64 rough = 1;
};

// Smallest-prime-factor table on [0, limit]. Immutable after construction.
class Sieve {
 public:
  explicit Sieve(u64 limit);

  u64 limit() const { return limit_; }
  u64 smallest_factor(u64 n) const { return spf_[n]; }
  bool is_prime(u64 n) const { return n >= 2 && spf_[n] == n; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

 private:
  u64 limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

// Must be called before the first use of default_sieve(); later calls throw.
void configure_sieve_limit(u64 limit);
const Sieve& default_sieve();

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);
u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);
// Inverse of a modulo m when gcd(a, m) = 1 (m >= 1; everything is 0 mod 1).
std::optional<u64> inverse_mod(i64 a, u64 m);
// Least non-negative residue of a modulo m.
u64 reduce(i64 a, u64 m);

// Deterministic for all 64-bit n.
bool is_prime(u64 n);

Factorization factorize(u64 n, u64 bound = kDefaultFactorBound);
u64 euler_phi(u64 n);
double von_mangoldt(u64 n);
SmoothRoughSplit smooth_rough_split(u64 q, u64 w);
u64 largest_prime_factor(u64 n);  // P(1) = 1

std::vector<u64> divisors(const Factorization& f);  // ascending
std::vector<u64> primes_up_to(u64 n);
std::vector<u64> primes_in(u64 lo, u64 hi);  // primes p with lo < p <= hi
u64 prime_count(u64 n);

// Smallest prime strictly greater than n.
u64 next_prime(u64 n);

}  // namespace mfbv::arith
