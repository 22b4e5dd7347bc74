#include "mfbv/arith.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>

#include "mfbv/errors.hpp"

namespace mfbv::arith {

namespace {

std::atomic<u64> g_sieve_limit{10'000'000};
std::atomic<bool> g_sieve_built{false};

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  // Brent's cycle detection with fixed seeds for determinism.
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    auto step = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void collect_factors(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  const Sieve& s = default_sieve();
  if (n <= s.limit()) {
    while (n > 1) {
      const u64 p = s.smallest_factor(n);
      out.push_back(p);
      n /= p;
    }
    return;
  }
  for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  collect_factors(d, out);
  collect_factors(n / d, out);
}

}  // namespace

Sieve::Sieve(u64 limit) : limit_(std::max<u64>(limit, 2)), spf_(limit_ + 1, 0) {
  if (limit_ > std::numeric_limits<std::uint32_t>::max()) {
    throw ResourceError("sieve limit exceeds 32-bit table range");
  }
  spf_[1] = 1;
  for (u64 i = 2; i <= limit_; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes_) {
      const u64 m = i * p;
      if (p > spf_[i] || m > limit_) break;
      spf_[m] = p;
    }
  }
}

void configure_sieve_limit(u64 limit) {
  if (g_sieve_built.load()) {
    throw DomainError("sieve limit must be configured before first use");
  }
  g_sieve_limit.store(limit);
}

const Sieve& default_sieve() {
  static const Sieve sieve = [] {
    g_sieve_built.store(true);
    return Sieve(g_sieve_limit.load());
  }();
  return sieve;
}

u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }
u64 lcm(u64 a, u64 b) { return a / gcd(a, b) * b; }

u64 reduce(i64 a, u64 m) {
  const i64 mm = static_cast<i64>(m);
  i64 r = a % mm;
  if (r < 0) r += mm;
  return static_cast<u64>(r);
}

std::optional<u64> inverse_mod(i64 a, u64 m) {
  if (m == 0) return std::nullopt;
  if (m == 1) return 0;
  i64 old_r = static_cast<i64>(reduce(a, m)), r = static_cast<i64>(m);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 quot = old_r / r;
    old_r -= quot * r;
    std::swap(old_r, r);
    old_s -= quot * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) return std::nullopt;
  return reduce(old_s, m);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This witness set is deterministic for n < 3.3e24.
  for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Factorization factorize(u64 n, u64 bound) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  if (n > bound) throw DomainError("factorize: n = " + std::to_string(n) + " exceeds bound");
  std::vector<u64> raw;
  collect_factors(n, raw);
  std::sort(raw.begin(), raw.end());

  Factorization f;
  f.n = n;
  f.phi = n;
  for (u64 p : raw) {
    if (!f.factors.empty() && f.factors.back().prime == p) {
      ++f.factors.back().exponent;
    } else {
      f.factors.push_back({p, 1});
      f.phi = f.phi / p * (p - 1);
    }
  }
  if (f.factors.size() == 1) f.von_mangoldt = std::log(static_cast<double>(f.factors[0].prime));
  return f;
}

u64 euler_phi(u64 n) { return factorize(n).phi; }
double von_mangoldt(u64 n) { return factorize(n).von_mangoldt; }

SmoothRoughSplit smooth_rough_split(u64 q, u64 w) {
  if (w < 2) throw DomainError("smooth_rough_split: w must be >= 2");
  SmoothRoughSplit s{q, w, 1, 1};
  for (const auto& [p, e] : factorize(q).factors) {
    u64 pk = 1;
    for (int i = 0; i < e; ++i) pk *= p;
    (p <= w ? s.smooth : s.rough) *= pk;
  }
  return s;
}

u64 largest_prime_factor(u64 n) {
  const auto f = factorize(n);
  return f.factors.empty() ? 1 : f.factors.back().prime;
}

std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    u64 pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<u64> primes_up_to(u64 n) { return primes_in(0, n); }

std::vector<u64> primes_in(u64 lo, u64 hi) {
  std::vector<u64> out;
  if (hi <= lo || hi < 2) return out;
  const Sieve& s = default_sieve();
  if (hi <= s.limit()) {
    const auto& ps = s.primes();
    auto it = std::upper_bound(ps.begin(), ps.end(), static_cast<std::uint32_t>(lo));
    for (; it != ps.end() && *it <= hi; ++it) out.push_back(*it);
    return out;
  }
  // Segmented sieve over (lo, hi] using base primes up to sqrt(hi).
  const u64 root = isqrt(hi);
  const auto base = primes_up_to(root);
  const u64 start = lo + 1;
  const u64 seg = 1 << 20;
  for (u64 a = start; a <= hi; a += seg) {
    const u64 b = std::min(hi, a + seg - 1);
    std::vector<char> composite(b - a + 1, 0);
    for (u64 p : base) {
      u64 m = std::max(p * p, (a + p - 1) / p * p);
      for (; m <= b; m += p) composite[m - a] = 1;
    }
    for (u64 v = a; v <= b; ++v) {
      if (v >= 2 && !composite[v - a]) out.push_back(v);
    }
  }
  return out;
}

u64 prime_count(u64 n) {
  const Sieve& s = default_sieve();
  if (n <= s.limit()) {
    const auto& ps = s.primes();
    return static_cast<u64>(std::upper_bound(ps.begin(), ps.end(), static_cast<std::uint32_t>(n)) - ps.begin());
  }
  return primes_up_to(n).size();
}

u64 next_prime(u64 n) {
  u64 c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

}  // namespace mfbv::arith
