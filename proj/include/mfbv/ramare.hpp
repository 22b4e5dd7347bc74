#pragma once

#include <boost/rational.hpp>
#include <optional>
#include <ostream>
#include <vector>

#include "mfbv/arith.hpp"
#include "mfbv/chars.hpp"

namespace mfbv::ramare {

using arith::i64;
using arith::u64;
using Rational = boost::rational<i64>;

struct RamareParams {
  double y = 10;
  double z = 30;
  u64 w = 10;                 // modulus-splitting threshold for q = q_s q_r
  bool restrict_main = true;  // main sum over Z^9 <= n <= x only

  double u_ramare() const;
  void validate() const;
};

// Primes p with y <= p < z, as an inclusive integer range.
struct PrimeWindow {
  u64 lo = 0;
  u64 hi = 0;
  static PrimeWindow of(double y, double z);
  bool contains(u64 p) const { return p >= lo && p <= hi; }
};

// w(n) = 1 / (1 + #{y <= p < z : p | n})
Rational weight(u64 n, double y, double z);
// sum over y <= p < z with p^k || n (k >= 1) of w(n / p^k); 1 or 0.
Rational indicator_sum(u64 n, double y, double z);

struct FTerm {
  u64 q = 1;
  cplx xi = 1.0;  // |xi| = 1
  i64 a = 1;      // gcd(a, q) = 1
};

struct FSpec {
  std::vector<FTerm> terms;
  u64 w = 10;
  std::optional<i64> fixed_residue;  // F(a) = 0 at this integer
};

// F(n) = sum_q xi_q (1_{n = a_q mod q} - (1/q_r) 1_{n = a_q mod q_s})
class FFunction {
 public:
  explicit FFunction(FSpec spec);

  const FSpec& spec() const { return spec_; }
  cplx operator()(u64 n) const;
  std::vector<cplx> table(u64 x) const;  // F(0..x)
  // Pointwise triangle-inequality majorant sum_q (1_{n=a(q)} + (1/q_r) 1_{n=a(q_s)}).
  double majorant(u64 n) const;
  // Q with every modulus q <= 2Q.
  u64 q_scale() const;

 private:
  struct Split {
    u64 q, q_s, q_r, a_q, a_s;
    cplx xi;
  };
  FSpec spec_;
  std::vector<Split> splits_;
};

struct FNorms {
  double sup = 0;
  double l2_squared = 0;
};
FNorms norms(const std::vector<cplx>& f_table, u64 x);
// sum_{n <= x, d | n} |F(n)|
double divisibility_sum(const std::vector<cplx>& f_table, u64 x, u64 d);

// The paper's choice: for each q, the residue a_q maximizing
// |sum_{n=a(q)} f - (1/q_r) sum_{n=a(q_s)} f| and xi_q making that term real positive.
FSpec optimal_spec(const std::vector<cplx>& f, u64 x, const std::vector<u64>& moduli, u64 w,
                   std::optional<i64> fixed_residue = std::nullopt);

struct BilinearScale {
  double p_scale = 0;
  std::size_t prime_count = 0;  // primes in (P, 2P]
  double average = 0;           // E_{p,p'} |sum_m F(pm) conj F(p'm)|
  double diagonal = 0;          // E_p sum_m |F(pm)|^2 / #primes
  double value = 0;             // (P x average)^{1/2}
};

struct RamareDecomposition {
  cplx main_sum = 0;
  double t = 0;
  u64 t_argmax = 1;
  double e_sieve = 0;
  double e_bilinear = 0;
  std::vector<BilinearScale> scales;  // P = Y, 2Y, ... < Z
  RamareParams params;
  u64 x = 0;
};

// f and F given as tables on 0..x.
RamareDecomposition decompose(const std::vector<cplx>& f, const std::vector<cplx>& big_f, u64 x,
                              const RamareParams& params, unsigned threads = 1);

// |main| / (T/(Y log Y) + E_sieve + E_bilinear); 0 when both sides vanish.
double empirical_constant(const RamareDecomposition& d);

struct SieveDiagnostic {
  double sum = 0;    // sum_{n<=x} |F(n)| 1_{(n, prod p) = 1}
  double bound = 0;  // x / u
  double ratio = 0;
};
SieveDiagnostic sieve_diagnostic(const std::vector<cplx>& big_f, u64 x, const RamareParams& params);

struct BilinearDiagnostic {
  double p_scale = 0;
  double average = 0;
  double bound = 0;  // x/P (1/(w log w) + (P^0.1 + log x)/pi(P)) + Q^2
  double ratio = 0;
};
std::vector<BilinearDiagnostic> bilinear_diagnostic(const RamareDecomposition& d, u64 q_scale);

void write_csv_rows(const RamareDecomposition& d, const SieveDiagnostic& sieve,
                    const std::vector<BilinearDiagnostic>& bilinear, std::ostream& out);

}  // namespace mfbv::ramare
