#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mfbv/chars.hpp"
#include "mfbv/multfn.hpp"

namespace mfbv::disc {

using arith::i64;
using arith::u64;

// Values f(0..x) with f(0) = 0; every routine below reads f through such a table.
using FnTable = std::vector<cplx>;
FnTable make_table(const MultFn& f, u64 x);

struct CharSumGrid {
  DirichletCharacter chi;
  std::vector<u64> xs;     // ascending
  std::vector<cplx> sums;  // S_f(X, chi) = sum_{n<=X} f(n) conj(chi)(n)
};

CharSumGrid char_sum(const FnTable& f, const DirichletCharacter& chi, std::vector<u64> xs);
cplx char_sum_at(const FnTable& f, const DirichletCharacter& chi, u64 x);

// max over integers N in (x/z, x] of |S_f(N, psi)| / N
double sigma(const FnTable& f, u64 x, double z, const DirichletCharacter& psi);

struct ExceptionalEntry {
  DirichletCharacter psi;
  u64 conductor;
  double score;
};

struct ExceptionalSet {
  u64 x = 0;
  u64 conductor_cutoff = 1;
  double z = 0;
  // Scores nonincreasing; ties by (conductor, index) ascending.
  std::vector<ExceptionalEntry> entries;

  // Entries with score >= (log x)^{-b}.
  std::vector<ExceptionalEntry> xi_threshold(double b) const;
  std::vector<DirichletCharacter> top(std::size_t k) const;
};

// Every primitive character of conductor <= cutoff, trivial one included, ranked by sigma.
ExceptionalSet ordered_exceptionals(const FnTable& f, u64 x, u64 conductor_cutoff, double z);
u64 default_conductor_cutoff(u64 x);  // ceil(log x)

// Which character terms are removed from the progression sum.
struct Variant {
  enum class Kind { plain, top_k, xi };
  Kind kind = Kind::plain;
  std::size_t k = 0;
  // Primitive characters whose induced terms are subtracted; {trivial} for plain.
  std::vector<DirichletCharacter> subtract;

  static Variant plain();
  static Variant top_k(const ExceptionalSet& ranked, std::size_t k);
  static Variant xi(std::vector<DirichletCharacter> set);
  std::string label() const;
};

// Characters mod q induced by members of the set whose conductor divides q.
std::vector<DirichletCharacter> induced_set(const std::vector<DirichletCharacter>& primitives, u64 q);

cplx delta(const FnTable& f, u64 x, u64 q, i64 a, const Variant& variant);

// max over units a of |Delta(f,x;q,a) - (1/phi) sum_{chi != chi0} chi(a) S_f(x,chi)|
double expansion_check(const FnTable& f, u64 x, u64 q);

// |S_f(x,chi) - sum_m h(m) S_f(x/m, psi)| for psi the primitive character inducing chi.
double h_convolution_check(const MultFn& f, const FnTable& table, const DirichletCharacter& chi, u64 x);

// max over integers 2 <= X <= x of |Delta(f,X;q,a)| log X / X
double siegel_walfisz_diagnostic(const FnTable& f, u64 x, u64 q, i64 a);

struct ModulusFilter {
  enum class Kind { all, primes, smooth, multiples };
  Kind kind = Kind::all;
  u64 param = 0;  // w for smooth, d for multiples

  bool admits(u64 q) const;
  std::string label() const;
};

struct BvOptions {
  u64 x = 100'000;
  u64 q_lo = 50;   // exclusive
  u64 q_hi = 100;  // inclusive
  Variant variant = Variant::plain();
  ModulusFilter filter;
  std::optional<i64> fixed_residue;
  u64 split_w = 0;  // 0 means max(2, floor(log x))
  unsigned threads = 1;
};

struct DiscrepancyRow {
  u64 q = 0;
  u64 q_s = 1;
  u64 q_r = 1;
  u64 a_argmax = 0;
  double abs_delta = 0;
  std::optional<double> certificate;  // absent in fixed-residue mode
};

struct DiscrepancyReport {
  std::string variant;
  u64 x = 0;
  std::vector<DiscrepancyRow> rows;  // ascending q
  double total = 0;
};

// Relative slack allowed on the certificate inequality for rounding.
inline constexpr double kCertificateSlack = 1e-9;

DiscrepancyReport bv_average(const FnTable& f, const BvOptions& opt);

// Rows for several x share one header when `header` is false after the first.
void write_csv_rows(const DiscrepancyReport& report, std::ostream& out, bool header = true);

}  // namespace mfbv::disc
