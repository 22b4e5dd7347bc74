#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mfbv/multfn.hpp"

namespace mfbv::lab {

using arith::i64;
using arith::u64;

enum class ObstructionKind { large_prime_pair, nobv, nobv2, gauss };

std::string to_string(ObstructionKind kind);
ObstructionKind obstruction_kind(const std::string& name);

struct ObstructionSpec {
  ObstructionKind kind = ObstructionKind::large_prime_pair;
  u64 x = 10'000;
  double big_q = 30;  // moduli q in (Q, 2Q]
  u64 q = 7;          // gauss only
  // large-prime-pair only: f+ and f- agree with this off the prime set.
  std::optional<MultFn> base;
};

// One checked quantity. `expected` is absent for report-only rows.
struct CheckRow {
  u64 q = 0;
  std::string quantity;
  double value = 0;
  std::optional<double> expected;
  double abs_error = 0;
};

struct Obstruction {
  ObstructionSpec spec;
  std::vector<u64> primes;        // the set P, ascending (empty for gauss)
  std::vector<MultFn> functions;  // {f+, f-} for the pair, {f} otherwise
  std::vector<CheckRow> rows;
  double max_error = 0;           // over rows with an expected value
  std::vector<std::string> warnings;
};

// Throws DomainError when (x, Q) or q falls outside the kind's admissible range.
Obstruction construct_obstruction(const ObstructionSpec& spec);

void write_csv_rows(const Obstruction& ob, std::ostream& out);

// Gowers norms of n -> F(n) on [0, Y], embedded in Z_N with N the smallest
// prime above 2kY and divided by the same norm of the indicator of [0, Y].
u64 uk_group_order(u64 y, int k);
// values[n] = F(n), n = 0..Y
double uk_norm_values(const std::vector<cplx>& values, int k);
// Fourth moment of the Z_N Fourier transform; equals the k = 2 cube average.
double u2_norm_fourier(const std::vector<cplx>& values);
// n -> f(qn + a) on [0, Y]
std::vector<cplx> progression_values(const MultFn& f, u64 q, u64 a, u64 y);
double uk_norm(const MultFn& f, u64 q, u64 a, u64 y, int k);

inline constexpr u64 kMaxUkInterval = 300;

}  // namespace mfbv::lab
