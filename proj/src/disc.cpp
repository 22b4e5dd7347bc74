#include "mfbv/disc.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mfbv/csv.hpp"
#include "mfbv/errors.hpp"
#include "mfbv/parallel.hpp"

namespace mfbv::disc {

namespace {

void require_table(const FnTable& f, u64 x, const char* who) {
  if (f.size() < x + 1) throw DomainError(std::string(who) + ": value table shorter than x");
}

std::vector<cplx> conj_values(const DirichletCharacter& chi) {
  std::vector<cplx> v(chi.modulus());
  for (u64 a = 0; a < chi.modulus(); ++a) v[a] = chi.conj(a);
  return v;
}

// A[a] = sum_{n<=x, n = a mod q} f(n)
std::vector<cplx> residue_sums(const FnTable& f, u64 x, u64 q) {
  std::vector<cplx> acc(q);
  u64 r = 1 % q;
  for (u64 n = 1; n <= x; ++n) {
    acc[r] += f[n];
    if (++r == q) r = 0;
  }
  return acc;
}

std::vector<u64> units_mod(u64 q) {
  std::vector<u64> out;
  for (u64 a = 0; a < q; ++a) {
    if (arith::gcd(a, q) == 1) out.push_back(a);
  }
  return out;
}

}  // namespace

FnTable make_table(const MultFn& f, u64 x) { return f.table(x); }

CharSumGrid char_sum(const FnTable& f, const DirichletCharacter& chi, std::vector<u64> xs) {
  std::sort(xs.begin(), xs.end());
  CharSumGrid grid{chi, xs, std::vector<cplx>(xs.size())};
  if (xs.empty()) return grid;
  require_table(f, xs.back(), "char_sum");
  const auto cv = conj_values(chi);
  const u64 q = chi.modulus();
  cplx acc{};
  std::size_t next = 0;
  while (next < xs.size() && xs[next] == 0) grid.sums[next++] = acc;
  u64 r = 1 % q;
  for (u64 n = 1; n <= xs.back(); ++n) {
    acc += f[n] * cv[r];
    if (++r == q) r = 0;
    while (next < xs.size() && xs[next] == n) grid.sums[next++] = acc;
  }
  return grid;
}

cplx char_sum_at(const FnTable& f, const DirichletCharacter& chi, u64 x) {
  return char_sum(f, chi, {x}).sums[0];
}

double sigma(const FnTable& f, u64 x, double z, const DirichletCharacter& psi) {
  if (!(z > 1.0)) throw DomainError("sigma: need z > 1");
  if (x < 1) throw DomainError("sigma: need x >= 1");
  require_table(f, x, "sigma");
  const u64 lo = static_cast<u64>(std::floor(double(x) / z));  // N ranges over (lo, x]
  const auto cv = conj_values(psi);
  const u64 q = psi.modulus();
  cplx acc{};
  double best = 0.0;
  u64 r = 1 % q;
  for (u64 n = 1; n <= x; ++n) {
    acc += f[n] * cv[r];
    if (++r == q) r = 0;
    if (n > lo) best = std::max(best, std::abs(acc) / double(n));
  }
  return best;
}

std::vector<ExceptionalEntry> ExceptionalSet::xi_threshold(double b) const {
  const double cut = std::pow(std::log(double(x)), -b);
  std::vector<ExceptionalEntry> out;
  for (const auto& e : entries) {
    if (e.score >= cut) out.push_back(e);
  }
  return out;
}

std::vector<DirichletCharacter> ExceptionalSet::top(std::size_t k) const {
  std::vector<DirichletCharacter> out;
  for (std::size_t j = 0; j < k && j < entries.size(); ++j) out.push_back(entries[j].psi);
  return out;
}

u64 default_conductor_cutoff(u64 x) {
  return std::max<u64>(1, static_cast<u64>(std::ceil(std::log(double(std::max<u64>(x, 2))))));
}

ExceptionalSet ordered_exceptionals(const FnTable& f, u64 x, u64 conductor_cutoff, double z) {
  if (conductor_cutoff < 1) throw DomainError("ordered_exceptionals: cutoff must be >= 1");
  ExceptionalSet set{x, conductor_cutoff, z, {}};
  for (u64 r = 1; r <= conductor_cutoff; ++r) {
    for (auto& psi : primitive_characters(r)) {
      const double s = sigma(f, x, z, psi);
      set.entries.push_back({std::move(psi), r, s});
    }
  }
  std::stable_sort(set.entries.begin(), set.entries.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.conductor != b.conductor) return a.conductor < b.conductor;
    return a.psi.index() < b.psi.index();
  });
  return set;
}

Variant Variant::plain() { return {Kind::plain, 0, {character_group(1)[0]}}; }

Variant Variant::top_k(const ExceptionalSet& ranked, std::size_t k) {
  return {Kind::top_k, k, ranked.top(k)};
}

Variant Variant::xi(std::vector<DirichletCharacter> set) {
  for (const auto& psi : set) {
    if (!psi.is_primitive()) throw DomainError("Variant::xi: members must be primitive");
  }
  return {Kind::xi, 0, std::move(set)};
}

std::string Variant::label() const {
  switch (kind) {
    case Kind::plain: return "plain";
    case Kind::top_k: return "top_k:" + std::to_string(k);
    case Kind::xi: return "xi:" + std::to_string(subtract.size());
  }
  return "?";
}

std::vector<DirichletCharacter> induced_set(const std::vector<DirichletCharacter>& primitives, u64 q) {
  std::vector<DirichletCharacter> out;
  std::set<u64> seen;
  for (const auto& psi : primitives) {
    if (q % psi.modulus() != 0) continue;
    auto chi = induce(psi, q);
    if (seen.insert(chi.index()).second) out.push_back(std::move(chi));
  }
  return out;
}

namespace {

// Delta_Xi at every residue from the residue sums; plain uses the coprime mean directly.
std::vector<cplx> deltas_from_sums(const std::vector<cplx>& sums, u64 q, const Variant& variant,
                                   const std::vector<u64>& units) {
  const double phi = double(units.size());
  std::vector<cplx> d(q);
  if (variant.kind == Variant::Kind::plain) {
    cplx total{};
    for (u64 a : units) total += sums[a];
    const cplx mean = total / phi;
    for (u64 a : units) d[a] = sums[a] - mean;
    return d;
  }
  for (u64 a : units) d[a] = sums[a];
  for (const auto& chi : induced_set(variant.subtract, q)) {
    cplx s{};
    for (u64 a : units) s += chi.conj(a) * sums[a];
    for (u64 a : units) d[a] -= chi(a) * s / phi;
  }
  return d;
}

}  // namespace

cplx delta(const FnTable& f, u64 x, u64 q, i64 a, const Variant& variant) {
  if (q == 0) throw DomainError("delta: q must be positive");
  const u64 ar = arith::reduce(a, q);
  if (arith::gcd(ar, q) != 1) throw DomainError("delta: gcd(a, q) != 1");
  require_table(f, x, "delta");
  cplx in_class{};
  for (u64 n = ar == 0 ? q : ar; n <= x; n += q) in_class += f[n];
  const double phi = double(arith::euler_phi(q));
  if (variant.kind == Variant::Kind::plain) {
    cplx coprime{};
    for (u64 n = 1; n <= x; ++n) {
      if (arith::gcd(n, q) == 1) coprime += f[n];
    }
    return in_class - coprime / phi;
  }
  cplx sub{};
  for (const auto& chi : induced_set(variant.subtract, q)) sub += chi(ar) * char_sum_at(f, chi, x);
  return in_class - sub / phi;
}

double expansion_check(const FnTable& f, u64 x, u64 q) {
  if (q == 0 || q > 500) throw DomainError("expansion_check: need 1 <= q <= 500");
  require_table(f, x, "expansion_check");
  const auto group = character_group(q);
  std::vector<cplx> s(group.size());
  for (std::size_t j = 0; j < group.size(); ++j) {
    if (!group[j].is_principal()) s[j] = char_sum_at(f, group[j], x);
  }
  const double phi = double(group.size());
  double worst = 0.0;
  for (u64 a : units_mod(q)) {
    const cplx lhs = delta(f, x, q, i64(a), Variant::plain());
    cplx rhs{};
    for (std::size_t j = 0; j < group.size(); ++j) {
      if (!group[j].is_principal()) rhs += group[j](a) * s[j];
    }
    worst = std::max(worst, std::abs(lhs - rhs / phi));
  }
  return worst;
}

double h_convolution_check(const MultFn& f, const FnTable& table, const DirichletCharacter& chi, u64 x) {
  require_table(table, x, "h_convolution_check");
  const auto red = conductor_and_primitive(chi);
  const auto& psi = red.primitive;
  const u64 q = chi.modulus(), r = red.conductor;

  // h on p^k for p | q, p not dividing r: (h * f conj(psi))(p^k) = 0 for k >= 1, h(1) = 1.
  struct Local {
    u64 p;
    std::vector<cplx> h;  // h[k] = h(p^k), p^k <= x
  };
  std::vector<Local> locals;
  for (const auto& pp : arith::factorize(q).factors) {
    if (r % pp.prime == 0) continue;
    Local loc{pp.prime, {cplx{1.0}}};
    u64 pk = 1;
    for (int k = 1; pk <= x / pp.prime; ++k) {
      pk *= pp.prime;
      cplx hk{};
      cplx psi_pj = 1.0;
      for (int j = 1; j <= k; ++j) {
        psi_pj *= psi.conj(pp.prime);
        hk -= f.prime_power(pp.prime, j) * psi_pj * loc.h[std::size_t(k - j)];
      }
      loc.h.push_back(hk);
    }
    locals.push_back(std::move(loc));
  }

  std::vector<cplx> prefix(x + 1);
  {
    const auto cv = conj_values(psi);
    cplx acc{};
    u64 res = 1 % r;
    for (u64 n = 1; n <= x; ++n) {
      acc += table[n] * cv[res];
      if (++res == r) res = 0;
      prefix[n] = acc;
    }
  }

  cplx rhs{};
  auto walk = [&](auto&& self, std::size_t i, u64 m, cplx hm) -> void {
    if (i == locals.size()) {
      rhs += hm * prefix[x / m];
      return;
    }
    const auto& loc = locals[i];
    u64 pk = 1;
    for (std::size_t k = 0; k < loc.h.size() && pk <= x / m; ++k) {
      self(self, i + 1, m * pk, hm * loc.h[k]);
      if (pk > x / loc.p) break;
      pk *= loc.p;
    }
  };
  walk(walk, 0, 1, cplx{1.0});
  return std::abs(char_sum_at(table, chi, x) - rhs);
}

double siegel_walfisz_diagnostic(const FnTable& f, u64 x, u64 q, i64 a) {
  if (q == 0) throw DomainError("siegel_walfisz_diagnostic: q must be positive");
  const u64 ar = arith::reduce(a, q);
  if (arith::gcd(ar, q) != 1) throw DomainError("siegel_walfisz_diagnostic: gcd(a, q) != 1");
  require_table(f, x, "siegel_walfisz_diagnostic");
  const double phi = double(arith::euler_phi(q));
  std::vector<char> unit(q);
  for (u64 b = 0; b < q; ++b) unit[b] = arith::gcd(b, q) == 1;
  cplx in_class{}, coprime{};
  double best = 0.0;
  u64 r = 1 % q;
  for (u64 n = 1; n <= x; ++n) {
    if (r == ar) in_class += f[n];
    if (unit[r]) coprime += f[n];
    if (++r == q) r = 0;
    if (n >= 2) best = std::max(best, std::abs(in_class - coprime / phi) * std::log(double(n)) / double(n));
  }
  return best;
}

bool ModulusFilter::admits(u64 q) const {
  switch (kind) {
    case Kind::all: return true;
    case Kind::primes: return arith::is_prime(q);
    case Kind::smooth: return arith::largest_prime_factor(q) <= param;
    case Kind::multiples: return param != 0 && q % param == 0;
  }
  return false;
}

std::string ModulusFilter::label() const {
  switch (kind) {
    case Kind::all: return "all";
    case Kind::primes: return "primes";
    case Kind::smooth: return "smooth:" + std::to_string(param);
    case Kind::multiples: return "multiples:" + std::to_string(param);
  }
  return "?";
}

DiscrepancyReport bv_average(const FnTable& f, const BvOptions& opt) {
  require_table(f, opt.x, "bv_average");
  std::vector<u64> moduli;
  for (u64 q = opt.q_lo + 1; q <= opt.q_hi; ++q) {
    if (!opt.filter.admits(q)) continue;
    if (opt.fixed_residue && arith::gcd(arith::reduce(*opt.fixed_residue, q), q) != 1) continue;
    moduli.push_back(q);
  }
  if (moduli.empty()) throw DomainError("bv_average: no admissible moduli in (" + std::to_string(opt.q_lo) +
                                        ", " + std::to_string(opt.q_hi) + "]");
  const u64 split_w = opt.split_w != 0
                          ? opt.split_w
                          : std::max<u64>(2, static_cast<u64>(std::floor(std::log(double(opt.x)))));

  DiscrepancyReport report{opt.variant.label(), opt.x, std::vector<DiscrepancyRow>(moduli.size()), 0.0};
  parallel_for(moduli.size(), opt.threads, [&](std::size_t i) {
    const u64 q = moduli[i];
    const auto sums = residue_sums(f, opt.x, q);
    const auto units = units_mod(q);
    const auto d = deltas_from_sums(sums, q, opt.variant, units);
    const auto split = arith::smooth_rough_split(q, split_w);
    DiscrepancyRow row{q, split.smooth, split.rough, 0, 0.0, std::nullopt};
    if (opt.fixed_residue) {
      row.a_argmax = arith::reduce(*opt.fixed_residue, q);
      row.abs_delta = std::abs(d[row.a_argmax]);
    } else {
      row.a_argmax = units.front();
      row.abs_delta = -1.0;
      for (u64 a : units) {
        const double v = std::abs(d[a]);
        if (v > row.abs_delta) {
          row.abs_delta = v;
          row.a_argmax = a;
        }
      }
      // max_{chi not in Xi_q} |S_f(x,chi)| / phi(q)
      std::set<u64> excluded;
      if (opt.variant.kind == Variant::Kind::plain) {
        excluded.insert(0);
      } else {
        for (const auto& chi : induced_set(opt.variant.subtract, q)) excluded.insert(chi.index());
      }
      const CharacterGroup group(q);
      const double phi = double(group.size());
      double cert = 0.0;
      for (u64 j = 0; j < group.size(); ++j) {
        if (excluded.count(j)) continue;
        const auto chi = group.character(j);
        cplx s{};
        for (u64 a : units) s += chi.conj(a) * sums[a];
        cert = std::max(cert, std::abs(s) / phi);
      }
      if (cert > row.abs_delta + kCertificateSlack * (1.0 + row.abs_delta)) {
        throw NumericError("bv_average: certificate inequality violated at q = " + std::to_string(q));
      }
      row.certificate = cert;
    }
    report.rows[i] = row;
  });
  for (const auto& row : report.rows) report.total += row.abs_delta;
  return report;
}

void write_csv_rows(const DiscrepancyReport& report, std::ostream& out, bool header) {
  csv::Writer w(out);
  if (header) w.row({"q", "q_s", "q_r", "a_argmax", "abs_delta", "certificate", "variant", "x"});
  for (const auto& r : report.rows) {
    w.row({csv::num(r.q), csv::num(r.q_s), csv::num(r.q_r), csv::num(r.a_argmax), csv::num(r.abs_delta),
           r.certificate ? csv::num(*r.certificate) : std::string{}, report.variant, csv::num(report.x)});
  }
  w.row({"total_over_x", "", "", "", csv::num(report.total / double(report.x)), "", report.variant,
         csv::num(report.x)});
}

}  // namespace mfbv::disc
