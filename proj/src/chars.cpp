#include "mfbv/chars.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mfbv/errors.hpp"

namespace mfbv {

using arith::gcd;

cplx unit_phase(double t) {
  const double frac = t - std::floor(t);
  const double angle = 2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

std::optional<u64> DirichletCharacter::angle(u64 n) const {
  const std::int32_t a = angles_[n % modulus_];
  if (a < 0) return std::nullopt;
  return static_cast<u64>(a);
}

cplx DirichletCharacter::operator()(u64 n) const {
  const std::int32_t a = angles_[n % modulus_];
  return a < 0 ? cplx{} : (*roots_)[static_cast<std::size_t>(a)];
}

bool DirichletCharacter::same_values(const DirichletCharacter& other) const {
  if (modulus_ != other.modulus_) return false;
  const u64 n1 = denominator_, n2 = other.denominator_;
  const u64 joint = n1 * n2;
  for (u64 a = 0; a < modulus_; ++a) {
    const std::int32_t x = angles_[a], y = other.angles_[a];
    if ((x < 0) != (y < 0)) return false;
    if (x < 0) continue;
    if ((static_cast<u64>(x) * n2) % joint != (static_cast<u64>(y) * n1) % joint) return false;
  }
  return true;
}

namespace {

u64 least_primitive_root(u64 p, u64 m, u64 order) {
  const auto f = arith::factorize(order);
  for (u64 g = 2; g < m; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (const auto& pp : f.factors) {
      if (arith::pow_mod(g, order / pp.prime, m) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;  // m = 2: trivial group
}

}  // namespace

CharacterGroup::CharacterGroup(u64 q, u64 bound) : modulus_(q) {
  if (q == 0) throw DomainError("character group: modulus must be positive");
  if (q > bound) {
    throw ResourceError("character group: modulus " + std::to_string(q) + " exceeds bound " +
                        std::to_string(bound));
  }
  for (const auto& [p, e] : arith::factorize(q).factors) {
    Component c;
    c.prime = p;
    c.modulus = 1;
    for (int i = 0; i < e; ++i) c.modulus *= p;
    const u64 m = c.modulus;
    c.dlog.assign(m, -1);
    if (p == 2) {
      if (e == 1) {
        c.dlog[1] = 0;
      } else if (e == 2) {
        c.gens = {3};
        c.orders = {2};
        c.dlog[1] = 0;
        c.dlog[3] = 1;
      } else {
        const u64 ord5 = m / 4;
        c.gens = {m - 1, 5};
        c.orders = {2, ord5};
        for (u64 s = 0; s < 2; ++s) {
          u64 x = s ? m - 1 : 1;
          for (u64 t = 0; t < ord5; ++t) {
            c.dlog[x] = static_cast<std::int64_t>(s * ord5 + t);
            x = x * 5 % m;
          }
        }
      }
    } else {
      const u64 order = m / p * (p - 1);
      const u64 g = least_primitive_root(p, m, order);
      c.gens = {g};
      c.orders = {order};
      u64 x = 1;
      for (u64 t = 0; t < order; ++t) {
        c.dlog[x] = static_cast<std::int64_t>(t);
        x = arith::mul_mod(x, g, m);
      }
    }
    components_.push_back(std::move(c));
  }

  for (const auto& c : components_) {
    const u64 rest = q / c.modulus;
    const u64 inv = rest == 1 ? 0 : *arith::inverse_mod(static_cast<arith::i64>(rest % c.modulus), c.modulus);
    for (std::size_t j = 0; j < c.gens.size(); ++j) {
      orders_.push_back(c.orders[j]);
      size_ *= c.orders[j];
      exponent_ = arith::lcm(exponent_, c.orders[j]);
      // x = 1 + rest * k with x = gen (mod p^e)
      const u64 k = arith::mul_mod((c.gens[j] + c.modulus - 1) % c.modulus, inv, c.modulus);
      generator_residues_.push_back(rest == 1 ? c.gens[j] % q : (1 + rest * k) % q);
    }
  }

  auto roots = std::make_shared<std::vector<cplx>>(exponent_);
  for (u64 k = 0; k < exponent_; ++k) {
    (*roots)[k] = unit_phase(static_cast<double>(k) / static_cast<double>(exponent_));
  }
  roots_ = std::move(roots);
}

std::vector<u64> CharacterGroup::coordinates(u64 a) const {
  std::vector<u64> coords;
  for (const auto& c : components_) {
    const std::int64_t packed = c.dlog[a % c.modulus];
    if (packed < 0) throw DomainError("coordinates: residue is not a unit");
    if (c.orders.size() == 2) {
      coords.push_back(static_cast<u64>(packed) / c.orders[1]);
      coords.push_back(static_cast<u64>(packed) % c.orders[1]);
    } else if (c.orders.size() == 1) {
      coords.push_back(static_cast<u64>(packed));
    }
  }
  return coords;
}

u64 CharacterGroup::rank(const std::vector<u64>& exponents) const {
  u64 r = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j) r = r * orders_[j] + exponents[j];
  return r;
}

DirichletCharacter CharacterGroup::character(u64 index) const {
  if (index >= size_) throw DomainError("character index out of range");
  std::vector<u64> exps(orders_.size());
  for (std::size_t j = orders_.size(); j-- > 0;) {
    exps[j] = index % orders_[j];
    index /= orders_[j];
  }
  return build(std::move(exps));
}

std::vector<DirichletCharacter> CharacterGroup::all() const {
  std::vector<DirichletCharacter> out;
  out.reserve(size_);
  for (u64 i = 0; i < size_; ++i) out.push_back(character(i));
  return out;
}

DirichletCharacter CharacterGroup::build(std::vector<u64> exponents) const {
  DirichletCharacter chi;
  chi.modulus_ = modulus_;
  chi.index_ = rank(exponents);
  chi.denominator_ = exponent_;
  chi.roots_ = roots_;
  const u64 n = exponent_;

  // Per-component angle contribution, then combine residues by CRT.
  std::vector<std::vector<std::int64_t>> contrib;
  std::size_t j = 0;
  for (const auto& c : components_) {
    std::vector<std::int64_t> table(c.modulus, -1);
    for (u64 b = 0; b < c.modulus; ++b) {
      const std::int64_t packed = c.dlog[b];
      if (packed < 0) continue;
      u64 acc = 0;
      if (c.orders.size() == 2) {
        const u64 c0 = static_cast<u64>(packed) / c.orders[1], c1 = static_cast<u64>(packed) % c.orders[1];
        acc = (c0 * exponents[j] % c.orders[0]) * (n / c.orders[0]) +
              (c1 * exponents[j + 1] % c.orders[1]) * (n / c.orders[1]);
      } else if (c.orders.size() == 1) {
        acc = (static_cast<u64>(packed) * exponents[j] % c.orders[0]) * (n / c.orders[0]);
      }
      table[b] = static_cast<std::int64_t>(acc % n);
    }
    j += c.orders.size();
    contrib.push_back(std::move(table));
  }

  chi.angles_.assign(modulus_, -1);
  for (u64 a = 0; a < modulus_; ++a) {
    u64 acc = 0;
    bool unit = true;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const std::int64_t v = contrib[i][a % components_[i].modulus];
      if (v < 0) {
        unit = false;
        break;
      }
      acc += static_cast<u64>(v);
    }
    if (unit) chi.angles_[a] = static_cast<std::int32_t>(acc % n);
  }
  chi.exponents_ = std::move(exponents);

  // Conductor: least d | q such that chi is trivial on units = 1 (mod d).
  chi.conductor_ = modulus_;
  if (modulus_ == 1) return chi;
  for (u64 d : arith::divisors(arith::factorize(modulus_))) {
    bool trivial = true;
    for (u64 a = 1; a < modulus_; a += d) {
      if (chi.angles_[a] > 0) {
        trivial = false;
        break;
      }
    }
    if (trivial) {
      chi.conductor_ = d;
      break;
    }
  }
  return chi;
}

std::vector<DirichletCharacter> character_group(u64 q, u64 bound) { return CharacterGroup(q, bound).all(); }

PrimitiveReduction conductor_and_primitive(const DirichletCharacter& chi) {
  const u64 d = chi.conductor();
  const u64 q = chi.modulus();
  const CharacterGroup group(d);
  auto psi = group.from_angles([&](u64 n) {
    u64 lift = n % d;
    while (gcd(lift, q) != 1) lift += d;
    return std::pair<u64, u64>{*chi.angle(lift), chi.denominator()};
  });
  return {d, std::move(psi)};
}

DirichletCharacter induce(const DirichletCharacter& psi, u64 q) {
  const u64 r = psi.modulus();
  if (q == 0 || q % r != 0) {
    throw DomainError("induce: modulus " + std::to_string(r) + " does not divide " + std::to_string(q));
  }
  const CharacterGroup group(q);
  return group.from_angles(
      [&](u64 n) { return std::pair<u64, u64>{*psi.angle(n % r), psi.denominator()}; });
}

std::vector<DirichletCharacter> primitive_characters(u64 r) {
  std::vector<DirichletCharacter> out;
  for (auto& chi : character_group(r)) {
    if (chi.is_primitive()) out.push_back(std::move(chi));
  }
  return out;
}

cplx gauss_g(const DirichletCharacter& chi) {
  const u64 q = chi.modulus();
  cplx acc{};
  u64 units = 0;
  for (u64 a = 0; a < q; ++a) {
    if (!chi.angle(a)) continue;
    ++units;
    acc += chi.conj(a) * unit_phase(static_cast<double>(a) / static_cast<double>(q));
  }
  return acc / static_cast<double>(units);
}

}  // namespace mfbv
