#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mfbv/arith.hpp"

namespace mfbv {

using cplx = std::complex<double>;
using arith::u64;

inline constexpr u64 kDefaultCharacterBound = 1'000'000;

// e(t) = exp(2 pi i t)
cplx unit_phase(double t);

// A Dirichlet character mod q stored exactly: chi(n) = e(angle(n) / denominator())
// on units, 0 elsewhere.
class DirichletCharacter {
 public:
  u64 modulus() const { return modulus_; }
  // Lexicographic rank of the exponent tuple within the group mod q.
  u64 index() const { return index_; }
  const std::vector<u64>& exponents() const { return exponents_; }
  u64 denominator() const { return denominator_; }
  u64 conductor() const { return conductor_; }
  bool is_primitive() const { return conductor_ == modulus_; }
  bool is_principal() const { return conductor_ == 1; }

  // Angle numerator of chi(n), or nullopt when gcd(n, q) > 1.
  std::optional<u64> angle(u64 n) const;
  cplx operator()(u64 n) const;
  cplx conj(u64 n) const { return std::conj((*this)(n)); }

  // Pointwise equality of values on all residues (exact).
  bool same_values(const DirichletCharacter& other) const;

 private:
  friend class CharacterGroup;
  DirichletCharacter() = default;

  u64 modulus_ = 1;
  u64 index_ = 0;
  std::vector<u64> exponents_;
  u64 denominator_ = 1;
  u64 conductor_ = 1;
  std::vector<std::int32_t> angles_;  // -1 off units
  std::shared_ptr<const std::vector<cplx>> roots_;
};

// The full group of characters mod q, built from discrete-log tables of the
// cyclic components (least primitive root for odd p^k, {+-1} x <5> for 2^k)
// combined by CRT.
class CharacterGroup {
 public:
  explicit CharacterGroup(u64 q, u64 bound = kDefaultCharacterBound);

  u64 modulus() const { return modulus_; }
  u64 size() const { return size_; }  // phi(q)
  const std::vector<u64>& orders() const { return orders_; }
  u64 exponent() const { return exponent_; }

  DirichletCharacter character(u64 index) const;
  DirichletCharacter principal() const { return character(0); }
  std::vector<DirichletCharacter> all() const;

  // Exponent-coordinate representation of a unit residue (discrete logs).
  std::vector<u64> coordinates(u64 a) const;

  // The character of this group taking the given values: value(n) is the
  // angle of chi(n) as a fraction num/den, queried on the group generators.
  template <typename AngleFn>
  DirichletCharacter from_angles(AngleFn angle_of) const;

 private:
  DirichletCharacter build(std::vector<u64> exponents) const;
  u64 rank(const std::vector<u64>& exponents) const;

  struct Component {
    u64 prime;
    u64 modulus;               // p^e
    std::vector<u64> gens;     // generators mod p^e, one per cyclic factor
    std::vector<u64> orders;
    // dlog[a] = coordinates of a packed as c0 * orders[1] + c1 (at most two
    // cyclic factors); -1 for non-units.
    std::vector<std::int64_t> dlog;
  };

  u64 modulus_;
  u64 size_ = 1;
  u64 exponent_ = 1;
  std::vector<Component> components_;
  std::vector<u64> orders_;            // cyclic factor orders in canonical order
  std::vector<u64> generator_residues_;  // CRT lift of each cyclic generator
  std::shared_ptr<const std::vector<cplx>> roots_;
};

template <typename AngleFn>
DirichletCharacter CharacterGroup::from_angles(AngleFn angle_of) const {
  // angle_of(n) returns a pair (num, den) meaning e(num / den).
  std::vector<u64> exps(orders_.size());
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    const auto [num, den] = angle_of(generator_residues_[j]);
    // t / order == num / den (mod 1)
    const unsigned __int128 scaled = static_cast<unsigned __int128>(num) * orders_[j];
    exps[j] = static_cast<u64>((scaled / den) % orders_[j]);
  }
  return build(std::move(exps));
}

std::vector<DirichletCharacter> character_group(u64 q, u64 bound = kDefaultCharacterBound);

struct PrimitiveReduction {
  u64 conductor;
  DirichletCharacter primitive;
};

PrimitiveReduction conductor_and_primitive(const DirichletCharacter& chi);

// The character mod q induced by psi (mod r); requires r | q.
DirichletCharacter induce(const DirichletCharacter& psi, u64 q);

// All primitive characters mod r, in index order.
std::vector<DirichletCharacter> primitive_characters(u64 r);

// g(chi) = (1/phi(q)) sum_a conj(chi)(a) e(a/q).
cplx gauss_g(const DirichletCharacter& chi);

}  // namespace mfbv
