#include <cmath>
#include <set>

#include "doctest.h"
#include "mfbv/chars.hpp"
#include "mfbv/errors.hpp"

using namespace mfbv;

namespace {

// The real nonprincipal character mod m (m with cyclic unit group of even order).
DirichletCharacter real_nonprincipal(u64 m) {
  for (const auto& chi : character_group(m)) {
    bool real = !chi.is_principal();
    for (u64 n = 0; n < m && real; ++n) real = std::abs(chi(n).imag()) < 1e-12;
    if (real) return chi;
  }
  throw std::runtime_error("no real character");
}

}  // namespace

TEST_CASE("group sizes and small examples") {
  const auto g5 = character_group(5);
  CHECK(g5.size() == 4);
  for (const auto& chi : g5) {
    for (u64 n = 1; n < 5; ++n) {
      const cplx v4 = std::pow(chi(n), 4);
      CHECK(std::abs(v4 - cplx{1.0}) < 1e-12);
    }
    CHECK(chi(0) == cplx{});
    CHECK(chi(1) == cplx{1.0});
  }

  cplx acc{};
  for (const auto& chi : character_group(8)) acc += chi(3) * chi.conj(5);
  CHECK(std::abs(acc) < 1e-12);

  const auto g1 = character_group(1);
  REQUIRE(g1.size() == 1);
  for (u64 n = 0; n < 20; ++n) CHECK(g1[0](n) == cplx{1.0});
  CHECK(g1[0].is_primitive());
  CHECK(g1[0].is_principal());
}

TEST_CASE("group order equals phi(q) for q <= 1e4") {
  for (u64 q = 1; q <= 10'000; ++q) REQUIRE(CharacterGroup(q).size() == arith::euler_phi(q));
}

TEST_CASE("characters are multiplicative, distinct, unit modulus") {
  for (u64 q : {1, 2, 4, 8, 9, 12, 16, 24, 45, 63, 64, 100}) {
    const auto chars = character_group(q);
    std::set<u64> indices;
    for (const auto& chi : chars) {
      indices.insert(chi.index());
      CHECK(chi(1) == cplx{1.0});
      for (u64 m = 0; m < q; ++m) {
        CHECK(std::abs(chi(m)) == doctest::Approx(arith::gcd(m, q) == 1 ? 1.0 : 0.0));
        for (u64 n = 0; n < q; ++n) REQUIRE(std::abs(chi(m * n) - chi(m) * chi(n)) < 1e-12);
      }
    }
    CHECK(indices.size() == chars.size());
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::size_t j = i + 1; j < chars.size(); ++j) CHECK_FALSE(chars[i].same_values(chars[j]));
    }
  }
}

TEST_CASE("orthogonality both ways for q <= 60") {
  for (u64 q = 1; q <= 60; ++q) {
    const auto chars = character_group(q);
    const double phi = double(chars.size());
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::size_t j = 0; j < chars.size(); ++j) {
        cplx acc{};
        for (u64 n = 0; n < q; ++n) acc += chars[i](n) * chars[j].conj(n);
        REQUIRE(std::abs(acc - (i == j ? phi : 0.0)) < 1e-12);
      }
    }
    for (u64 a = 0; a < q; ++a) {
      if (arith::gcd(a, q) != 1) continue;
      for (u64 b = 0; b < q; ++b) {
        if (arith::gcd(b, q) != 1) continue;
        cplx acc{};
        for (const auto& chi : chars) acc += chi(a) * chi.conj(b);
        REQUIRE(std::abs(acc - (a == b ? phi : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("conductors and primitive parts") {
  const CharacterGroup g12(12);
  const auto r = conductor_and_primitive(g12.principal());
  CHECK(r.conductor == 1);
  CHECK(r.primitive.modulus() == 1);

  const auto chi9 = real_nonprincipal(9);
  // chi depends only on n mod 3 over units
  for (u64 n = 1; n < 9; ++n) {
    for (u64 m = 1; m < 9; ++m) {
      if (n % 3 == m % 3 && n % 3 != 0) CHECK(std::abs(chi9(n) - chi9(m)) < 1e-12);
    }
  }
  const auto r9 = conductor_and_primitive(chi9);
  CHECK(r9.conductor == 3);
  CHECK(r9.primitive.is_primitive());
  CHECK(std::abs(r9.primitive(2) - cplx{-1.0}) < 1e-12);

  const auto legendre7 = real_nonprincipal(7);
  CHECK(legendre7.conductor() == 7);
  CHECK(legendre7.is_primitive());
  CHECK(conductor_and_primitive(legendre7).primitive.same_values(legendre7));
}

TEST_CASE("induce") {
  const auto psi3 = real_nonprincipal(3);
  const auto chi = induce(psi3, 12);
  for (u64 n = 0; n < 12; ++n) {
    CHECK(chi(n) == (arith::gcd(n, 12) == 1 ? psi3(n) : cplx{}));
  }
  const auto trivial = character_group(1)[0];
  CHECK(induce(trivial, 20).same_values(CharacterGroup(20).principal()));
  CHECK(induce(trivial, 20).index() == 0);
  CHECK_THROWS_AS(induce(psi3, 10), DomainError);
}

TEST_CASE("every character is induced by its primitive part") {
  for (u64 q = 1; q <= 120; ++q) {
    for (const auto& chi : character_group(q)) {
      const auto r = conductor_and_primitive(chi);
      REQUIRE(q % r.conductor == 0);
      REQUIRE(r.primitive.is_primitive());
      REQUIRE(induce(r.primitive, q).same_values(chi));
    }
  }
}

TEST_CASE("Gauss coefficients") {
  const double target = std::sqrt(7.0) / 6.0;
  cplx rebuilt[7] = {};
  for (const auto& chi : character_group(7)) {
    const cplx g = gauss_g(chi);
    if (chi.is_principal()) {
      CHECK(std::abs(g - cplx{-1.0 / 6.0}) < 1e-12);
    } else {
      CHECK(std::abs(std::abs(g) - target) < 1e-12);
    }
    for (u64 n = 0; n < 7; ++n) rebuilt[n] += g * chi(n);
  }
  for (u64 n = 1; n < 7; ++n) CHECK(std::abs(rebuilt[n] - unit_phase(double(n) / 7.0)) < 1e-12);
  CHECK(std::abs(rebuilt[0]) < 1e-12);
}

TEST_CASE("group construction bound") {
  CHECK_THROWS_AS(CharacterGroup(2'000'000), ResourceError);
  CHECK_THROWS_AS(CharacterGroup(0), DomainError);
}
