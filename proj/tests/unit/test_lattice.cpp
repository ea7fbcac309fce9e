#include <doctest.h>

#include <cmath>
#include <random>

#include "lsieve/lattice.hpp"
#include "lsieve/weights.hpp"

using namespace lsieve;

TEST_CASE("modulus lattices") {
  const Lattice2 z2 = lattice_from_modulus({1, 0});
  CHECK(z2.covolume() == 1.0);
  CHECK(same_lattice(z2, Lattice2({1, 0}, {0, 1})));
  CHECK(lattice_from_modulus({1, 1}).covolume() == 2.0);
  const Lattice2 l = lattice_from_modulus({2, 1});
  CHECK(l.covolume() == 5.0);
  CHECK(l.b1() == Vec2{2, 1});
  CHECK(l.b2() == Vec2{-1, 2});
  REQUIRE(l.integer_basis().has_value());
  CHECK_THROWS_AS(Lattice2({1, 2}, {2, 4}), std::invalid_argument);
}

TEST_CASE("covolume equals the norm") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const GaussInt q{static_cast<Int>(rng() % 1415) - 707, static_cast<Int>(rng() % 1415) - 707};
    if (q.is_zero()) continue;
    CHECK(lattice_from_modulus(q).covolume() == static_cast<double>(norm(q)));
  }
}

TEST_CASE("dual lattices") {
  const Lattice2 z2({1, 0}, {0, 1});
  CHECK(same_lattice(dual(z2), z2));
  const Lattice2 l = lattice_from_modulus({2, 1});
  CHECK(same_lattice(dual(l), l.scaled(1.0 / 5.0)));
  CHECK(dual(l).covolume() == doctest::Approx(1.0 / 5.0));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Vec2 a{static_cast<double>(rng() % 9) - 4, static_cast<double>(rng() % 9) - 4};
    const Vec2 b{static_cast<double>(rng() % 9) - 4, static_cast<double>(rng() % 9) - 4};
    if (a[0] * b[1] - a[1] * b[0] == 0) continue;
    const Lattice2 lat(a, b);
    CHECK(same_lattice(dual(dual(lat)), lat));
  }
}

TEST_CASE("shortest vector and reduced basis") {
  const Lattice2 skew({1, 0}, {7, 1});
  CHECK(shortest_vector_length(skew) == doctest::Approx(1.0));
  const auto rb = reduced_basis(skew);
  CHECK(std::hypot(rb[1][0], rb[1][1]) == doctest::Approx(1.0));
  CHECK(shortest_vector_length(lattice_from_modulus({2, 1})) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("points_in_disk") {
  const ShiftedLattice z2{Lattice2({1, 0}, {0, 1}), {0, 0}};
  CHECK(points_in_disk(z2, 1.0).size() == 5);
  CHECK(points_in_disk(z2, 1.5).size() == 9);
  const auto pts = points_in_disk({lattice_from_modulus({2, 1}), {0, 0}}, 2.3);
  REQUIRE(pts.size() == 5);
  CHECK(pts[0] == Vec2{0, 0});
  for (std::size_t i = 1; i < 5; ++i) CHECK(pts[i][0] * pts[i][0] + pts[i][1] * pts[i][1] == doctest::Approx(5.0));
  // Ordered by norm then lexicographically.
  const auto many = points_in_disk(z2, 3.0);
  for (std::size_t i = 1; i < many.size(); ++i) {
    const double a = many[i - 1][0] * many[i - 1][0] + many[i - 1][1] * many[i - 1][1];
    const double b = many[i][0] * many[i][0] + many[i][1] * many[i][1];
    CHECK((a < b || (a == b && many[i - 1] < many[i])));
  }
}

TEST_CASE("points_in_disk matches the Gauss circle count") {
  const ShiftedLattice z2{Lattice2({1, 0}, {0, 1}), {0, 0}};
  for (double r = 0.0; r <= 50.0; r += 1.7) {
    std::size_t brute = 0;
    const int R = static_cast<int>(r) + 1;
    for (int x = -R; x <= R; ++x)
      for (int y = -R; y <= R; ++y)
        if (x * x + y * y <= r * r) ++brute;
    REQUIRE(points_in_disk(z2, r).size() == brute);
  }
}

TEST_CASE("shift periodicity of the point set") {
  const Lattice2 l = lattice_from_modulus({3, 2});
  const auto a = points_in_disk({l, {0.3, 0.7}}, 9.0);
  const auto b = points_in_disk({l, {0.3 + 3, 0.7 + 2}}, 9.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i][0] == doctest::Approx(b[i][0]));
    CHECK(a[i][1] == doctest::Approx(b[i][1]));
  }
}

TEST_CASE("poisson_two_sides") {
  const WeightFn g = psi1_weight();
  const PoissonSides self = poisson_two_sides(g, Lattice2({1, 0}, {0, 1}), {0, 0}, 1.0, 1e-12);
  CHECK(std::abs(self.lhs - self.rhs.real()) < 1e-12);
  CHECK(std::abs(self.rhs.imag()) < 1e-12);
  const PoissonSides s = poisson_two_sides(g, lattice_from_modulus({2, 1}), {0.3, 0.7}, 1.0, 1e-11);
  CHECK(s.discrepancy < 1e-10);
  const PoissonSides t = poisson_two_sides(g, lattice_from_modulus({2, 1}), {0.3 + 2, 0.7 + 1}, 1.0, 1e-11);
  CHECK(t.lhs == doctest::Approx(s.lhs).epsilon(1e-12));
  for (const GaussInt& q : {GaussInt{1, 0}, GaussInt{1, 1}, GaussInt{2, 0}, GaussInt{3, 2}})
    for (double B : {0.25, 1.0, 4.0})
      CHECK(poisson_two_sides(g, lattice_from_modulus(q), {0.1, -0.45}, B, 1e-11).discrepancy < 1e-10);
  WeightFn bare = custom_weight("bare", [](Vec2) { return 1.0; }, nullptr, std::nullopt, std::nullopt);
  CHECK_THROWS(poisson_two_sides(bare, Lattice2({1, 0}, {0, 1}), {0, 0}, 1.0, 1e-9));
}

TEST_CASE("fejer periodization") {
  const PeriodizationCheck c = fejer_periodization({0.1, 0.05}, 4.0, 1e-9);
  CHECK(c.discrepancy < 1e-6);
  CHECK(fejer_periodization_closed({0.5, 0.5}, 4.0) == 0.0);
}
