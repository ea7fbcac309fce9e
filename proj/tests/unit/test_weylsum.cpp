#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lsieve/harness/commands.hpp"
#include "lsieve/weylsum.hpp"

using namespace lsieve;

namespace {

WeylConfig cfg(int k, double Q0, GaussInt q1, GaussInt r1, GaussInt j) {
  WeylConfig c;
  c.k = k;
  c.Q0 = Q0;
  c.q1 = q1;
  c.r1 = r1;
  c.j = j;
  return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Iterated difference of q^k in the listed directions, expanded term by term.
GaussInt brute_difference(int k, const std::vector<GaussInt>& alpha, GaussInt q) {
  GaussInt total{0, 0};
  const std::size_t m = alpha.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    GaussInt x = q;
    std::size_t bits = 0;
    for (std::size_t v = 0; v < m; ++v)
      if (mask >> v & 1) {
        x += alpha[v];
        ++bits;
      }
    const GaussInt t = pow(x, static_cast<unsigned>(k));
    total = (m - bits) % 2 == 0 ? total + t : total - t;
  }
  return total;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(cfg(2, 5, {2, 1}, {1, 0}, {1, 0}).validate());
  CHECK_THROWS(cfg(2, 5, {1, 1}, {1, 0}, {1, 0}).validate());   // N(q1) = 2 below the window
  CHECK_THROWS(cfg(2, 5, {2, 1}, {2, 1}, {1, 0}).validate());   // not coprime
  CHECK_THROWS(cfg(1, 5, {2, 1}, {1, 0}, {1, 0}).validate());
  CHECK(cfg(3, 5, {2, 1}, {1, 0}, {1, 0}).kappa() == 4);
}

TEST_CASE("S_direct frozen values") {
  const TruncatedSum s2 = S_direct(cfg(2, 5, {2, 1}, {1, 0}, {1, 0}));
  CHECK(s2.value.real() == doctest::Approx(2.1878213053266302).epsilon(1e-12));
  CHECK(std::abs(s2.value.imag()) < 1e-12);
  CHECK(std::norm(s2.value) == doctest::Approx(4.7865620640411198).epsilon(1e-12));
  const TruncatedSum s3 = S_direct(cfg(3, 5, {2, 1}, {1, 0}, {1, 0}));
  CHECK(s3.value.real() == doctest::Approx(8.5301010629349037).epsilon(1e-12));
  CHECK(s2.tail_bound < 1e-12);
}

TEST_CASE("psi2 mass") {
  CHECK(psi2_mass(2, 4, 1e-12).value.real() == doctest::Approx(8.0000000003891698).epsilon(1e-12));
  CHECK(psi2_mass(2, 16, 1e-12).value.real() == doctest::Approx(32.0).epsilon(1e-12));
  CHECK(psi2_mass(2, 64, 1e-12).value.real() == doctest::Approx(128.0).epsilon(1e-12));
  for (int k : {2, 3})
    for (double Q0 : {4.0, 16.0, 64.0}) {
      const double m = psi2_mass(k, Q0, 1e-12).value.real();
      CHECK(m >= 0.5 * Q0);
      CHECK(m <= 10 * Q0);
    }
}

TEST_CASE("S_direct trivial modulus and j = 0") {
  const WeylConfig unit = cfg(2, 1.2, {0, 1}, {1, 0}, {3, 1});
  CHECK(std::abs(S_direct(unit).value - psi2_mass(2, 1.2, 1e-12).value) < 1e-10);
  for (const WeylConfig& c : harness::weyl_cases(10)) {
    WeylConfig z = c;
    z.j = {0, 0};
    const double mass = psi2_mass(2, 10, 1e-12).value.real();
    CHECK(std::abs(S_direct(z).value - mass) < 1e-10);
    CHECK(std::abs(S_direct(c).value) <= mass + 1e-10);
    CHECK(S2_squared_differenced(z).value.real() == doctest::Approx(mass * mass).epsilon(1e-9));
  }
}

TEST_CASE("three-way identity, k = 2") {
  for (double Q0 : {5.0, 10.0})
    for (const WeylConfig& c : harness::weyl_cases(Q0)) {
      const double direct = std::norm(S_direct(c).value);
      const DifferencedSum d = S2_squared_differenced(c);
      const DifferencedSum p = S2_squared_poisson(c);
      CHECK(rel(direct, d.value.real()) < 1e-8);
      CHECK(rel(direct, p.value.real()) < 1e-8);
      CHECK(std::abs(d.value.imag()) < 1e-8 * direct + 1e-10);
    }
  const WeylConfig c = cfg(2, 5, {2, 1}, {1, 0}, {1, 0});
  CHECK(S2_squared_differenced(c).value.real() == doctest::Approx(4.7865620640411198).epsilon(1e-8));
  CHECK(S2_squared_poisson(c).value.real() == doctest::Approx(4.7865620640411198).epsilon(1e-8));
}

TEST_CASE("alpha cut tail is certified") {
  const WeylConfig c = cfg(2, 10, {3, 1}, {1, 0}, {1, 0});
  const double full = S2_squared_differenced(c).value.real();
  for (double cut : {10.0, 20.0, 40.0}) {
    const DifferencedSum d = S2_squared_differenced(c, cut);
    CHECK(std::abs(d.value.real() - full) <= d.alpha_tail_bound + d.inner_tail_bound + 1e-10);
    const DifferencedSum p = S2_squared_poisson(c, cut);
    CHECK(std::abs(p.value.real() - full) <= p.alpha_tail_bound + p.inner_tail_bound + 1e-10);
  }
}

TEST_CASE("P polynomials") {
  const std::vector<GaussInt> a1{{2, -1}};
  const GaussInt q{3, 4};
  CHECK(P_poly(2, a1, q) == a1[0] * a1[0] + GaussInt{2, 0} * a1[0] * q);
  // Leading coefficient for k = 3, two directions: P is linear in q with slope 6 a1 a2.
  const std::vector<GaussInt> a2{{1, 1}, {2, -3}};
  const GaussInt slope = P_poly(3, a2, {1, 0}) - P_poly(3, a2, {0, 0});
  CHECK(slope == GaussInt{6, 0} * a2[0] * a2[1]);
  std::mt19937_64 rng(21);
  const auto draw = [&] { return GaussInt{static_cast<Int>(rng() % 21) - 10, static_cast<Int>(rng() % 21) - 10}; };
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + trial % 4;
    const int depth = 1 + static_cast<int>(rng() % static_cast<unsigned>(k - 1));
    std::vector<GaussInt> alpha;
    for (int v = 0; v < depth; ++v) alpha.push_back(draw());
    const GaussInt x = draw();
    REQUIRE(P_poly(k, alpha, x) == brute_difference(k, alpha, x));
    if (depth == k - 1) REQUIRE(GaussInt{2, 0} * P_poly(k, alpha, x) == P_terminal_doubled(k, alpha, x));
  }
  CHECK_THROWS(P_poly(3, std::vector<GaussInt>{}, q));
  CHECK_THROWS(P_poly(3, std::vector<GaussInt>{{1, 0}, {1, 0}, {1, 0}}, q));
}

TEST_CASE("power bound right-hand side") {
  double worst2 = 0, worst3 = 0;
  for (double Q0 : {5.0, 10.0, 20.0})
    for (const WeylConfig& c : harness::weyl_cases(Q0)) {
      const double s2 = std::norm(S_direct(c).value);
      // k = 2 dominance with eps = 1/2.
      CHECK(s2 <= Sk_power_bound_rhs(c, 0.5).rhs);
      worst2 = std::max(worst2, s2 / Sk_power_bound_rhs(c, 0.0).rhs);
      WeylConfig c3 = c;
      c3.k = 3;
      if (static_cast<double>(norm(c3.q1)) <= Q0 / std::cbrt(2.0)) continue;
      const double s4 = std::pow(std::abs(S_direct(c3).value), 4);
      const PowerBoundRhs r = Sk_power_bound_rhs(c3, 0.0);
      CHECK_FALSE(r.sampled);
      worst3 = std::max(worst3, s4 / r.rhs);
    }
  // Recorded ceilings for |S|^kappa <= C * rhs at eps = 0.
  MESSAGE("k=2 worst ratio " << worst2 << ", k=3 worst ratio " << worst3);
  CHECK(worst2 <= 1.485);
  CHECK(worst3 <= 4.21);
}

TEST_CASE("power bound sampling is seeded") {
  const WeylConfig c = cfg(3, 5, {2, 1}, {1, 0}, {1, 0});
  const PowerBoundRhs a = Sk_power_bound_rhs(c, 0.0, 50, 7);
  const PowerBoundRhs b = Sk_power_bound_rhs(c, 0.0, 50, 7);
  CHECK(a.sampled);
  CHECK(a.seed == 7);
  CHECK(a.evaluated <= 50);
  CHECK(a.rhs == b.rhs);
  const PowerBoundRhs full = Sk_power_bound_rhs(c, 0.0);
  CHECK_FALSE(full.sampled);
  CHECK(full.evaluated == full.cells);
}

TEST_CASE("small fractional part counts") {
  const GaussInt q1{2, 1}, r1{1, 0};
  CHECK(count_small_fractional(q1, r1, 2, 200, 0.0) == 24);
  CHECK(count_small_fractional(q1, r1, 2, 200, 0.1) == 24);
  CHECK(count_small_fractional(q1, r1, 2, 200, 0.3) == 212);
  CHECK(count_small_fractional(q1, r1, 2, 200, 0.49) == 524);
  CHECK(count_small_fractional({1, 2}, {2, 1}, 3, 300, 0.2) == 160);
  // Covering radius: everything counts.
  const std::uint64_t all = disk_points(200).size() - 1;
  CHECK(count_small_fractional(q1, r1, 2, 200, std::sqrt(2.0) / 2) == all);
  // delta = 0 counts the nonzero multiples of q1^2.
  std::uint64_t mult = 0;
  for (const GaussInt& d : disk_points(200))
    if (!d.is_zero() && divides(pow(q1, 2), d)) ++mult;
  CHECK(count_small_fractional(q1, r1, 2, 200, 0.0) == mult);
}

TEST_CASE("small fractional counts are monotone") {
  const GaussInt q1{3, 2}, r1{2, 1};
  std::uint64_t prev = 0;
  for (double d = 0.0; d <= 0.75; d += 0.05) {
    const std::uint64_t c = count_small_fractional(q1, r1, 2, 400, d);
    CHECK(c >= prev);
    prev = c;
  }
  prev = 0;
  for (Int L = 0; L <= 600; L += 37) {
    const std::uint64_t c = count_small_fractional(q1, r1, 2, L, 0.2);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("residue decomposition") {
  for (double delta : {0.1, 0.3, 0.49}) {
    const ResidueDecomposition r = count_small_fractional_by_residues({2, 1}, {1, 0}, 2, 200, delta);
    CHECK(r.count == count_small_fractional({2, 1}, {1, 0}, 2, 200, delta));
    CHECK(static_cast<double>(r.count) <= r.bound);
  }
  const ResidueDecomposition r3 = count_small_fractional_by_residues({1, 2}, {2, 1}, 3, 300, 0.2);
  CHECK(r3.count == 160);
  CHECK(static_cast<double>(r3.count) <= r3.bound);
}
