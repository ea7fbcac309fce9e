#include <doctest.h>

#include <cmath>

#include "lsieve/spacing.hpp"

using namespace lsieve;

namespace {

ModuliFamily family(FamilyKind kind, double Q, int k = 1, RangeKind range = RangeKind::full) {
  ModuliFamily f;
  f.kind = kind;
  f.k = k;
  f.Q = Q;
  f.range = range;
  return f;
}

}  // namespace

TEST_CASE("Ratio") {
  const Ratio r(6, 4);
  CHECK(r.num == 3);
  CHECK(r.den == 2);
  CHECK(ratio_from_double(2.5).num == 5);
  CHECK(ratio_from_double(2.5).den == 2);
  CHECK(ratio_from_double(16).den == 1);
}

TEST_CASE("Farey points") {
  const auto pts = farey_points(family(FamilyKind::all, 2, 1, RangeKind::dyadic));
  CHECK(pts.size() == 4);
  for (const FareyPoint& p : pts) CHECK(norm(p.base) == 2);
  Int phi_sum = 0;
  const ModuliFamily f = family(FamilyKind::squares, 4);
  for (const Modulus& m : enumerate_moduli(f)) phi_sum += gaussian_phi(m.modulus);
  const auto sq = farey_points(f);
  CHECK(static_cast<Int>(sq.size()) == phi_sum);
  for (const FareyPoint& p : sq) {
    CHECK(coprime(p.r, p.base));
    // conj(r)/conj(q) = (num_x + i num_y)/N(q)
    const GaussInt w = conj(p.r) * p.modulus;
    CHECK(w.re == p.num_x);
    CHECK(w.im == p.num_y);
    CHECK(p.den == norm(p.modulus));
  }
}

TEST_CASE("K trivial cases") {
  const Modulus unit{{1, 0}, {1, 0}};
  const std::vector<FareyPoint> one{make_farey_point({0, 0}, unit)};
  CHECK(K_euclid(one, 5) == 1);
  CHECK(K_sup(one, 5) == 1);
  CHECK(K_norm(one, 5) == 1);
  const auto pts = farey_points(family(FamilyKind::all, 5));
  const long R = static_cast<long>(pts.size());
  CHECK(K_euclid(pts, 1) == R);
  CHECK(K_norm(pts, 1) == R);
  // The embedded points are not all distinct (associates coincide), so look at a
  // single copy of each modulus class for the large-N limit.
  ModuliFamily u = family(FamilyKind::all, 5);
  u.associates = Associates::up_to_units;
  const auto distinct = farey_points(u);
  CHECK(K_euclid(distinct, Ratio(1000000)) == 1);
}

TEST_CASE("boundary pair on the diagonal offset") {
  // Points 0 and 1/(1-i) = (1/2, 1/2) with N = 4: offset (N^-1/2, N^-1/2) exactly.
  const Modulus half{{1, 1}, {1, 1}};
  const std::vector<FareyPoint> p{make_farey_point({0, 0}, Modulus{{1, 0}, {1, 0}}), make_farey_point({1, 0}, half)};
  CHECK(p[1].embedding() == std::complex<double>(0.5, 0.5));
  CHECK(K_euclid(p, 4) == 2);
  CHECK(K_sup(p, 4) == 2);
  CHECK(K_euclid(p, 5) == 1);
}

TEST_CASE("distinct residues of one modulus never count once N > 2 N(q)") {
  for (const GaussInt& q : {GaussInt{1, 1}, GaussInt{2, 0}, GaussInt{2, 1}, GaussInt{1, 2}}) {
    const Modulus m{q, q};
    std::vector<FareyPoint> pts;
    for (const GaussInt& r : reduced_residues(m)) pts.push_back(make_farey_point(r, m));
    const Int N = 2 * norm(q) + 1;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) CHECK(norm_form_close(pts[i], pts[j], N) == (i == j));
  }
}

TEST_CASE("K formulations agree") {
  for (FamilyKind kind : {FamilyKind::all, FamilyKind::squares, FamilyKind::kth_power})
    for (double Q : {2.0, 3.0, 5.0})
      for (Int N : {4, 9, 16, 36, 64}) {
        const auto pts = farey_points(family(kind, Q, kind == FamilyKind::kth_power ? 3 : 1));
        const long ke = K_euclid(pts, N);
        CHECK(K_norm(pts, N) == ke);
        CHECK(K_sup(pts, N) <= ke);
        // Buckets need a cell side of at least the search radius sqrt(2/N) with three cells per axis.
        if (N < 18) {
          CHECK_THROWS_AS(K_euclid(pts, N, PairSearch::bucketed), std::invalid_argument);
          continue;
        }
        CHECK(K_euclid(pts, N, PairSearch::brute) == K_euclid(pts, N, PairSearch::bucketed));
        CHECK(K_sup(pts, N, PairSearch::brute) == K_sup(pts, N, PairSearch::bucketed));
        CHECK(K_norm(pts, N, PairSearch::brute) == K_norm(pts, N, PairSearch::bucketed));
        CHECK(euclid_neighbour_counts(pts, N, PairSearch::brute) ==
              euclid_neighbour_counts(pts, N, PairSearch::bucketed));
      }
}

TEST_CASE("K is invariant under changing residue representatives") {
  const ModuliFamily f = family(FamilyKind::squares, 4);
  const auto pts = farey_points(f);
  std::vector<FareyPoint> shifted;
  for (const FareyPoint& p : pts)
    shifted.push_back(make_farey_point(p.r + p.modulus * GaussInt{2, -3}, Modulus{p.base, p.modulus}));
  for (Int N : {4, 16, 64}) {
    CHECK(K_euclid(shifted, N) == K_euclid(pts, N));
    CHECK(K_norm(shifted, N) == K_norm(pts, N));
    CHECK(K_sup(shifted, N) == K_sup(pts, N));
  }
}

TEST_CASE("explicit large sieve check") {
  const auto pts = farey_points(family(FamilyKind::squares, 3));
  const LsCheck c = theorem_ls_check(pts, make_coefficients(CoeffKind::all_ones, 10));
  CHECK(pts.size() == 12);
  CHECK(c.K == 4);
  CHECK(c.T == doctest::Approx(5548.0).epsilon(1e-12));
  CHECK(c.ratio <= 1.0);
  const Modulus unit{{1, 0}, {1, 0}};
  const CoefficientSeq a = make_coefficients(CoeffKind::random, 20, 4);
  const LsCheck u = theorem_ls_check({make_farey_point({0, 0}, unit)}, a);
  CHECK(u.ratio <= 1.0);
  for (double Q : {2.0, 4.0, 6.0})
    for (double N : {4.0, 16.0, 64.0}) {
      const LsCheck r = theorem_ls_check(farey_points(family(FamilyKind::all, Q)),
                                         make_coefficients(CoeffKind::random, N, 9));
      CHECK(r.ratio <= 1.0);
    }
}

TEST_CASE("smoothed count: direct and Poisson forms agree") {
  const ModuliFamily f = family(FamilyKind::squares, 3);
  for (const auto& [r1, m1] : {std::pair<GaussInt, GaussInt>{{1, 0}, {0, 2}}, {{1, 2}, {3, 4}}}) {
    const double d = smoothed_K_direct(f, 16, r1, m1, 1e-12);
    const std::complex<double> p = smoothed_K_poisson(f, 16, r1, m1, 1e-12);
    CHECK(std::abs(d - p.real()) <= 1e-9 * d);
    CHECK(std::abs(p.imag()) <= 1e-9 * d);
  }
  CHECK(smoothed_K_constant(f) == doctest::Approx(std::exp(M_PI * 1.5)));
}
