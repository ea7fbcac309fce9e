// Rank-2 lattices in the plane, dual lattices, disk enumeration and
// truncated Poisson summation with certified tails.

#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "lsieve/gaussint.hpp"
#include "lsieve/weights.hpp"

namespace lsieve {

class Lattice2 {
 public:
  /// Throws std::invalid_argument when b1, b2 are linearly dependent.
  Lattice2(Vec2 b1, Vec2 b2);

  const Vec2& b1() const { return b1_; }
  const Vec2& b2() const { return b2_; }
  double covolume() const { return covolume_; }

  /// Exact integer basis when the lattice came from a Gaussian integer modulus.
  const std::optional<std::array<GaussInt, 2>>& integer_basis() const { return integer_basis_; }

  Lattice2 scaled(double factor) const;

 private:
  friend Lattice2 lattice_from_modulus(GaussInt q);
  Vec2 b1_;
  Vec2 b2_;
  double covolume_;
  std::optional<std::array<GaussInt, 2>> integer_basis_;
};

/// {x (u, v) + y (-v, u)} for q = u + iv; covolume N(q).
Lattice2 lattice_from_modulus(GaussInt q);

/// Lattice of vectors with integral inner product against every lattice vector.
Lattice2 dual(const Lattice2& lat);

/// Whether the two bases span the same lattice, up to coordinate rounding tol.
bool same_lattice(const Lattice2& a, const Lattice2& b, double tol = 1e-9);

/// Length of a shortest nonzero vector (Lagrange reduction).
double shortest_vector_length(const Lattice2& lat);

/// Lagrange-reduced basis of the same lattice.
std::array<Vec2, 2> reduced_basis(const Lattice2& lat);

struct ShiftedLattice {
  Lattice2 lattice;
  Vec2 shift{0.0, 0.0};
};

/// Points of shift + lattice with |p| <= radius, ordered by norm, then
/// lexicographically by coordinates.
std::vector<Vec2> points_in_disk(const ShiftedLattice& sl, double radius);

struct LatticeSum {
  std::complex<double> value;
  double tail_bound;   // certified bound on the omitted terms
  double radius;       // truncation radius about the majorant centre
  std::size_t terms;
};

/// sum over y in shift + lattice of f(y), f dominated by `majorant`; the
/// omitted terms sum to less than tol.
template <class F>
LatticeSum lattice_sum(F&& f, const ShiftedLattice& sl, const GaussianMajorant& majorant, double tol);

struct PoissonSides {
  double lhs;
  std::complex<double> rhs;
  double discrepancy;
  double lhs_tail;
  double rhs_tail;
};

/// Both sides of the shifted-lattice Poisson formula
///   sum_{y in a + L} f(y / B) = B^2 / covol(L) * sum_{x in L'} e(a.x) f_hat(B x),
/// each truncated with tail below tol / 2. Rejects weights lacking a closed
/// transform or Gaussian majorants.
PoissonSides poisson_two_sides(const WeightFn& weight, const Lattice2& lat, Vec2 a, double B, double tol);

struct PeriodizationCheck {
  double direct;
  double closed;
  double discrepancy;
  double tail_bound;
};

/// V(y) = sum_{n in Z^2} fejer(n / (2 sqrt N)) e(n.y) summed directly with a
/// certified tail, against (pi^4/4) N prod_k max(1 - 2 sqrt(N) ||y_k||, 0).
/// Throws QuadratureFailure when y sits too close to a kink of the tent.
PeriodizationCheck fejer_periodization(Vec2 y, double N, double tol);

double fejer_periodization_closed(Vec2 y, double N);

// ---------------------------------------------------------------------------

template <class F>
LatticeSum lattice_sum(F&& f, const ShiftedLattice& sl, const GaussianMajorant& majorant, double tol) {
  const double packing = shortest_vector_length(sl.lattice) / 2.0;
  const double radius = majorant.radius_for_lattice(tol, packing);
  // Enumerate around the majorant centre.
  const ShiftedLattice centred{sl.lattice, {sl.shift[0] - majorant.center[0], sl.shift[1] - majorant.center[1]}};
  LatticeSum out{{0.0, 0.0}, majorant.lattice_tail(radius, packing), radius, 0};
  for (const Vec2& p : points_in_disk(centred, radius)) {
    out.value += f(Vec2{p[0] + majorant.center[0], p[1] + majorant.center[1]});
    ++out.terms;
  }
  return out;
}

}  // namespace lsieve
