// The smoothed exponential sums S_k(q1, r1, j), their Weyl-differenced and
// Poisson-transformed forms, the differencing polynomials and the
// small-fractional-part counts.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lsieve/gaussint.hpp"

namespace lsieve {

struct WeylConfig {
  int k = 2;
  double Q0 = 1.0;
  GaussInt q1{1, 0};
  GaussInt r1{1, 0};
  GaussInt j{1, 0};
  double truncation_tol = 1e-12;

  /// Throws std::invalid_argument unless k >= 2, Q0 / 2^(1/k) < N(q1) <= Q0,
  /// gcd(r1, q1) = 1 and the tolerance is positive.
  void validate() const;
  int kappa() const { return 1 << (k - 1); }
  GaussInt modulus() const { return pow(q1, static_cast<unsigned>(k)); }
};

struct TruncatedSum {
  std::complex<double> value;
  double tail_bound;  // certified bound on |exact - value|
  std::size_t terms;
};

/// sum_{q2} Psi2(q2^k / Q0^(k/2)) e(Re(j r1 q2^k / q1^k)), the weight being
/// exp(-(pi/kappa) N(q2) / Q0).
TruncatedSum S_direct(const WeylConfig& cfg);

/// sum_{q2} Psi2(q2^k / Q0^(k/2)).
TruncatedSum psi2_mass(int k, double Q0, double tol);

struct DifferencedSum {
  std::complex<double> value;
  double alpha_tail_bound;  // mass of the alpha terms beyond the cut
  double inner_tail_bound;  // omitted q (or beta) terms over all kept alpha
  double alpha_cut;         // N(alpha) <= alpha_cut kept
  std::size_t alpha_terms;
};

/// |S|^2 for k = 2 as
///   sum_alpha e(Re(j r1 alpha^2 / q1^2)) sum_q Psi2 Psi2 e(Re(2 j alpha r1 q / q1^2)).
/// alpha_cut <= 0 picks the cut from the tolerance.
DifferencedSum S2_squared_differenced(const WeylConfig& cfg, double alpha_cut = 0.0);

/// |S|^2 for k = 2 after Poisson summation in q:
///   Q0 sum_alpha e(Re(j r1 alpha^2 / q1^2)) sum_beta g_hat(sqrt(Q0) (beta - conj(2 j alpha r1 / q1^2))).
DifferencedSum S2_squared_poisson(const WeylConfig& cfg, double alpha_cut = 0.0);

/// sum over u in {0,1}^m of (-1)^(m-|u|) (q + u.alpha)^k, m = alpha.size() in [1, k-1].
GaussInt P_poly(int k, std::span<const GaussInt> alpha, GaussInt q);

/// 2 k! prod(alpha) q + k! prod(alpha) sum(alpha): twice the terminal
/// difference P_{1,alpha}(q); alpha.size() = k - 1.
GaussInt P_terminal_doubled(int k, std::span<const GaussInt> alpha, GaussInt q);

struct PowerBoundRhs {
  double rhs;            // Q0^(kappa - k + eps) * alpha_sum
  double alpha_sum;      // sum over the alpha grid of |inner sum|
  std::uint64_t cells;   // size of the alpha grid
  std::uint64_t evaluated;
  bool sampled;
  std::uint64_t seed;
  double inner_tail_bound;
};

/// Right-hand side of the iterated Weyl inequality for |S_k|^kappa with
/// alpha_v over N(alpha_v) <= Q0^(1+eps). Grids larger than max_cells are
/// sampled uniformly with mt19937_64(seed) and scaled up.
PowerBoundRhs Sk_power_bound_rhs(const WeylConfig& cfg, double eps, std::uint64_t max_cells = 200000,
                                 std::uint64_t seed = 1);

/// #{d != 0 : N(d) <= norm_limit, ||d r1 / q1^k|| <= delta}, tested exactly
/// against N(q1^k).
std::uint64_t count_small_fractional(GaussInt q1, GaussInt r1, int k, Int norm_limit, double delta);

struct ResidueDecomposition {
  std::uint64_t count;        // sum over l of #{d != 0 : N(d) <= L, d = l inv(r1) mod q1^k}
  std::uint64_t classes;      // #{l : |l / q1^k| <= delta}
  double bound;               // classes * (2 sqrt(L / N(q1^k)) + 1)^2
};

/// Counts through the residue classes l with |l| <= delta |q1^k|. Equals
/// count_small_fractional when delta < 1/2.
ResidueDecomposition count_small_fractional_by_residues(GaussInt q1, GaussInt r1, int k, Int norm_limit,
                                                        double delta);

}  // namespace lsieve
