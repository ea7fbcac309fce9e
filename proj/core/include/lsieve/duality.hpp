// Best constants of the two dual bilinear forms of a complex matrix C:
//   sum_m |sum_n c_mn a_n|^2 <= D sum |a_n|^2   and
//   sum_n |sum_m c_mn b_m|^2 <= D sum |b_m|^2.
// Both optimal D equal the squared spectral norm.

#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace lsieve {

/// Entries (2u1 - 1) + i (2u2 - 1), u = (x >> 11) * 2^-53 from mt19937_64(seed).
Eigen::MatrixXcd random_complex_matrix(int rows, int cols, std::uint64_t seed);

struct PowerIteration {
  double value;
  int iterations;
  bool converged;
};

/// Largest eigenvalue of the Hermitian positive semidefinite M^* M by power
/// iteration with Rayleigh quotients, from a seeded random start.
PowerIteration top_gram_eigenvalue(const Eigen::MatrixXcd& M, double rel_tol = 1e-15, int max_iter = 200000);

struct DualityCheck {
  double forward;      // best constant for a -> C a   (power iteration on C^* C)
  double backward;     // best constant for b -> C^T b (power iteration on C C^*)
  double svd_oracle;   // sigma_max^2 from JacobiSVD
  double discrepancy;  // max relative difference among the three
  bool converged;
};

DualityCheck duality_check(const Eigen::MatrixXcd& C);

}  // namespace lsieve
