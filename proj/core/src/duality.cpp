#include "lsieve/duality.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace lsieve {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

Eigen::MatrixXcd random_complex_matrix(int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("random_complex_matrix: empty shape");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = 2.0 * unit_uniform(rng) - 1.0;
      const double im = 2.0 * unit_uniform(rng) - 1.0;
      m(r, c) = {re, im};
    }
  return m;
}

PowerIteration top_gram_eigenvalue(const Eigen::MatrixXcd& M, double rel_tol, int max_iter) {
  if (M.size() == 0) throw std::invalid_argument("top_gram_eigenvalue: empty matrix");
  const Eigen::MatrixXcd G = M.adjoint() * M;
  // A random start has a nonzero component along the top eigenvector almost surely,
  // which a fixed vector like all-ones can miss for rank-one inputs.
  Eigen::VectorXcd v = random_complex_matrix(static_cast<int>(G.rows()), 1, 0x5eedULL).col(0);
  v.normalize();
  double lambda = 0.0;
  int stable = 0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXcd w = G * v;
    const double next = v.dot(w).real();
    const double nw = w.norm();
    if (nw == 0.0) return {0.0, it, true};
    v = w / nw;
    if (std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      if (++stable >= 3) return {next, it, true};
    } else {
      stable = 0;
    }
    lambda = next;
  }
  return {lambda, max_iter, false};
}

DualityCheck duality_check(const Eigen::MatrixXcd& C) {
  const PowerIteration fwd = top_gram_eigenvalue(C);
  const PowerIteration bwd = top_gram_eigenvalue(C.transpose());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(C);
  const double sigma = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  const double oracle = sigma * sigma;
  const double disc = std::max({rel_diff(fwd.value, bwd.value), rel_diff(fwd.value, oracle), rel_diff(bwd.value, oracle)});
  return {fwd.value, bwd.value, oracle, disc, fwd.converged && bwd.converged};
}

}  // namespace lsieve
