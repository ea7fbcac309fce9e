#include <doctest.h>

#include <cmath>

#include "lsieve/duality.hpp"

using namespace lsieve;

TEST_CASE("1x1 matrix") {
  Eigen::MatrixXcd c(1, 1);
  c(0, 0) = {3.0, -4.0};
  const DualityCheck d = duality_check(c);
  CHECK(d.forward == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(d.backward == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(d.converged);
}

TEST_CASE("rank-1 matrix equals the squared Frobenius norm") {
  const Eigen::VectorXcd u = random_complex_matrix(5, 1, 3).col(0);
  const Eigen::VectorXcd v = random_complex_matrix(7, 1, 4).col(0);
  const Eigen::MatrixXcd c = u * v.adjoint();
  const DualityCheck d = duality_check(c);
  const double fro = c.squaredNorm();
  CHECK(d.forward == doctest::Approx(fro).epsilon(1e-10));
  CHECK(d.backward == doctest::Approx(fro).epsilon(1e-10));
}

TEST_CASE("random matrices") {
  for (int i = 0; i < 10; ++i) {
    const DualityCheck d = duality_check(random_complex_matrix(1 + i % 8, 3 + i, static_cast<std::uint64_t>(i)));
    CHECK(d.converged);
    CHECK(d.discrepancy < 1e-9);
  }
}

TEST_CASE("random_complex_matrix is reproducible and bounded") {
  const Eigen::MatrixXcd a = random_complex_matrix(4, 6, 99);
  CHECK(a == random_complex_matrix(4, 6, 99));
  CHECK(a != random_complex_matrix(4, 6, 100));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      CHECK(std::abs(a(i, j).real()) <= 1.0);
      CHECK(std::abs(a(i, j).imag()) <= 1.0);
    }
}
