// Farey points on the torus and the spacing count K in its Euclidean,
// sup-norm and norm-form versions.

#pragma once

#include <complex>
#include <vector>

#include "lsieve/gaussint.hpp"
#include "lsieve/sieve.hpp"

namespace lsieve {

/// Positive rational num/den.
struct Ratio {
  Int num = 1;
  Int den = 1;

  Ratio() = default;
  Ratio(Int n) : num(n), den(1) {}  // NOLINT(google-explicit-constructor)
  Ratio(Int n, Int d);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// An exact rational from a double that is an integer or a short binary fraction.
Ratio ratio_from_double(double x);

/// r/q embedded at (Re(conj r / conj q), Im(conj r / conj q)) = (num_x, num_y) / den.
struct FareyPoint {
  GaussInt r;
  GaussInt base;
  GaussInt modulus;
  Int den;    // N(modulus)
  Int num_x;  // xu + yv
  Int num_y;  // xv - yu

  std::complex<double> embedding() const {
    return {static_cast<double>(num_x) / static_cast<double>(den), static_cast<double>(num_y) / static_cast<double>(den)};
  }
};

FareyPoint make_farey_point(GaussInt r, const Modulus& m);

/// Every (r, q) of the family with r a reduced residue mod the modulus.
std::vector<FareyPoint> farey_points(const ModuliFamily& family, const Budget& budget = {});

enum class PairSearch { automatic, brute, bucketed };

/// max_i #{j : torus distance^2 between points i, j <= 2/N}, exact.
long K_euclid(const std::vector<FareyPoint>& points, Ratio N, PairSearch search = PairSearch::automatic);

/// #{j : torus distance^2 between points i, j <= 2/N} for every i.
std::vector<long> euclid_neighbour_counts(const std::vector<FareyPoint>& points, Ratio N,
                                          PairSearch search = PairSearch::automatic);

/// max_i #{j : max over axes of the torus offset <= N^(-1/2)}, exact.
long K_sup(const std::vector<FareyPoint>& points, Ratio N, PairSearch search = PairSearch::automatic);

/// max_i #{j : min_z N * N(r_i q_j - r_j q_i - z q_i q_j) <= 2 N(q_i) N(q_j)}, exact.
long K_norm(const std::vector<FareyPoint>& points, Ratio N, PairSearch search = PairSearch::automatic);

/// Pair criterion of K_norm for two points.
bool norm_form_close(const FareyPoint& a, const FareyPoint& b, Ratio N);

struct LsCheck {
  double T;
  double bound;  // (pi^4/4) K_euclid N Z
  double ratio;
  long K;
};

/// T over exactly these points against (pi^4/4) K_euclid N Z, with N = a.N.
LsCheck theorem_ls_check(const std::vector<FareyPoint>& points, const CoefficientSeq& a);

/// The smoothed count at (r1, m1):
///   sum_{q2 in S} Psi2(q2 / sqrt(Qm)) sum_{b = r1 q2 mod m1} Psi1(b sqrt(N) / (|m1| sqrt(2 Qm)))
/// with Qm = Q^k the modulus norm bound, Psi1 = exp(-pi N(z)) and
/// Psi2(q'^k / sqrt(Qm)) = exp(-(pi/kappa) N(q') / Q). Truncated with total
/// omitted mass below tol.
double smoothed_K_direct(const ModuliFamily& family, double N, GaussInt r1, GaussInt m1, double tol);

/// The same quantity after Poisson summation in b:
///   (2 Qm / N) sum_j Psi1_hat(j sqrt(2 Qm / N)) sum_{q2} Psi2(q2 / sqrt(Qm)) e(Re(j r1 q2 / m1)).
std::complex<double> smoothed_K_poisson(const ModuliFamily& family, double N, GaussInt r1, GaussInt m1, double tol);

/// exp(pi (1 + 1/kappa)): K_euclid <= this times the largest smoothed count.
double smoothed_K_constant(const ModuliFamily& family);

}  // namespace lsieve
