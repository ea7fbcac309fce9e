// Analytic weight functions on R^2 with their Fourier transforms.
//
// Transform convention: f_hat(x) = integral of f(y) e(-x.y) dy, with
// e(t) = exp(2 pi i t) and no further normalization.

#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "lsieve/gaussint.hpp"

namespace lsieve {

using Vec2 = std::array<double, 2>;

/// Majorant A * exp(-rate * |y - center|^2) of a function's modulus.
struct GaussianMajorant {
  Vec2 center{0.0, 0.0};
  double amplitude = 1.0;
  double rate = 1.0;

  double operator()(Vec2 y) const;

  /// Integral of the majorant over {|y - center| > radius}.
  double mass_outside(double radius) const;

  /// Upper bound for the sum of the majorant over any point set whose points
  /// are pairwise at least 2*packing apart, restricted to |y - center| > radius.
  /// Requires radius >= 2*packing.
  double lattice_tail(double radius, double packing) const;

  /// A radius with lattice_tail(radius, packing) < tol.
  double radius_for_lattice(double tol, double packing) const;
  /// A radius with mass_outside(radius) < tol.
  double radius_for_mass(double tol) const;
};

enum class WeightKind { fejer, psi1, psi2, g_square, g_k, custom };

struct WeightFn {
  WeightKind kind = WeightKind::custom;
  std::string name;
  std::function<double(Vec2)> value;
  /// Closed-form transform; empty when none is known.
  std::function<std::complex<double>(Vec2)> transform;
  std::optional<GaussianMajorant> majorant;
  std::optional<GaussianMajorant> transform_majorant;
  /// Certified upper bound on the mass of |value| outside the origin disk of a radius.
  std::function<double(double)> tail_bound;

  bool has_transform() const { return static_cast<bool>(transform); }
};

/// 2^(k-1).
int kappa(int k);

// Fejer-type product kernel: prod_k (sin(pi x_k) / (2 x_k))^2, dimension = x.size().
double fejer_1d(double x);
double fejer(std::span<const double> x);
double fejer_hat_1d(double s);
double fejer_hat(std::span<const double> s);

/// exp(-pi N(z)); its own transform.
double psi1(std::complex<double> z);

/// exp(-(pi/kappa) N(z)^(1/k)).
double psi2(int k, std::complex<double> z);

/// w^k by binomial expansion in the real and imaginary parts.
std::complex<double> complex_power(std::complex<double> w, int k);

/// Psi2(q^k / Q0^(k/2)) = exp(-(pi/kappa) N(q) / Q0), evaluated from the
/// exact norm of q.
double psi2_of_power(int k, GaussInt q, double Q0);

WeightFn fejer_weight();
WeightFn psi1_weight();
WeightFn psi2_weight(int k);

/// g(z) = Psi2(z^2) Psi2((alpha/sqrt(Q0) + z)^2) for k = 2, with the
/// completed-square closed-form transform.
WeightFn g_square_weight(GaussInt alpha, double Q0);

/// g(z) = prod over u in {0,1}^(k-1) of Psi2((z + u.alpha/sqrt(Q0))^k).
WeightFn g_k_weight(std::span<const GaussInt> alpha, int k, double Q0);

/// exp(-pi sum_v N(alpha_v) / (4 Q0)), the modulus of g_hat at the origin.
double g_prefactor(std::span<const GaussInt> alpha, double Q0);

/// prefactor * exp(-pi N(z)); dominates |g_hat(z)|.
double g_hat_bound(std::span<const GaussInt> alpha, double Q0, Vec2 z);

WeightFn custom_weight(std::string name, std::function<double(Vec2)> value,
                       std::function<std::complex<double>(Vec2)> transform,
                       std::optional<GaussianMajorant> majorant,
                       std::optional<GaussianMajorant> transform_majorant);

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature of the transform integral, total error below tol.
/// Throws QuadratureFailure when the error budget cannot be met.
std::complex<double> numeric_fourier(const WeightFn& weight, Vec2 point, double tol);

/// One-dimensional transform of fejer_1d at s by quadrature with an
/// explicit tail estimate.
double numeric_fourier_fejer_1d(double s, double tol);

/// Quadrature estimate of the mass of |weight| outside the origin disk.
double numeric_mass_outside(const WeightFn& weight, double radius, double tol);

}  // namespace lsieve
