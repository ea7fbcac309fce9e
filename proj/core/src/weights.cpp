#include "lsieve/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lsieve/phase.hpp"

namespace lsieve {

namespace {

constexpr double kPi = std::numbers::pi;
using boost::math::quadrature::gauss_kronrod;

double hypot2(Vec2 a) { return a[0] * a[0] + a[1] * a[1]; }

// exp(-pi sum N(alpha_v)/(4 Q0)) and the centre -sum(alpha)/(2 sqrt Q0).
struct CompletedSquare {
  double prefactor;
  Vec2 center;
  Vec2 shift_sum;  // sum of alpha_v as a real vector
};

CompletedSquare complete_square(std::span<const GaussInt> alpha, double Q0) {
  double norms = 0.0;
  Vec2 sum{0.0, 0.0};
  for (GaussInt a : alpha) {
    norms += static_cast<double>(norm_wide(a));
    sum[0] += static_cast<double>(a.re);
    sum[1] += static_cast<double>(a.im);
  }
  const double root = std::sqrt(Q0);
  return {std::exp(-kPi * norms / (4.0 * Q0)), {-sum[0] / (2.0 * root), -sum[1] / (2.0 * root)}, sum};
}

GaussianMajorant standard_gaussian(double amplitude) { return {{0.0, 0.0}, amplitude, kPi}; }

std::function<double(double)> tail_from(const GaussianMajorant& m) {
  const double offset = std::sqrt(hypot2(m.center));
  return [m, offset](double radius) { return m.mass_outside(std::max(radius - offset, 0.0)); };
}

}  // namespace

double GaussianMajorant::operator()(Vec2 y) const {
  const Vec2 d{y[0] - center[0], y[1] - center[1]};
  return amplitude * std::exp(-rate * hypot2(d));
}

double GaussianMajorant::mass_outside(double radius) const {
  radius = std::max(radius, 0.0);
  return amplitude * (kPi / rate) * std::exp(-rate * radius * radius);
}

double GaussianMajorant::lattice_tail(double radius, double packing) const {
  // Disks of radius `packing` around the points are disjoint and the
  // majorant is radially decreasing, so each point is dominated by the
  // average of h(|x| - packing) over its disk.
  if (radius < 2.0 * packing) throw std::invalid_argument("lattice_tail: radius below twice the packing radius");
  const double t = radius - 2.0 * packing;
  const double sc = std::sqrt(rate);
  const double moment1 = std::exp(-rate * t * t) / (2.0 * rate);
  const double moment0 = std::sqrt(kPi) / (2.0 * sc) * std::erfc(sc * t);
  return 2.0 * amplitude / (packing * packing) * (moment1 + packing * moment0);
}

double GaussianMajorant::radius_for_lattice(double tol, double packing) const {
  if (!(tol > 0.0)) throw std::invalid_argument("radius_for_lattice: tolerance must be positive");
  double lo = 2.0 * packing;
  if (lattice_tail(lo, packing) < tol) return lo;
  double hi = lo + 1.0 / std::sqrt(rate);
  while (lattice_tail(hi, packing) >= tol) hi = lo + 2.0 * (hi - lo);
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (lattice_tail(mid, packing) < tol ? hi : lo) = mid;
  }
  return hi;
}

double GaussianMajorant::radius_for_mass(double tol) const {
  if (!(tol > 0.0)) throw std::invalid_argument("radius_for_mass: tolerance must be positive");
  const double total = amplitude * kPi / rate;
  if (total < tol) return 0.0;
  return std::sqrt(std::log(total / tol) / rate);
}

int kappa(int k) {
  if (k < 1 || k > 30) throw std::invalid_argument("kappa: k out of range");
  return 1 << (k - 1);
}

double fejer_1d(double x) {
  const double u = kPi * x;
  if (std::abs(u) < 1e-4) {
    const double base = kPi / 2.0;
    return base * base * (1.0 - u * u / 3.0);
  }
  const double v = std::sin(u) / (2.0 * x);
  return v * v;
}

double fejer(std::span<const double> x) {
  double p = 1.0;
  for (double xk : x) p *= fejer_1d(xk);
  return p;
}

double fejer_hat_1d(double s) { return kPi * kPi / 4.0 * std::max(1.0 - std::abs(s), 0.0); }

double fejer_hat(std::span<const double> s) {
  double p = 1.0;
  for (double sk : s) p *= fejer_hat_1d(sk);
  return p;
}

double psi1(std::complex<double> z) { return std::exp(-kPi * std::norm(z)); }

double psi2(int k, std::complex<double> z) {
  return std::exp(-kPi / kappa(k) * std::pow(std::norm(z), 1.0 / k));
}

std::complex<double> complex_power(std::complex<double> w, int k) {
  if (k < 0) throw std::invalid_argument("complex_power: negative exponent");
  // sum_j C(k, j) x^(k-j) (i y)^j
  const double x = w.real(), y = w.imag();
  double re = 0.0, im = 0.0, binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    const double term = binom * std::pow(x, k - j) * std::pow(y, j);
    switch (j % 4) {
      case 0: re += term; break;
      case 1: im += term; break;
      case 2: re -= term; break;
      default: im -= term; break;
    }
    binom = binom * (k - j) / (j + 1);
  }
  return {re, im};
}

double psi2_of_power(int k, GaussInt q, double Q0) {
  return std::exp(-kPi / kappa(k) * static_cast<double>(norm_wide(q)) / Q0);
}

WeightFn fejer_weight() {
  WeightFn w;
  w.kind = WeightKind::fejer;
  w.name = "fejer(2)";
  w.value = [](Vec2 x) { return fejer(x); };
  w.transform = [](Vec2 s) { return std::complex<double>(fejer_hat(s), 0.0); };
  // Outside the disk of radius R some coordinate exceeds R/sqrt(2); the 1D
  // mass beyond s is at most 1/(2s) and the full 1D mass is pi^2/4.
  w.tail_bound = [](double radius) {
    if (radius <= 0.0) return kPi * kPi * kPi * kPi / 16.0;
    const double s = radius / std::sqrt(2.0);
    return std::min(2.0 * (1.0 / (2.0 * s)) * (kPi * kPi / 4.0), kPi * kPi * kPi * kPi / 16.0);
  };
  return w;
}

WeightFn psi1_weight() {
  WeightFn w;
  w.kind = WeightKind::psi1;
  w.name = "psi1";
  w.value = [](Vec2 z) { return psi1({z[0], z[1]}); };
  w.transform = [](Vec2 z) { return std::complex<double>(psi1({z[0], z[1]}), 0.0); };
  w.majorant = standard_gaussian(1.0);
  w.transform_majorant = standard_gaussian(1.0);
  w.tail_bound = tail_from(*w.majorant);
  return w;
}

WeightFn psi2_weight(int k) {
  WeightFn w;
  w.kind = WeightKind::psi2;
  w.name = "psi2(" + std::to_string(k) + ")";
  w.value = [k](Vec2 z) { return psi2(k, {z[0], z[1]}); };
  if (k == 1) {
    // exp(-pi N(z)): the standard Gaussian.
    w.transform = [](Vec2 z) { return std::complex<double>(psi1({z[0], z[1]}), 0.0); };
    w.majorant = standard_gaussian(1.0);
    w.transform_majorant = standard_gaussian(1.0);
    w.tail_bound = tail_from(*w.majorant);
  } else {
    // exp(-c r^(2/k)) with c = pi/kappa: mass outside R is
    // 2 pi int_R^inf exp(-c r^(2/k)) r dr = pi k c^(-k) Gamma(k, c R^(2/k)).
    const double c = kPi / kappa(k);
    w.tail_bound = [k, c](double radius) {
      const double u = c * std::pow(std::max(radius, 0.0), 2.0 / k);
      // Upper incomplete gamma for integer k: (k-1)! e^-u sum_{j<k} u^j/j!
      double term = 1.0, sum = 0.0, fact = 1.0;
      for (int j = 0; j < k; ++j) {
        sum += term;
        term *= u / (j + 1);
        if (j > 0) fact *= j;
      }
      return kPi * k * std::pow(c, -k) * fact * std::exp(-u) * sum;
    };
  }
  return w;
}

WeightFn g_square_weight(GaussInt alpha, double Q0) {
  if (!(Q0 > 0.0)) throw std::invalid_argument("g_square_weight: Q0 must be positive");
  const GaussInt alphas[] = {alpha};
  const CompletedSquare cs = complete_square(alphas, Q0);
  const double root = std::sqrt(Q0);
  const std::complex<double> shift(static_cast<double>(alpha.re) / root, static_cast<double>(alpha.im) / root);

  WeightFn w;
  w.kind = WeightKind::g_square;
  w.name = "g_square";
  w.value = [shift](Vec2 z) {
    const std::complex<double> zc(z[0], z[1]);
    return psi2(2, complex_power(zc, 2)) * psi2(2, complex_power(shift + zc, 2));
  };
  w.transform = [cs, root](Vec2 x) {
    const double phase = (cs.shift_sum[0] * x[0] + cs.shift_sum[1] * x[1]) / (2.0 * root);
    return cs.prefactor * e(phase) * std::exp(-kPi * hypot2(x));
  };
  w.majorant = GaussianMajorant{cs.center, cs.prefactor, kPi};
  w.transform_majorant = standard_gaussian(cs.prefactor);
  w.tail_bound = tail_from(*w.majorant);
  return w;
}

WeightFn g_k_weight(std::span<const GaussInt> alpha, int k, double Q0) {
  if (k < 2) throw std::invalid_argument("g_k_weight: k must be at least 2");
  if (!(Q0 > 0.0)) throw std::invalid_argument("g_k_weight: Q0 must be positive");
  if (alpha.size() != static_cast<std::size_t>(k - 1))
    throw std::invalid_argument("g_k_weight: alpha must have k - 1 entries");
  const CompletedSquare cs = complete_square(alpha, Q0);
  const double root = std::sqrt(Q0);

  // All 2^(k-1) shifts u.alpha / sqrt(Q0).
  std::vector<std::complex<double>> shifts;
  const unsigned corners = 1u << (k - 1);
  for (unsigned u = 0; u < corners; ++u) {
    std::complex<double> s(0.0, 0.0);
    for (int v = 0; v < k - 1; ++v)
      if (u & (1u << v)) s += std::complex<double>(static_cast<double>(alpha[v].re), static_cast<double>(alpha[v].im));
    shifts.push_back(s / root);
  }

  WeightFn w;
  w.kind = WeightKind::g_k;
  w.name = "g_k(" + std::to_string(k) + ")";
  w.value = [shifts, k](Vec2 z) {
    const std::complex<double> zc(z[0], z[1]);
    double p = 1.0;
    for (const auto& s : shifts) p *= psi2(k, complex_power(zc + s, k));
    return p;
  };
  w.transform = [cs, root](Vec2 x) {
    const double phase = (cs.shift_sum[0] * x[0] + cs.shift_sum[1] * x[1]) / (2.0 * root);
    return cs.prefactor * e(phase) * std::exp(-kPi * hypot2(x));
  };
  w.majorant = GaussianMajorant{cs.center, cs.prefactor, kPi};
  w.transform_majorant = standard_gaussian(cs.prefactor);
  w.tail_bound = tail_from(*w.majorant);
  return w;
}

double g_prefactor(std::span<const GaussInt> alpha, double Q0) { return complete_square(alpha, Q0).prefactor; }

double g_hat_bound(std::span<const GaussInt> alpha, double Q0, Vec2 z) {
  return g_prefactor(alpha, Q0) * std::exp(-kPi * hypot2(z));
}

WeightFn custom_weight(std::string name, std::function<double(Vec2)> value,
                       std::function<std::complex<double>(Vec2)> transform,
                       std::optional<GaussianMajorant> majorant,
                       std::optional<GaussianMajorant> transform_majorant) {
  WeightFn w;
  w.kind = WeightKind::custom;
  w.name = std::move(name);
  w.value = std::move(value);
  w.transform = std::move(transform);
  w.majorant = majorant;
  w.transform_majorant = transform_majorant;
  if (majorant) w.tail_bound = tail_from(*majorant);
  return w;
}

double numeric_fourier_fejer_1d(double s, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("numeric_fourier_fejer_1d: tolerance must be positive");
  // The even integrand is 2 * int_0^inf fejer_1d(x) cos(2 pi s x) dx. Beyond R
  // it splits as sum_i c_i cos(w_i x) / x^2. Zero frequencies integrate to
  // c_i / R exactly; for the others two integrations by parts give
  // -sin(wR)/(wR^2) + 2 cos(wR)/(w^2 R^3) with remainder at most 2/(w^2 R^3).
  const double coef[3] = {1.0 / 8.0, -1.0 / 16.0, -1.0 / 16.0};
  const double freq[3] = {2.0 * kPi * std::abs(s), 2.0 * kPi * std::abs(1.0 + s), 2.0 * kPi * std::abs(1.0 - s)};
  double remainder = 0.0;
  for (int i = 0; i < 3; ++i)
    if (freq[i] != 0.0) remainder += 2.0 * std::abs(coef[i]) / (freq[i] * freq[i]);
  // 2 * remainder / R^3 <= tol / 2
  double radius = std::ceil(std::cbrt(4.0 * remainder / tol));
  radius = std::max(radius, 8.0);
  if (radius > 2.0e6) throw QuadratureFailure("fejer transform: frequency too close to a zero of the tail expansion");

  const auto integrand = [s](double x) { return fejer_1d(x) * std::cos(2.0 * kPi * s * x); };
  const auto cells = static_cast<long>(radius);
  double body = 0.0;
  double err_sum = 0.0;
  for (long n = 0; n < cells; ++n) {
    double err = 0.0;
    body += gauss_kronrod<double, 31>::integrate(integrand, static_cast<double>(n), static_cast<double>(n + 1), 3,
                                                 1e-15, &err);
    err_sum += err;
  }
  if (2.0 * err_sum > tol / 2.0) throw QuadratureFailure("fejer transform: interval quadrature did not converge");
  double tail = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double w = freq[i];
    if (w == 0.0)
      tail += coef[i] / radius;
    else
      tail += coef[i] * (-std::sin(w * radius) / (w * radius * radius) +
                         2.0 * std::cos(w * radius) / (w * w * radius * radius * radius));
  }
  return 2.0 * (body + tail);
}

std::complex<double> numeric_fourier(const WeightFn& weight, Vec2 point, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("numeric_fourier: tolerance must be positive");
  if (weight.kind == WeightKind::fejer) {
    // Separable: the 2D transform is the product of 1D transforms.
    const double mass = kPi * kPi / 4.0;
    const double t1 = tol / (2.0 * (mass + 1.0));
    return {numeric_fourier_fejer_1d(point[0], t1) * numeric_fourier_fejer_1d(point[1], t1), 0.0};
  }
  if (!weight.majorant) throw QuadratureFailure("numeric_fourier: weight has no certified tail majorant");

  const GaussianMajorant& m = *weight.majorant;
  const double half = m.radius_for_mass(tol / 4.0);
  const double x0 = m.center[0] - half, x1 = m.center[0] + half;
  const double y0 = m.center[1] - half, y1 = m.center[1] + half;
  const double side = 2.0 * half;

  double worst_inner = 0.0;
  const auto inner = [&](double ya) {
    double err = 0.0;
    const auto f = [&](double yb) {
      return weight.value({ya, yb}) * e(-(point[0] * ya + point[1] * yb));
    };
    std::complex<double> v = gauss_kronrod<double, 31>::integrate(f, y0, y1, 12, 1e-13, &err);
    worst_inner = std::max(worst_inner, err);
    return v;
  };
  double outer_err = 0.0;
  std::complex<double> result = gauss_kronrod<double, 31>::integrate(inner, x0, x1, 12, 1e-13, &outer_err);
  const double total_err = outer_err + worst_inner * side;
  if (!(total_err < tol * 0.75))
    throw QuadratureFailure("numeric_fourier: quadrature error estimate exceeds the budget");
  return result;
}

double numeric_mass_outside(const WeightFn& weight, double radius, double tol) {
  if (weight.kind == WeightKind::fejer) {
    // Total mass (pi^2/4)^2 minus the polar integral over the disk.
    const double total = std::pow(kPi * kPi / 4.0, 2);
    if (radius <= 0.0) return total;
    const auto ring = [&](double r) {
      const auto f = [&](double th) { return weight.value({r * std::cos(th), r * std::sin(th)}); };
      return r * gauss_kronrod<double, 31>::integrate(f, 0.0, 2.0 * kPi, 10, 1e-12);
    };
    double inside = 0.0;
    const auto steps = static_cast<long>(std::ceil(radius));
    for (long n = 0; n < steps; ++n) {
      const double a = radius * static_cast<double>(n) / static_cast<double>(steps);
      const double b = radius * static_cast<double>(n + 1) / static_cast<double>(steps);
      inside += gauss_kronrod<double, 31>::integrate(ring, a, b, 8, 1e-12);
    }
    return total - inside;
  }
  if (!weight.tail_bound) throw QuadratureFailure("numeric_mass_outside: weight has no certified tail bound");
  radius = std::max(radius, 0.0);
  double outer = std::max(radius, 1.0);
  while (weight.tail_bound(outer) >= tol / 2.0) {
    outer *= 2.0;
    if (outer > 1e6) throw QuadratureFailure("numeric_mass_outside: tail bound does not decay");
  }
  if (radius >= outer) return 0.0;
  const auto ring = [&](double r) {
    const auto f = [&](double th) { return std::abs(weight.value({r * std::cos(th), r * std::sin(th)})); };
    return r * gauss_kronrod<double, 31>::integrate(f, 0.0, 2.0 * kPi, 10, 1e-12);
  };
  double mass = 0.0;
  const auto steps = static_cast<long>(std::ceil(outer - radius));
  for (long n = 0; n < steps; ++n) {
    const double a = radius + (outer - radius) * static_cast<double>(n) / static_cast<double>(steps);
    const double b = radius + (outer - radius) * static_cast<double>(n + 1) / static_cast<double>(steps);
    mass += gauss_kronrod<double, 31>::integrate(ring, a, b, 10, 1e-12);
  }
  return mass;
}

}  // namespace lsieve
