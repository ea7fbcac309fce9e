#include "lsieve/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/trigamma.hpp>

#include "lsieve/phase.hpp"

namespace lsieve {

namespace {

constexpr double kPi = std::numbers::pi;

double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
double det(Vec2 a, Vec2 b) { return a[0] * b[1] - a[1] * b[0]; }

// Coordinates of p in the basis (b1, b2).
Vec2 coordinates(const Lattice2& lat, Vec2 p) {
  const double d = det(lat.b1(), lat.b2());
  return {det(p, lat.b2()) / d, det(lat.b1(), p) / d};
}

bool contains(const Lattice2& lat, Vec2 p, double tol) {
  const Vec2 c = coordinates(lat, p);
  return std::abs(c[0] - std::round(c[0])) <= tol && std::abs(c[1] - std::round(c[1])) <= tol;
}

// Sum over n > R of cos(2 pi f n) / n^2. When f is an integer this is
// trigamma(R + 1), added exactly; otherwise only a bound is available:
// min(1/R, 1/((R+1)^2 |sin(pi f)|)) by Abel summation.
struct CosineTail {
  double exact = 0.0;
  double bound = 0.0;
};

CosineTail cosine_tail(double f, long R) {
  if (f == std::round(f)) return {boost::math::trigamma(static_cast<double>(R) + 1.0), 0.0};
  const double r1 = static_cast<double>(R) + 1.0;
  const double s = std::abs(std::sin(kPi * f));
  return {0.0, std::min(1.0 / static_cast<double>(R), 1.0 / (r1 * r1 * s))};
}

struct OneDim {
  double value;
  double tail;
};

// sum_{n in Z} fejer_1d(n / (2M)) e(n y). With sin^2 = (1 - cos)/2 the tail
// beyond R is (M^2/2) [C(y) - C(y + 1/(2M))/2 - C(y - 1/(2M))/2], C as above.
OneDim fejer_periodization_1d(double y, double M, double tol) {
  const double freqs[3] = {y, y + 1.0 / (2.0 * M), y - 1.0 / (2.0 * M)};
  const double weights[3] = {1.0, -0.5, -0.5};
  const auto tail = [&](long R) {
    CosineTail total;
    for (int i = 0; i < 3; ++i) {
      const CosineTail c = cosine_tail(freqs[i], R);
      total.exact += 0.5 * M * M * weights[i] * c.exact;
      total.bound += 0.5 * M * M * std::abs(weights[i]) * c.bound;
    }
    return total;
  };
  long R = 64;
  while (tail(R).bound >= tol) {
    R *= 2;
    if (R > (1L << 24)) throw QuadratureFailure("fejer periodization: y too close to a kink of the tent");
  }
  const double a = 2.0 * kPi * y;
  double sum = 0.0;
  for (long n = R; n >= 1; --n) {
    const double nd = static_cast<double>(n);
    sum += fejer_1d(nd / (2.0 * M)) * std::cos(a * nd);
  }
  const CosineTail t = tail(R);
  return {fejer_1d(0.0) + 2.0 * (sum + t.exact), 2.0 * t.bound};
}

double tent_1d(double y, double M) {
  const double dist = std::abs(y - std::round(y));
  return kPi * kPi / 2.0 * M * std::max(1.0 - 2.0 * M * dist, 0.0);
}

}  // namespace

Lattice2::Lattice2(Vec2 b1, Vec2 b2) : b1_(b1), b2_(b2), covolume_(std::abs(det(b1, b2))) {
  if (!std::isfinite(covolume_) || covolume_ == 0.0)
    throw std::invalid_argument("Lattice2: basis vectors are linearly dependent");
  const double scale = std::sqrt(dot(b1, b1) * dot(b2, b2));
  if (covolume_ <= 1e-13 * scale) throw std::invalid_argument("Lattice2: basis is numerically degenerate");
}

Lattice2 Lattice2::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("Lattice2::scaled: factor must be positive");
  return Lattice2({b1_[0] * factor, b1_[1] * factor}, {b2_[0] * factor, b2_[1] * factor});
}

Lattice2 lattice_from_modulus(GaussInt q) {
  if (q.is_zero()) throw std::invalid_argument("lattice_from_modulus: zero modulus");
  const auto u = static_cast<double>(q.re), v = static_cast<double>(q.im);
  Lattice2 lat({u, v}, {-v, u});
  lat.covolume_ = static_cast<double>(norm_wide(q));
  lat.integer_basis_ = std::array<GaussInt, 2>{q, kI * q};
  return lat;
}

Lattice2 dual(const Lattice2& lat) {
  // Rows of the inverse basis matrix.
  const Vec2 b1 = lat.b1(), b2 = lat.b2();
  const double d = det(b1, b2);
  return Lattice2({b2[1] / d, -b2[0] / d}, {-b1[1] / d, b1[0] / d});
}

bool same_lattice(const Lattice2& a, const Lattice2& b, double tol) {
  if (std::abs(a.covolume() - b.covolume()) > tol * std::max(a.covolume(), b.covolume())) return false;
  return contains(a, b.b1(), tol) && contains(a, b.b2(), tol) && contains(b, a.b1(), tol) &&
         contains(b, a.b2(), tol);
}

std::array<Vec2, 2> reduced_basis(const Lattice2& lat) {
  Vec2 u = lat.b1(), v = lat.b2();
  if (dot(u, u) > dot(v, v)) std::swap(u, v);
  for (int it = 0; it < 200; ++it) {
    const double mu = std::round(dot(u, v) / dot(u, u));
    v = {v[0] - mu * u[0], v[1] - mu * u[1]};
    if (dot(v, v) >= dot(u, u)) break;
    std::swap(u, v);
  }
  return {u, v};
}

double shortest_vector_length(const Lattice2& lat) {
  const auto basis = reduced_basis(lat);
  return std::sqrt(dot(basis[0], basis[0]));
}

std::vector<Vec2> points_in_disk(const ShiftedLattice& sl, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("points_in_disk: negative radius");
  const auto [u, v] = reduced_basis(sl.lattice);
  const Vec2 a = sl.shift;
  const double uu = dot(u, u);
  const double uu_root = std::sqrt(uu);
  // Signed height of v and of the shift perpendicular to u.
  const double h = det(u, v) / uu_root;
  const double a_perp = det(u, a) / uu_root;
  const double r2 = radius * radius;

  long y0 = static_cast<long>(std::floor((-radius - a_perp) / h));
  long y1 = static_cast<long>(std::ceil((radius - a_perp) / h));
  if (y0 > y1) std::swap(y0, y1);

  std::vector<Vec2> out;
  for (long y = y0; y <= y1; ++y) {
    const double yd = static_cast<double>(y);
    const Vec2 base{a[0] + yd * v[0], a[1] + yd * v[1]};
    const double centre = -dot(base, u) / uu;
    const double half = radius / uu_root;
    const auto x0 = static_cast<long>(std::floor(centre - half)) - 1;
    const auto x1 = static_cast<long>(std::ceil(centre + half)) + 1;
    for (long x = x0; x <= x1; ++x) {
      const double xd = static_cast<double>(x);
      const Vec2 p{base[0] + xd * u[0], base[1] + xd * u[1]};
      if (dot(p, p) <= r2) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), [](const Vec2& p, const Vec2& q) {
    const double np = dot(p, p), nq = dot(q, q);
    if (np != nq) return np < nq;
    return p < q;
  });
  return out;
}

PoissonSides poisson_two_sides(const WeightFn& weight, const Lattice2& lat, Vec2 a, double B, double tol) {
  if (!weight.has_transform()) throw std::invalid_argument("poisson_two_sides: weight has no closed-form transform");
  if (!weight.majorant || !weight.transform_majorant)
    throw std::invalid_argument("poisson_two_sides: weight lacks a Gaussian majorant for its tails");
  if (!(B > 0.0) || !(tol > 0.0)) throw std::invalid_argument("poisson_two_sides: B and tol must be positive");

  const GaussianMajorant& m = *weight.majorant;
  const GaussianMajorant lhs_major{{B * m.center[0], B * m.center[1]}, m.amplitude, m.rate / (B * B)};
  const auto lhs = lattice_sum([&](Vec2 y) { return weight.value({y[0] / B, y[1] / B}); }, ShiftedLattice{lat, a},
                               lhs_major, tol / 2.0);

  const Lattice2 dl = dual(lat);
  const double factor = B * B / lat.covolume();
  const GaussianMajorant& t = *weight.transform_majorant;
  const GaussianMajorant rhs_major{{t.center[0] / B, t.center[1] / B}, t.amplitude * factor, t.rate * B * B};
  const auto rhs = lattice_sum(
      [&](Vec2 x) { return factor * e(dot(a, x)) * weight.transform({B * x[0], B * x[1]}); },
      ShiftedLattice{dl, {0.0, 0.0}}, rhs_major, tol / 2.0);

  PoissonSides out;
  out.lhs = lhs.value.real();
  out.rhs = rhs.value;
  out.discrepancy = std::abs(lhs.value - rhs.value);
  out.lhs_tail = lhs.tail_bound;
  out.rhs_tail = rhs.tail_bound;
  return out;
}

double fejer_periodization_closed(Vec2 y, double N) {
  const double M = std::sqrt(N);
  return tent_1d(y[0], M) * tent_1d(y[1], M);
}

PeriodizationCheck fejer_periodization(Vec2 y, double N, double tol) {
  if (!(N >= 1.0)) throw std::invalid_argument("fejer_periodization: N must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("fejer_periodization: tolerance must be positive");
  const double M = std::sqrt(N);
  // |S1| <= S1(0) = (pi^2/2) M, so per-axis errors t give a product error below
  // 2 t ((pi^2/2) M + 1) for t <= 1.
  const double t = std::min(1.0, tol / (2.0 * (kPi * kPi / 2.0 * M + 1.0)));
  const OneDim s0 = fejer_periodization_1d(y[0], M, t);
  const OneDim s1 = fejer_periodization_1d(y[1], M, t);
  PeriodizationCheck out;
  out.direct = s0.value * s1.value;
  out.closed = fejer_periodization_closed(y, N);
  out.discrepancy = std::abs(out.direct - out.closed);
  out.tail_bound = std::abs(s0.value) * s1.tail + std::abs(s1.value) * s0.tail + s0.tail * s1.tail;
  return out;
}

}  // namespace lsieve
