#include "lsieve/spacing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lsieve/lattice.hpp"
#include "lsieve/phase.hpp"

namespace lsieve {

namespace {

constexpr double kPi = std::numbers::pi;

struct Offset {
  Wide dx, dy, D;
};

// Centred torus offset of b relative to a, scaled by D = den_a * den_b.
Offset torus_offset(const FareyPoint& a, const FareyPoint& b) {
  const Wide D = static_cast<Wide>(a.den) * b.den;
  const Wide x = static_cast<Wide>(b.num_x) * a.den - static_cast<Wide>(a.num_x) * b.den;
  const Wide y = static_cast<Wide>(b.num_y) * a.den - static_cast<Wide>(a.num_y) * b.den;
  return {nearest_offset(x, checked_narrow(D)), nearest_offset(y, checked_narrow(D)), D};
}

bool euclid_close(const FareyPoint& a, const FareyPoint& b, Ratio N) {
  const Offset o = torus_offset(a, b);
  // (dx^2 + dy^2) / D^2 <= 2 / N
  return (o.dx * o.dx + o.dy * o.dy) * N.num <= 2 * o.D * o.D * N.den;
}

bool sup_close(const FareyPoint& a, const FareyPoint& b, Ratio N) {
  const Offset o = torus_offset(a, b);
  const Wide lim = o.D * o.D * N.den;
  return o.dx * o.dx * N.num <= lim && o.dy * o.dy * N.num <= lim;
}

template <class Close>
std::vector<long> counts_brute(const std::vector<FareyPoint>& pts, Close&& close) {
  std::vector<long> out(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (const FareyPoint& b : pts)
      if (close(pts[i], b)) ++out[i];
  return out;
}

// Torus cells of width 1/G >= radius; any pair within the radius on both axes
// sits in neighbouring cells.
template <class Close>
std::vector<long> counts_bucketed(const std::vector<FareyPoint>& pts, Int G, Close&& close) {
  const auto cell_of = [G](Int num, Int den) {
    return static_cast<Int>(floor_div(floor_mod(num, den) * G, den));
  };
  std::vector<std::vector<std::size_t>> cells(static_cast<std::size_t>(G * G));
  std::vector<std::pair<Int, Int>> where(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Int cx = cell_of(pts[i].num_x, pts[i].den), cy = cell_of(pts[i].num_y, pts[i].den);
    where[i] = {cx, cy};
    cells[static_cast<std::size_t>(cx * G + cy)].push_back(i);
  }
  std::vector<long> out(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    long& c = out[i];
    for (Int ox = -1; ox <= 1; ++ox) {
      for (Int oy = -1; oy <= 1; ++oy) {
        const Int cx = (where[i].first + ox + G) % G, cy = (where[i].second + oy + G) % G;
        for (std::size_t j : cells[static_cast<std::size_t>(cx * G + cy)])
          if (close(pts[i], pts[j])) ++c;
      }
    }
  }
  return out;
}

// Largest G with 1/G >= radius (1 + 1e-9), radius = sqrt(scale / N).
Int grid_size(Ratio N, double scale) {
  const double radius = std::sqrt(scale / N.value());
  return static_cast<Int>(std::floor(1.0 / (radius * (1.0 + 1e-9))));
}

template <class Close>
std::vector<long> counts(const std::vector<FareyPoint>& pts, Ratio N, double scale, PairSearch search, Close&& close) {
  if (pts.empty()) throw std::invalid_argument("spacing count: no points");
  const Int G = grid_size(N, scale);
  if (search == PairSearch::brute || (search == PairSearch::automatic && G < 3)) return counts_brute(pts, close);
  if (G < 3) throw std::invalid_argument("spacing count: radius too large for bucketing");
  return counts_bucketed(pts, G, close);
}

template <class Close>
long count(const std::vector<FareyPoint>& pts, Ratio N, double scale, PairSearch search, Close&& close) {
  const std::vector<long> c = counts(pts, N, scale, search, close);
  return *std::max_element(c.begin(), c.end());
}

double psi2_base_weight(int k, GaussInt q, double Q) {
  return std::exp(-kPi / kappa(k) * static_cast<double>(norm_wide(q)) / Q);
}

// sum over Z^2 of exp(-c |x|^2) is at most (1 + sqrt(pi / c))^2.
double theta_bound(double c) {
  const double s = 1.0 + std::sqrt(kPi / c);
  return s * s;
}

void check_smoothed_args(const ModuliFamily& family, double N, GaussInt r1, GaussInt m1, double tol) {
  if (family.kind == FamilyKind::square_norm)
    throw std::invalid_argument("smoothed K: defined for power families only");
  if (!(N >= 1.0) || !(tol > 0.0)) throw std::invalid_argument("smoothed K: N >= 1 and tol > 0 required");
  if (m1.is_zero() || !coprime(r1, m1)) throw std::invalid_argument("smoothed K: r1 must be a unit mod m1");
}

}  // namespace

Ratio::Ratio(Int n, Int d) : num(n), den(d) {
  if (n <= 0 || d <= 0) throw std::invalid_argument("Ratio: numerator and denominator must be positive");
  const Int g = std::gcd(n, d);
  num /= g;
  den /= g;
}

Ratio ratio_from_double(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("ratio_from_double: positive finite value required");
  for (Int den = 1; den <= (Int{1} << 20); den *= 2) {
    const double scaled = x * static_cast<double>(den);
    if (scaled == std::floor(scaled) && scaled < 9e15) return Ratio(static_cast<Int>(scaled), den);
  }
  throw std::invalid_argument("ratio_from_double: value is not a short binary fraction");
}

FareyPoint make_farey_point(GaussInt r, const Modulus& m) {
  const Int u = m.modulus.re, v = m.modulus.im, x = r.re, y = r.im;
  return {r,
          m.base,
          m.modulus,
          norm(m.modulus),
          checked_narrow(static_cast<Wide>(x) * u + static_cast<Wide>(y) * v),
          checked_narrow(static_cast<Wide>(x) * v - static_cast<Wide>(y) * u)};
}

std::vector<FareyPoint> farey_points(const ModuliFamily& family, const Budget& budget) {
  std::vector<FareyPoint> out;
  for (const Modulus& m : enumerate_moduli(family)) {
    for (GaussInt r : reduced_residues(m)) out.push_back(make_farey_point(r, m));
    budget.check_points(out.size());
  }
  return out;
}

bool norm_form_close(const FareyPoint& a, const FareyPoint& b, Ratio N) {
  const WideGauss qa(a.modulus), qb(b.modulus);
  const WideGauss w = WideGauss(a.r) * qb - WideGauss(b.r) * qa;
  const WideGauss P = qa * qb;
  // Rounded quotient w / P, then its 3x3 neighbourhood.
  const WideGauss wp = w * conj(P);
  const Wide d = P.re * P.re + P.im * P.im;
  const auto nearest = [d](Wide t) { return floor_div(2 * t + d, 2 * d); };
  const Wide z0re = nearest(wp.re), z0im = nearest(wp.im);
  const Wide lim = 2 * static_cast<Wide>(a.den) * b.den * N.den;
  for (Wide dx = -1; dx <= 1; ++dx) {
    for (Wide dy = -1; dy <= 1; ++dy) {
      const WideGauss rest = w - WideGauss(z0re + dx, z0im + dy) * P;
      if ((rest.re * rest.re + rest.im * rest.im) * N.num <= lim) return true;
    }
  }
  return false;
}

std::vector<long> euclid_neighbour_counts(const std::vector<FareyPoint>& points, Ratio N, PairSearch search) {
  return counts(points, N, 2.0, search, [N](const FareyPoint& a, const FareyPoint& b) { return euclid_close(a, b, N); });
}

long K_euclid(const std::vector<FareyPoint>& points, Ratio N, PairSearch search) {
  return count(points, N, 2.0, search, [N](const FareyPoint& a, const FareyPoint& b) { return euclid_close(a, b, N); });
}

long K_sup(const std::vector<FareyPoint>& points, Ratio N, PairSearch search) {
  return count(points, N, 1.0, search, [N](const FareyPoint& a, const FareyPoint& b) { return sup_close(a, b, N); });
}

long K_norm(const std::vector<FareyPoint>& points, Ratio N, PairSearch search) {
  // The norm-form criterion is the Euclidean one in other coordinates, so the
  // Euclidean cell size bounds the candidate pairs.
  return count(points, N, 2.0, search,
               [N](const FareyPoint& a, const FareyPoint& b) { return norm_form_close(a, b, N); });
}

LsCheck theorem_ls_check(const std::vector<FareyPoint>& points, const CoefficientSeq& a) {
  LsCheck out{};
  for (const FareyPoint& p : points) out.T += std::norm(trig_sum(a, p.r, p.modulus));
  out.K = K_euclid(points, ratio_from_double(a.N));
  out.bound = bound_ls_explicit(out.K, a.N, a.Z());
  out.ratio = out.bound > 0.0 ? out.T / out.bound : 0.0;
  return out;
}

double smoothed_K_constant(const ModuliFamily& family) {
  return std::exp(kPi * (1.0 + 1.0 / kappa(family.power())));
}

double smoothed_K_direct(const ModuliFamily& family, double N, GaussInt r1, GaussInt m1, double tol) {
  check_smoothed_args(family, N, r1, m1, tol);
  const int k = family.power();
  const double Qm = std::pow(family.Q, k);
  const double nm1 = static_cast<double>(norm_wide(m1));
  const Lattice2 z2({1.0, 0.0}, {0.0, 1.0});
  const Lattice2 lat1 = lattice_from_modulus(m1);

  // Psi1(b sqrt(N) / (|m1| sqrt(2 Qm))) = exp(-c N(b)).
  const double c = kPi * N / (2.0 * nm1 * Qm);
  const double rate_q = kPi / (kappa(k) * family.Q);
  const double W = theta_bound(rate_q);
  const double inner_max = theta_bound(c * nm1);
  const double tol_b = tol / (2.0 * W);

  const GaussianMajorant major_b{{0.0, 0.0}, 1.0, c};
  const auto outer = [&](Vec2 p) {
    const GaussInt q{static_cast<Int>(std::llround(p[0])), static_cast<Int>(std::llround(p[1]))};
    if (q.is_zero()) return 0.0;
    const GaussInt shift = reduce(r1 * pow(q, static_cast<unsigned>(k)), m1);
    const auto inner = lattice_sum(
        [c](Vec2 b) { return std::exp(-c * (b[0] * b[0] + b[1] * b[1])); },
        ShiftedLattice{lat1, {static_cast<double>(shift.re), static_cast<double>(shift.im)}}, major_b, tol_b);
    return psi2_base_weight(k, q, family.Q) * inner.value.real();
  };
  // Each outer term is at most inner_max times its base weight.
  return lattice_sum(outer, ShiftedLattice{z2, {0.0, 0.0}}, GaussianMajorant{{0.0, 0.0}, inner_max, rate_q}, tol / 2.0)
      .value.real();
}

std::complex<double> smoothed_K_poisson(const ModuliFamily& family, double N, GaussInt r1, GaussInt m1, double tol) {
  check_smoothed_args(family, N, r1, m1, tol);
  const int k = family.power();
  const double Qm = std::pow(family.Q, k);
  const double factor = 2.0 * Qm / N;
  const double rate_j = kPi * 2.0 * Qm / N;
  const double rate_q = kPi / (kappa(k) * family.Q);
  const double W = theta_bound(rate_q);
  const double J = theta_bound(rate_j);
  const double tol_q = tol / (2.0 * factor * J);
  const Lattice2 z2({1.0, 0.0}, {0.0, 1.0});
  const Wide d = norm_wide(m1);
  const WideGauss rc = WideGauss(r1) * conj(WideGauss(m1));

  // Base weights and r1 q^k conj(m1), shared by every j.
  std::vector<std::pair<double, WideGauss>> terms;
  lattice_sum(
      [&](Vec2 p) {
        const GaussInt q{static_cast<Int>(std::llround(p[0])), static_cast<Int>(std::llround(p[1]))};
        if (!q.is_zero())
          terms.emplace_back(psi2_base_weight(k, q, family.Q), WideGauss(pow(q, static_cast<unsigned>(k))) * rc);
        return 0.0;
      },
      ShiftedLattice{z2, {0.0, 0.0}}, GaussianMajorant{{0.0, 0.0}, 1.0, rate_q}, tol_q);

  const auto outer = [&](Vec2 p) {
    const WideGauss j(static_cast<Wide>(std::llround(p[0])), static_cast<Wide>(std::llround(p[1])));
    std::complex<double> s(0.0, 0.0);
    for (const auto& [w, num] : terms) s += w * unit_phase((j * num).re, d);
    return std::exp(-rate_j * (p[0] * p[0] + p[1] * p[1])) * s;
  };
  return factor *
         lattice_sum(outer, ShiftedLattice{z2, {0.0, 0.0}}, GaussianMajorant{{0.0, 0.0}, W, rate_j}, tol / (2.0 * factor)).value;
}

}  // namespace lsieve
