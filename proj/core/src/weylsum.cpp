#include "lsieve/weylsum.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "lsieve/lattice.hpp"
#include "lsieve/phase.hpp"
#include "lsieve/sieve.hpp"
#include "lsieve/weights.hpp"

namespace lsieve {

namespace {

constexpr double kPi = std::numbers::pi;

const Lattice2& integer_lattice() {
  static const Lattice2 z2 = lattice_from_modulus(GaussInt{1, 0});
  return z2;
}

GaussInt to_gauss(const Vec2& p) { return {std::llround(p[0]), std::llround(p[1])}; }

// sum over q in Z[i] of f(q), with |f| <= amplitude exp(-rate |q - center|^2).
template <class F>
LatticeSum gauss_sum(F&& f, Vec2 center, double amplitude, double rate, double tol) {
  const GaussianMajorant maj{center, amplitude, rate};
  return lattice_sum([&](const Vec2& p) { return f(to_gauss(p)); }, ShiftedLattice{integer_lattice(), {0.0, 0.0}},
                     maj, tol);
}

// Upper bound for sum over Z^2 of exp(-rate |q - c|^2).
double theta_bound(double rate) {
  const double one_d = 1.0 + std::sqrt(kPi / rate);
  return one_d * one_d;
}

// e(num / den) through a table when den is small enough.
class Phaser {
 public:
  explicit Phaser(Int den) : den_(den) {
    if (den <= kMaxPhaseTable) table_.emplace(den);
  }
  std::complex<double> operator()(Wide num) const { return table_ ? (*table_)(num) : unit_phase(num, den_); }

 private:
  Int den_;
  std::optional<PhaseTable> table_;
};

Wide re_product(WideGauss a, WideGauss b) { return (a * b).re; }

double vec_norm(std::complex<double> z) { return std::norm(z); }

// Kept alpha range and the certified bound on the alpha terms beyond it, for
// alpha terms dominated by inner_total * exp(-alpha_rate N(alpha)).
struct AlphaRange {
  double cut;
  double tail;
};

AlphaRange alpha_range(double requested_cut, double inner_total, double alpha_rate, double tol) {
  const GaussianMajorant maj{{0.0, 0.0}, inner_total, alpha_rate};
  if (requested_cut <= 0.0) {
    const double r = maj.radius_for_lattice(tol, 0.5);
    return {r * r, maj.lattice_tail(r, 0.5)};
  }
  const double r = std::sqrt(requested_cut);
  if (r < 1.0) return {requested_cut, inner_total * theta_bound(alpha_rate)};
  return {requested_cut, maj.lattice_tail(r, 0.5)};
}

void require_k2(const WeylConfig& cfg, const char* what) {
  if (cfg.k != 2) throw std::invalid_argument(std::string(what) + " needs k = 2");
}

// |q1^k|^2 scaled distance test: dist2 <= delta^2 D^2.
bool within(Wide scaled_dist2, Int D, double delta) {
  const long double d = static_cast<long double>(delta);
  const long double thr = d * d * static_cast<long double>(D) * static_cast<long double>(D);
  return static_cast<long double>(scaled_dist2) <= thr;
}

Int factorial(int k) {
  Int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

void WeylConfig::validate() const {
  if (k < 2 || k > 8) throw std::invalid_argument("weyl: k must lie in [2, 8]");
  if (!(Q0 > 0.0) || !std::isfinite(Q0)) throw std::invalid_argument("weyl: Q0 must be positive");
  if (!(truncation_tol > 0.0)) throw std::invalid_argument("weyl: truncation_tol must be positive");
  if (q1.is_zero()) throw std::invalid_argument("weyl: q1 must be nonzero");
  const double n = static_cast<double>(norm(q1));
  if (!(n <= Q0) || !(n > Q0 / std::pow(2.0, 1.0 / k)))
    throw std::invalid_argument("weyl: N(q1) must lie in (Q0 / 2^(1/k), Q0]");
  if (!coprime(r1, q1)) throw std::invalid_argument("weyl: r1 must be coprime to q1");
}

TruncatedSum psi2_mass(int k, double Q0, double tol) {
  const double rate = kPi / (kappa(k) * Q0);
  const LatticeSum s = gauss_sum([&](GaussInt q) { return std::complex<double>(std::exp(-rate * norm(q)), 0.0); },
                                 {0.0, 0.0}, 1.0, rate, tol);
  return {s.value, s.tail_bound, s.terms};
}

TruncatedSum S_direct(const WeylConfig& cfg) {
  cfg.validate();
  const GaussInt m = cfg.modulus();
  const Int D = norm(m);
  const WideGauss W = WideGauss(cfg.j) * WideGauss(cfg.r1) * conj(WideGauss(m));
  const Phaser phase(D);
  const double rate = kPi / (cfg.kappa() * cfg.Q0);
  const auto k = static_cast<unsigned>(cfg.k);
  const LatticeSum s = gauss_sum(
      [&](GaussInt q) { return std::exp(-rate * norm(q)) * phase(re_product(W, pow(q, k))); }, {0.0, 0.0}, 1.0,
      rate, cfg.truncation_tol);
  return {s.value, s.tail_bound, s.terms};
}

DifferencedSum S2_squared_differenced(const WeylConfig& cfg, double alpha_cut) {
  cfg.validate();
  require_k2(cfg, "S2_squared_differenced");
  const double Q0 = cfg.Q0;
  const double tol = cfg.truncation_tol;
  const GaussInt m = cfg.modulus();
  const Int D = norm(m);
  const WideGauss W = WideGauss(cfg.j) * WideGauss(cfg.r1) * conj(WideGauss(m));
  const Phaser phase(D);

  // Psi2(q^2/Q0) Psi2((alpha+q)^2/Q0) = exp(-pi N(alpha)/(4 Q0)) exp(-(pi/Q0) |q + alpha/2|^2).
  const double alpha_rate = kPi / (4.0 * Q0);
  const double q_rate = kPi / Q0;
  const AlphaRange ar = alpha_range(alpha_cut, theta_bound(q_rate), alpha_rate, tol / 3.0);

  DifferencedSum out{{0.0, 0.0}, ar.tail, 0.0, ar.cut, 0};
  for (const GaussInt& alpha : disk_points(ar.cut)) {
    const double amp = std::exp(-alpha_rate * norm(alpha));
    const WideGauss a2 = WideGauss(alpha) * WideGauss(alpha);
    const WideGauss two_a = WideGauss(Wide{2} * alpha.re, Wide{2} * alpha.im);
    const LatticeSum inner = gauss_sum(
        [&](GaussInt q) {
          const GaussInt s = alpha + q;
          const double w = std::exp(-0.5 * q_rate * static_cast<double>(norm(q) + norm(s)));
          return w * phase(re_product(W, a2 + two_a * WideGauss(q)));
        },
        {-0.5 * static_cast<double>(alpha.re), -0.5 * static_cast<double>(alpha.im)}, amp, q_rate,
        tol / 3.0 * std::max(amp, 1e-300));
    out.value += inner.value;
    out.inner_tail_bound += inner.tail_bound;
    ++out.alpha_terms;
  }
  return out;
}

DifferencedSum S2_squared_poisson(const WeylConfig& cfg, double alpha_cut) {
  cfg.validate();
  require_k2(cfg, "S2_squared_poisson");
  const double Q0 = cfg.Q0;
  const double tol = cfg.truncation_tol;
  const GaussInt m = cfg.modulus();
  const Int D = norm(m);
  const WideGauss W = WideGauss(cfg.j) * WideGauss(cfg.r1) * conj(WideGauss(m));
  // Total phase numerator over 2D:
  //   2 Re(W alpha^2) + Re(conj(alpha) (D beta - conj(C))),  C = 2 alpha W.
  const Phaser phase(checked_narrow(Wide{2} * D));
  const double Dd = static_cast<double>(D);

  const double alpha_rate = kPi / (4.0 * Q0);
  const double beta_rate = kPi * Q0;
  const double inner_total = Q0 * theta_bound(beta_rate);
  const AlphaRange ar = alpha_range(alpha_cut, inner_total, alpha_rate, tol / 3.0);

  DifferencedSum out{{0.0, 0.0}, ar.tail, 0.0, ar.cut, 0};
  for (const GaussInt& alpha : disk_points(ar.cut)) {
    const double amp = Q0 * std::exp(-alpha_rate * norm(alpha));
    const WideGauss wa(alpha);
    const Wide alpha_part = Wide{2} * re_product(W, wa * wa);
    const WideGauss C = WideGauss(Wide{2}, Wide{0}) * wa * W;
    const WideGauss conjC = conj(C);
    const Vec2 centre{static_cast<double>(conjC.re) / Dd, static_cast<double>(conjC.im) / Dd};
    const LatticeSum inner = gauss_sum(
        [&](GaussInt beta) {
          const WideGauss diff = WideGauss(Wide{D} * beta.re, Wide{D} * beta.im) - conjC;
          const double dx = static_cast<double>(diff.re) / Dd;
          const double dy = static_cast<double>(diff.im) / Dd;
          const double w = amp * std::exp(-beta_rate * (dx * dx + dy * dy));
          return w * phase(alpha_part + re_product(conj(wa), diff));
        },
        centre, amp, beta_rate, tol / 3.0 * std::max(amp / Q0, 1e-300));
    out.value += inner.value;
    out.inner_tail_bound += inner.tail_bound;
    ++out.alpha_terms;
  }
  return out;
}

GaussInt P_poly(int k, std::span<const GaussInt> alpha, GaussInt q) {
  const std::size_t m = alpha.size();
  if (k < 1 || m < 1 || static_cast<int>(m) > k - 1 || m > 16)
    throw std::invalid_argument("P_poly: need 1 <= #alpha <= k - 1");
  GaussInt total{0, 0};
  for (std::uint32_t u = 0; u < (1u << m); ++u) {
    GaussInt point = q;
    int bits = 0;
    for (std::size_t v = 0; v < m; ++v) {
      if (u & (1u << v)) {
        point += alpha[v];
        ++bits;
      }
    }
    const GaussInt term = pow(point, static_cast<unsigned>(k));
    if ((static_cast<int>(m) - bits) % 2 == 0)
      total += term;
    else
      total -= term;
  }
  return total;
}

GaussInt P_terminal_doubled(int k, std::span<const GaussInt> alpha, GaussInt q) {
  if (k < 2 || static_cast<int>(alpha.size()) != k - 1)
    throw std::invalid_argument("P_terminal_doubled: need #alpha = k - 1");
  GaussInt prod{factorial(k), 0};
  GaussInt sum{0, 0};
  for (const GaussInt& a : alpha) {
    prod *= a;
    sum += a;
  }
  return GaussInt{2, 0} * prod * q + prod * sum;
}

PowerBoundRhs Sk_power_bound_rhs(const WeylConfig& cfg, double eps, std::uint64_t max_cells, std::uint64_t seed) {
  cfg.validate();
  const int k = cfg.k;
  const int kap = cfg.kappa();
  const double Q0 = cfg.Q0;
  const GaussInt m = cfg.modulus();
  const Int D = norm(m);
  const WideGauss W = WideGauss(cfg.j) * WideGauss(cfg.r1) * conj(WideGauss(m));
  const Phaser phase(checked_narrow(Wide{2} * D));

  const std::vector<GaussInt> disk = disk_points(std::pow(Q0, 1.0 + eps));
  const auto dims = static_cast<std::size_t>(k - 1);
  double cells_d = 1.0;
  std::uint64_t cells = 1;
  for (std::size_t v = 0; v < dims; ++v) {
    cells_d *= static_cast<double>(disk.size());
    cells *= disk.size();
  }
  if (cells_d > 1.8e19) throw std::invalid_argument("Sk_power_bound_rhs: alpha grid too large");

  PowerBoundRhs out{0.0, 0.0, cells, 0, false, seed, 0.0};
  const double q_rate = kPi / Q0;  // kappa Gaussians of rate pi/(kappa Q0)
  std::vector<GaussInt> alpha(dims);

  auto inner_abs = [&]() {
    // Product of the kappa weights completed about -A/2.
    GaussInt A{0, 0};
    for (const GaussInt& a : alpha) A += a;
    const std::complex<double> half_a = 0.5 * A.to_complex();
    double spread = 0.0;
    for (int u = 0; u < kap; ++u) {
      std::complex<double> s{0.0, 0.0};
      for (std::size_t v = 0; v < dims; ++v)
        if (u & (1 << v)) s += alpha[v].to_complex();
      spread += vec_norm(s - half_a);
    }
    const double amp = std::exp(-kPi / (kap * Q0) * spread);
    const LatticeSum s = gauss_sum(
        [&](GaussInt q) {
          const double d2 = vec_norm(q.to_complex() + half_a);
          return amp * std::exp(-q_rate * d2) * phase(re_product(W, P_terminal_doubled(k, alpha, q)));
        },
        {-half_a.real(), -half_a.imag()}, amp, q_rate, cfg.truncation_tol * std::max(amp, 1e-300));
    out.inner_tail_bound += s.tail_bound;
    return std::abs(s.value);
  };

  if (cells <= max_cells) {
    std::vector<std::size_t> idx(dims, 0);
    for (std::uint64_t c = 0; c < cells; ++c) {
      for (std::size_t v = 0; v < dims; ++v) alpha[v] = disk[idx[v]];
      out.alpha_sum += inner_abs();
      for (std::size_t v = 0; v < dims; ++v) {
        if (++idx[v] < disk.size()) break;
        idx[v] = 0;
      }
    }
    out.evaluated = cells;
  } else {
    std::mt19937_64 rng(seed);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < max_cells; ++s) {
      for (std::size_t v = 0; v < dims; ++v) alpha[v] = disk[rng() % disk.size()];
      acc += inner_abs();
    }
    out.sampled = true;
    out.evaluated = max_cells;
    out.alpha_sum = acc / static_cast<double>(max_cells) * cells_d;
  }
  out.rhs = std::pow(Q0, kap - k + eps) * out.alpha_sum;
  return out;
}

std::uint64_t count_small_fractional(GaussInt q1, GaussInt r1, int k, Int norm_limit, double delta) {
  if (k < 1 || q1.is_zero()) throw std::invalid_argument("count_small_fractional: need k >= 1 and q1 != 0");
  const GaussInt m = pow(q1, static_cast<unsigned>(k));
  const Int D = norm(m);
  const WideGauss W = WideGauss(r1) * conj(WideGauss(m));
  std::uint64_t count = 0;
  for (const GaussInt& d : disk_points(static_cast<double>(norm_limit))) {
    if (d.is_zero() || norm(d) > norm_limit) continue;
    const WideGauss x = WideGauss(d) * W;
    if (within(nearest_distance_sq_scaled(x.re, x.im, D), D, delta)) ++count;
  }
  return count;
}

ResidueDecomposition count_small_fractional_by_residues(GaussInt q1, GaussInt r1, int k, Int norm_limit,
                                                        double delta) {
  if (k < 1 || q1.is_zero()) throw std::invalid_argument("count_small_fractional_by_residues: bad modulus");
  const GaussInt m = pow(q1, static_cast<unsigned>(k));
  const Int D = norm(m);
  const GaussInt r_inv = inv_mod(r1, m);
  const std::complex<double> mc = m.to_complex();
  const double reach = std::sqrt(static_cast<double>(norm_limit) / static_cast<double>(D));

  ResidueDecomposition out{0, 0, 0.0};
  for (const GaussInt& l : disk_points(delta * delta * static_cast<double>(D) + 1.0)) {
    // |l / m| <= delta, i.e. N(l) D <= delta^2 D^2.
    if (!within(static_cast<Wide>(norm(l)) * D, D, delta)) continue;
    ++out.classes;
    const GaussInt c = reduce(l * r_inv, m);
    // d = c + m t with N(d) <= L: |t + c/m| <= sqrt(L / D).
    const std::complex<double> centre = -c.to_complex() / mc;
    const auto tx0 = static_cast<Int>(std::floor(centre.real() - reach - 1.0));
    const auto tx1 = static_cast<Int>(std::ceil(centre.real() + reach + 1.0));
    const auto ty0 = static_cast<Int>(std::floor(centre.imag() - reach - 1.0));
    const auto ty1 = static_cast<Int>(std::ceil(centre.imag() + reach + 1.0));
    for (Int tx = tx0; tx <= tx1; ++tx) {
      for (Int ty = ty0; ty <= ty1; ++ty) {
        const GaussInt d = c + m * GaussInt{tx, ty};
        if (!d.is_zero() && norm(d) <= norm_limit) ++out.count;
      }
    }
  }
  const double per_class = 2.0 * reach + 1.0;
  out.bound = static_cast<double>(out.classes) * per_class * per_class;
  return out;
}

}  // namespace lsieve
