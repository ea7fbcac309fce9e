#include "lsieve/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lsieve/phase.hpp"

namespace lsieve {

namespace {

constexpr double kPi = std::numbers::pi;

bool norm_then_lex(GaussInt a, GaussInt b) {
  const Wide na = norm_wide(a), nb = norm_wide(b);
  if (na != nb) return na < nb;
  return a < b;
}

// Largest integer n with n <= x (for the norm bounds, given as reals).
Int floor_bound(double x) { return static_cast<Int>(std::floor(x + 1e-9)); }

bool is_square(Int n) {
  const auto r = static_cast<Int>(std::llround(std::sqrt(static_cast<double>(n))));
  for (Int c = std::max<Int>(r - 1, 0); c <= r + 1; ++c)
    if (c * c == n) return true;
  return false;
}

template <class Phase>
double sum_over_family(const ModuliFamily& family, const CoefficientSeq& a, const Budget& budget, Phase&& inner) {
  const auto moduli = enumerate_moduli(family);
  std::vector<std::vector<GaussInt>> residues;
  residues.reserve(moduli.size());
  std::uint64_t points = 0;
  for (const Modulus& m : moduli) {
    residues.push_back(reduced_residues(m));
    points += residues.back().size();
    budget.check_points(points);
  }
  budget.check_operations(points * a.size());
  double total = 0.0;
  for (std::size_t i = 0; i < moduli.size(); ++i)
    for (GaussInt r : residues[i]) total += std::norm(inner(r, moduli[i].modulus));
  return total;
}

}  // namespace

CoefficientSeq make_seq(double N, std::vector<std::complex<double>> values, CoeffKind kind, std::uint64_t seed) {
  CoefficientSeq a;
  a.N = N;
  a.support = disk_points(N);
  if (values.size() != a.support.size())
    throw std::invalid_argument("CoefficientSeq: values do not match the support size");
  a.values = std::move(values);
  a.kind = kind;
  a.seed = seed;
  a.Z_ = 0.0;
  for (const auto& v : a.values) a.Z_ += std::norm(v);
  return a;
}

int ModuliFamily::power() const {
  switch (kind) {
    case FamilyKind::squares: return 2;
    case FamilyKind::kth_power: return k;
    default: return 1;
  }
}

double ModuliFamily::norm_bound() const { return kind == FamilyKind::square_norm ? Q * Q : Q; }

std::string ModuliFamily::describe() const {
  std::string s = to_string(kind);
  if (kind == FamilyKind::kth_power) s += "(" + std::to_string(k) + ")";
  return s;
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::all: return "all";
    case FamilyKind::squares: return "squares";
    case FamilyKind::kth_power: return "power";
    case FamilyKind::square_norm: return "square_norm";
  }
  return "?";
}

std::string to_string(Associates a) { return a == Associates::literal ? "literal" : "units"; }
std::string to_string(RangeKind r) { return r == RangeKind::full ? "full" : "dyadic"; }

FamilyKind family_kind_from_string(const std::string& s) {
  if (s == "all") return FamilyKind::all;
  if (s == "squares") return FamilyKind::squares;
  if (s == "power" || s == "kth_power") return FamilyKind::kth_power;
  if (s == "square_norm") return FamilyKind::square_norm;
  throw std::invalid_argument("unknown family '" + s + "'");
}

Associates associates_from_string(const std::string& s) {
  if (s == "literal") return Associates::literal;
  if (s == "units" || s == "up_to_units") return Associates::up_to_units;
  throw std::invalid_argument("unknown associates policy '" + s + "'");
}

RangeKind range_from_string(const std::string& s) {
  if (s == "full") return RangeKind::full;
  if (s == "dyadic") return RangeKind::dyadic;
  throw std::invalid_argument("unknown range '" + s + "'");
}

std::vector<Modulus> enumerate_moduli(const ModuliFamily& family) {
  if (!(family.Q >= 1.0)) throw std::invalid_argument("ModuliFamily: Q must be at least 1");
  if (family.kind == FamilyKind::kth_power && (family.k < 1 || family.k > 12))
    throw std::invalid_argument("ModuliFamily: k out of range");
  const double bound = family.norm_bound();
  const Int hi = floor_bound(bound);
  // Dyadic: bound/2 < N(q) <= bound.
  const Int lo = family.range == RangeKind::dyadic ? floor_bound(bound / 2.0) : 0;
  const auto side = static_cast<Int>(std::floor(std::sqrt(static_cast<double>(hi)))) + 1;

  std::vector<GaussInt> bases;
  for (Int x = -side; x <= side; ++x) {
    for (Int y = -side; y <= side; ++y) {
      const GaussInt q{x, y};
      const Int n = x * x + y * y;
      if (n == 0 || n > hi || n <= lo) continue;
      if (family.kind == FamilyKind::square_norm && !is_square(n)) continue;
      if (family.associates == Associates::up_to_units && canonical(q) != q) continue;
      bases.push_back(q);
    }
  }
  std::sort(bases.begin(), bases.end(), norm_then_lex);
  std::vector<Modulus> out;
  out.reserve(bases.size());
  const auto p = static_cast<unsigned>(family.power());
  for (GaussInt q : bases) out.push_back({q, pow(q, p)});
  return out;
}

std::vector<GaussInt> reduced_residues(const Modulus& m) {
  ResidueSystem complete = residue_system(m.modulus, false);
  std::vector<GaussInt> out;
  out.reserve(complete.representatives.size());
  for (GaussInt r : complete.representatives)
    if (coprime(r, m.base)) out.push_back(r);
  return out;
}

void Budget::check_points(std::uint64_t points) const {
  if (max_points != 0 && points > max_points)
    throw BudgetExceeded("budget exceeded: " + std::to_string(points) + " sample points > " +
                         std::to_string(max_points));
}

void Budget::check_operations(std::uint64_t ops) const {
  if (max_operations != 0 && ops > max_operations)
    throw BudgetExceeded("budget exceeded: " + std::to_string(ops) + " operations > " +
                         std::to_string(max_operations));
}

std::vector<GaussInt> disk_points(double N) {
  if (!(N >= 0.0)) throw std::invalid_argument("disk_points: negative N");
  const Int hi = floor_bound(N);
  const auto side = static_cast<Int>(std::floor(std::sqrt(static_cast<double>(hi)))) + 1;
  std::vector<GaussInt> out;
  for (Int x = -side; x <= side; ++x)
    for (Int y = -side; y <= side; ++y)
      if (x * x + y * y <= hi) out.push_back({x, y});
  std::sort(out.begin(), out.end(), norm_then_lex);
  return out;
}

std::string to_string(CoeffKind kind) {
  switch (kind) {
    case CoeffKind::all_ones: return "ones";
    case CoeffKind::random: return "random";
    case CoeffKind::extremal: return "extremal";
    case CoeffKind::custom: return "custom";
  }
  return "?";
}

CoeffKind coeff_kind_from_string(const std::string& s) {
  if (s == "ones" || s == "all_ones") return CoeffKind::all_ones;
  if (s == "random") return CoeffKind::random;
  if (s == "extremal") return CoeffKind::extremal;
  throw std::invalid_argument("unknown coefficient kind '" + s + "'");
}

CoefficientSeq CoefficientSeq::custom(double N, std::vector<std::complex<double>> values) {
  return make_seq(N, std::move(values), CoeffKind::custom, 0);
}

CoefficientSeq make_coefficients(CoeffKind kind, double N, std::uint64_t seed, std::optional<ExtremalProbe> probe) {
  if (!(N >= 1.0)) throw std::invalid_argument("make_coefficients: N must be at least 1");
  const std::vector<GaussInt> support = disk_points(N);
  std::vector<std::complex<double>> values(support.size());
  switch (kind) {
    case CoeffKind::all_ones:
      std::fill(values.begin(), values.end(), std::complex<double>(1.0, 0.0));
      return make_seq(N, std::move(values), kind, 0);
    case CoeffKind::random: {
      std::mt19937_64 gen(seed);
      const auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
      for (auto& v : values) {
        const double modulus = unit();
        const double turn = unit();
        v = modulus * e(turn);
      }
      return make_seq(N, std::move(values), kind, seed);
    }
    case CoeffKind::extremal: {
      if (!probe) throw std::invalid_argument("make_coefficients: extremal coefficients need a probe");
      if (!coprime(probe->r0, probe->q0)) throw std::invalid_argument("make_coefficients: gcd(r0, q0) is not a unit");
      const GaussInt m = pow(probe->q0, static_cast<unsigned>(probe->k));
      const WideGauss rc = WideGauss(probe->r0) * conj(WideGauss(m));
      const Wide d = norm_wide(m);
      for (std::size_t i = 0; i < support.size(); ++i) {
        const WideGauss num = WideGauss(support[i]) * rc;
        values[i] = unit_phase(-num.re, d);
      }
      return make_seq(N, std::move(values), kind, seed);
    }
    case CoeffKind::custom: break;
  }
  throw std::invalid_argument("make_coefficients: use CoefficientSeq::custom for custom values");
}

ExtremalProbe default_probe(const ModuliFamily& family) {
  const auto moduli = enumerate_moduli(family);
  if (moduli.empty()) throw std::invalid_argument("default_probe: empty family");
  return {GaussInt{1, 0}, moduli.back().base, family.power()};
}

std::complex<double> trig_sum(const CoefficientSeq& a, GaussInt r, GaussInt m) {
  if (m.is_zero()) throw std::invalid_argument("trig_sum: zero modulus");
  const WideGauss rc = WideGauss(r) * conj(WideGauss(m));
  const Wide d = norm_wide(m);
  std::complex<double> s(0.0, 0.0);
  if (d <= kMaxPhaseTable) {
    const PhaseTable table(static_cast<Int>(d));
    for (std::size_t i = 0; i < a.support.size(); ++i)
      s += a.values[i] * table((WideGauss(a.support[i]) * rc).re);
  } else {
    for (std::size_t i = 0; i < a.support.size(); ++i)
      s += a.values[i] * unit_phase((WideGauss(a.support[i]) * rc).re, d);
  }
  return s;
}

double squared_trig_sum(const CoefficientSeq& a, const std::vector<SamplePoint>& points) {
  double total = 0.0;
  for (const SamplePoint& p : points) total += std::norm(trig_sum(a, p.r, p.modulus));
  return total;
}

double lhs_T(const ModuliFamily& family, const CoefficientSeq& a, const Budget& budget) {
  return sum_over_family(family, a, budget, [&a](GaussInt r, GaussInt m) { return trig_sum(a, r, m); });
}

double lhs_T_vector_form(const ModuliFamily& family, const CoefficientSeq& a, const Budget& budget) {
  return sum_over_family(family, a, budget, [&a](GaussInt r, GaussInt m) {
    const double u = static_cast<double>(m.re), v = static_cast<double>(m.im);
    const double x = static_cast<double>(r.re), y = static_cast<double>(r.im);
    const double nq = u * u + v * v;
    const double e1 = (x * u + y * v) / nq;
    const double e2 = (x * v - y * u) / nq;
    std::complex<double> s(0.0, 0.0);
    for (std::size_t i = 0; i < a.support.size(); ++i) {
      const double sx = static_cast<double>(a.support[i].re), tx = static_cast<double>(a.support[i].im);
      s += a.values[i] * std::polar(1.0, 2.0 * kPi * (sx * e1 + tx * e2));
    }
    return s;
  });
}

std::map<std::string, double> bounds(double Q, double N, double Z, int k, double eps, double C) {
  if (!(Q >= 1.0) || !(N >= 1.0) || !(Z >= 0.0) || k < 1) throw std::invalid_argument("bounds: bad arguments");
  const double scale = C * std::pow(Q * N, eps) * Z;
  const double kap = static_cast<double>(1L << (k - 1));
  const double kd = static_cast<double>(k);
  const double Qk = std::pow(Q, kd);
  const double thm1 = Q * Q * Q + Q * Q * std::sqrt(N) + std::sqrt(Q) * N;
  return {
      {"huxley", scale * (Qk * Qk + N)},
      {"thm1", scale * thm1},
      {"thm2", scale * (std::pow(Q, kd + 1.0) + N * std::pow(Q, 1.0 - 1.0 / kap) +
                        std::pow(N, 1.0 - 1.0 / kap) * std::pow(Q, 1.0 + kd / kap))},
      {"conj", scale * (N + std::pow(Q, kd + 1.0))},
      {"square_norm", scale * thm1},
  };
}

double bound_ls_explicit(long K, double N, double Z) {
  return kPi * kPi * kPi * kPi / 4.0 * static_cast<double>(K) * N * Z;
}

}  // namespace lsieve
