// Moduli families, coefficient sequences, the large sieve sum T and the
// comparison bounds.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsieve/gaussint.hpp"

namespace lsieve {

enum class FamilyKind { all, squares, kth_power, square_norm };
enum class RangeKind { full, dyadic };
enum class Associates { literal, up_to_units };

struct ModuliFamily {
  FamilyKind kind = FamilyKind::all;
  int k = 1;  // exponent for kth_power; forced to 2 for squares and 1 otherwise
  RangeKind range = RangeKind::full;
  double Q = 1.0;
  Associates associates = Associates::literal;

  /// Exponent applied to the base modulus.
  int power() const;
  /// Bound on N(base): Q, or Q^2 for square_norm.
  double norm_bound() const;
  std::string describe() const;
};

std::string to_string(FamilyKind kind);
std::string to_string(Associates a);
std::string to_string(RangeKind r);
FamilyKind family_kind_from_string(const std::string& s);
Associates associates_from_string(const std::string& s);
RangeKind range_from_string(const std::string& s);

/// A member q^power of a family; residues are taken mod `modulus` and
/// coprimality is tested against `base`.
struct Modulus {
  GaussInt base;
  GaussInt modulus;
};

/// Ordered by N(base), then (re, im) of the base.
std::vector<Modulus> enumerate_moduli(const ModuliFamily& family);

/// Reduced residues mod m.modulus coprime to m.base, in the canonical order of
/// residue_system.
std::vector<GaussInt> reduced_residues(const Modulus& m);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caps on enumeration work; zero means unlimited.
struct Budget {
  std::uint64_t max_points = 0;      // number of (r, q) pairs
  std::uint64_t max_operations = 0;  // pairs times support size

  void check_points(std::uint64_t points) const;
  void check_operations(std::uint64_t ops) const;
};

/// Gaussian integers with N(n) <= N, ordered by norm then (re, im).
std::vector<GaussInt> disk_points(double N);

enum class CoeffKind { all_ones, random, extremal, custom };
std::string to_string(CoeffKind kind);
CoeffKind coeff_kind_from_string(const std::string& s);

struct CoefficientSeq {
  double N = 1.0;
  std::vector<GaussInt> support;  // disk_points(N)
  std::vector<std::complex<double>> values;
  CoeffKind kind = CoeffKind::custom;
  std::uint64_t seed = 0;

  /// sum |a_n|^2, cached at construction.
  double Z() const { return Z_; }
  std::size_t size() const { return support.size(); }

  /// Builds from explicit values on disk_points(N); values.size() must match.
  static CoefficientSeq custom(double N, std::vector<std::complex<double>> values);

 private:
  friend CoefficientSeq make_seq(double, std::vector<std::complex<double>>, CoeffKind, std::uint64_t);
  double Z_ = 0.0;
};

struct ExtremalProbe {
  GaussInt r0{1, 0};
  GaussInt q0{1, 0};
  int k = 1;
};

/// all_ones; random: mt19937_64(seed), each entry u1 * e(u2) with u = (x >> 11) * 2^-53;
/// extremal: a_n = e(-Re(n r0 / q0^k)).
CoefficientSeq make_coefficients(CoeffKind kind, double N, std::uint64_t seed = 0,
                                 std::optional<ExtremalProbe> probe = std::nullopt);

/// The probe used by the grids for the extremal coefficients of a family: the
/// largest-norm base of the family with r0 = 1.
ExtremalProbe default_probe(const ModuliFamily& family);

/// sum_n a_n e(Re(n r / m)), phase numerator Re(n r conj(m)) reduced mod N(m).
std::complex<double> trig_sum(const CoefficientSeq& a, GaussInt r, GaussInt m);

/// One |trig_sum|^2 per listed (r, modulus) pair.
struct SamplePoint {
  GaussInt r;
  GaussInt modulus;
};
double squared_trig_sum(const CoefficientSeq& a, const std::vector<SamplePoint>& points);

/// T over the family: moduli in range, r over reduced residues.
double lhs_T(const ModuliFamily& family, const CoefficientSeq& a, const Budget& budget = {});

/// Same T through the vector phase s(xu+yv)/N(q) + t(xv-yu)/N(q) in floating point.
double lhs_T_vector_form(const ModuliFamily& family, const CoefficientSeq& a, const Budget& budget = {});

/// Named bounds C (QN)^eps F(Q, N) Z:
///   huxley      (Q^k)^2 + N        (Huxley over all moduli of norm <= Q^k)
///   thm1        Q^3 + Q^2 sqrt(N) + sqrt(Q) N
///   thm2        Q^(k+1) + N Q^(1-1/kappa) + N^(1-1/kappa) Q^(1+k/kappa)
///   conj        N + Q^(k+1)
///   square_norm Q^3 + Q^2 sqrt(N) + sqrt(Q) N
std::map<std::string, double> bounds(double Q, double N, double Z, int k, double eps = 0.0, double C = 1.0);

/// (pi^4/4) K N Z.
double bound_ls_explicit(long K, double N, double Z);

struct SieveReport {
  std::string family;
  int k = 1;
  double Q = 0.0;
  double N = 0.0;
  std::uint64_t seed = 0;
  std::string coeffs;
  std::string associates;
  std::string range;
  std::uint64_t R = 0;
  long K_euclid = 0;
  long K_sup = 0;
  long K_norm = 0;
  double T = 0.0;
  double Z = 0.0;
  std::map<std::string, double> bounds;
  std::map<std::string, double> ratios;
  std::string status = "ok";
  double wall_time_ms = 0.0;
};

}  // namespace lsieve
