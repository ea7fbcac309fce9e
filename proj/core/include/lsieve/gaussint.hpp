// Exact arithmetic in the Gaussian integers Z[i].
//
// Every routine here is a pure function on small value types. Products that
// might leave the 64-bit range are formed in 128-bit intermediates and any
// result that does not fit throws ArithmeticOverflow instead of wrapping.

#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lsieve {

using Int = std::int64_t;
__extension__ typedef __int128 Wide;

class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Raised by inv_mod when gcd(r, m) is not a unit.
class NotInvertible : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct GaussInt {
  Int re = 0;
  Int im = 0;

  constexpr GaussInt() = default;
  constexpr GaussInt(Int real, Int imag = 0) : re(real), im(imag) {}

  constexpr bool is_zero() const { return re == 0 && im == 0; }
  constexpr bool is_unit() const {
    return (re == 0 && (im == 1 || im == -1)) || (im == 0 && (re == 1 || re == -1));
  }
  std::complex<double> to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  friend constexpr bool operator==(GaussInt, GaussInt) = default;
  // Lexicographic on (re, im); only used for ordered containers.
  friend constexpr auto operator<=>(GaussInt, GaussInt) = default;
};

/// The unit i.
inline constexpr GaussInt kI{0, 1};

/// Narrow a 128-bit value, throwing when it does not fit in Int.
Int checked_narrow(Wide v);

GaussInt operator+(GaussInt a, GaussInt b);
GaussInt operator-(GaussInt a, GaussInt b);
GaussInt operator-(GaussInt a);
GaussInt operator*(GaussInt a, GaussInt b);
inline GaussInt& operator+=(GaussInt& a, GaussInt b) { return a = a + b; }
inline GaussInt& operator-=(GaussInt& a, GaussInt b) { return a = a - b; }
inline GaussInt& operator*=(GaussInt& a, GaussInt b) { return a = a * b; }

constexpr GaussInt conj(GaussInt z) { return {z.re, -z.im}; }

/// re^2 + im^2. Exact for |re|, |im| < 2^31; throws ArithmeticOverflow when
/// the norm exceeds the Int range (use norm_wide for the 2^31 corner).
Int norm(GaussInt z);
/// re^2 + im^2 in 128 bits; exact for all coordinates below 2^62.
constexpr Wide norm_wide(GaussInt z) {
  return static_cast<Wide>(z.re) * z.re + static_cast<Wide>(z.im) * z.im;
}

GaussInt pow(GaussInt z, unsigned k);

/// The associate with re > 0 and im >= 0 (zero maps to zero).
GaussInt canonical(GaussInt z);
/// The unit u with z = u * canonical(z).
GaussInt unit_part(GaussInt z);

struct DivRem {
  GaussInt quotient;
  GaussInt remainder;
};

/// a = q*b + r with 2*norm(r) <= norm(b). The quotient rounds a/b to the
/// nearest Gaussian integer componentwise, ties toward negative infinity.
DivRem divrem(GaussInt a, GaussInt b);

/// Exact quotient a/b; throws std::domain_error if b does not divide a.
GaussInt exact_div(GaussInt a, GaussInt b);
bool divides(GaussInt d, GaussInt a);

/// Canonical-associate gcd; gcd(0, 0) is rejected with std::invalid_argument.
GaussInt gcd(GaussInt a, GaussInt b);
bool coprime(GaussInt a, GaussInt b);

/// The representative of r mod m inside the fundamental parallelogram
/// {x*m + y*i*m : x, y in [0, 1)}.
GaussInt reduce(GaussInt r, GaussInt m);

struct ResidueSystem {
  GaussInt modulus;
  std::vector<GaussInt> representatives;
  bool reduced = false;
};

/// One representative per class of Z[i]/(m), taken from the fundamental
/// parallelogram and listed in (re, im) order. With reduced = true only the
/// classes coprime to m are kept.
ResidueSystem residue_system(GaussInt m, bool reduced);

struct Factorization {
  GaussInt unit{1, 0};
  std::vector<std::pair<GaussInt, int>> prime_powers;

  GaussInt product() const;
};

/// Largest norm factor() accepts (trial division up to 2^25).
inline constexpr Int kMaxFactorNorm = Int{1} << 50;

/// Factorization into canonical Gaussian primes, ordered by (norm, re, im).
Factorization factor(GaussInt m);

/// Size of the reduced residue system mod m.
Int gaussian_phi(GaussInt m);

/// Number of divisors of d up to associates.
Int divisor_count(GaussInt d);

/// s with r*s = 1 mod m, reduced into the canonical residue system.
/// Throws std::invalid_argument for m = 0 and NotInvertible otherwise.
GaussInt inv_mod(GaussInt r, GaussInt m);

double nearest_gaussian_distance(std::complex<double> z);
double nearest_gaussian_distance_sq(std::complex<double> z);

/// Signed offset a - den*round(a/den), in [-den/2, den/2]. den > 0.
Wide nearest_offset(Wide a, Int den);

/// den^2 * ||(re + i*im)/den||^2 computed exactly. den > 0.
Wide nearest_distance_sq_scaled(Wide re, Wide im, Int den);

/// Floor division and non-negative remainder for 128-bit numerators.
Wide floor_div(Wide a, Wide b);
Wide floor_mod(Wide a, Wide b);

}  // namespace lsieve
