#include "lsieve/gaussint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsieve {

namespace {

Int add_checked(Int a, Int b) {
  Int out;
  if (__builtin_add_overflow(a, b, &out)) throw ArithmeticOverflow("Gaussian integer addition overflows");
  return out;
}

Int sub_checked(Int a, Int b) {
  Int out;
  if (__builtin_sub_overflow(a, b, &out)) throw ArithmeticOverflow("Gaussian integer subtraction overflows");
  return out;
}

Wide mulmod(Wide a, Wide b, Wide m) { return floor_mod(a * b, m); }

Wide powmod(Wide base, Wide e, Wide m) {
  Wide result = 1;
  base = floor_mod(base, m);
  while (e > 0) {
    if (e & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

// x with x^2 = -1 mod p for a prime p = 1 mod 4.
Int sqrt_minus_one(Int p) {
  for (Int c = 2; c < p; ++c) {
    Wide t = powmod(c, (p - 1) / 4, p);
    if (mulmod(t, t, p) == p - 1) return static_cast<Int>(t);
  }
  throw std::logic_error("no square root of -1 modulo a prime 1 mod 4");
}

// Divide m by the prime pi as often as possible; returns the exponent.
int strip(GaussInt& m, GaussInt pi) {
  int e = 0;
  for (;;) {
    DivRem dr = divrem(m, pi);
    if (!dr.remainder.is_zero()) break;
    m = dr.quotient;
    ++e;
  }
  return e;
}

bool prime_less(const std::pair<GaussInt, int>& a, const std::pair<GaussInt, int>& b) {
  Int na = norm(a.first), nb = norm(b.first);
  if (na != nb) return na < nb;
  return a.first < b.first;
}

}  // namespace

Int checked_narrow(Wide v) {
  if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min())
    throw ArithmeticOverflow("value exceeds the 64-bit range");
  return static_cast<Int>(v);
}

GaussInt operator+(GaussInt a, GaussInt b) { return {add_checked(a.re, b.re), add_checked(a.im, b.im)}; }
GaussInt operator-(GaussInt a, GaussInt b) { return {sub_checked(a.re, b.re), sub_checked(a.im, b.im)}; }
GaussInt operator-(GaussInt a) { return GaussInt{0, 0} - a; }

GaussInt operator*(GaussInt a, GaussInt b) {
  Wide re = static_cast<Wide>(a.re) * b.re - static_cast<Wide>(a.im) * b.im;
  Wide im = static_cast<Wide>(a.re) * b.im + static_cast<Wide>(a.im) * b.re;
  return {checked_narrow(re), checked_narrow(im)};
}

Int norm(GaussInt z) { return checked_narrow(norm_wide(z)); }

GaussInt pow(GaussInt z, unsigned k) {
  GaussInt result{1, 0};
  GaussInt base = z;
  while (k > 0) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k > 0) base *= base;
  }
  return result;
}

GaussInt canonical(GaussInt z) {
  if (z.is_zero()) return z;
  // Rotate by i until re > 0 and im >= 0.
  for (int turn = 0; turn < 4; ++turn) {
    if (z.re > 0 && z.im >= 0) return z;
    z = GaussInt{-z.im, z.re};
  }
  throw std::logic_error("canonical associate not found");
}

GaussInt unit_part(GaussInt z) {
  if (z.is_zero()) throw std::invalid_argument("zero has no unit part");
  GaussInt c = canonical(z);
  for (GaussInt u : {GaussInt{1, 0}, GaussInt{0, 1}, GaussInt{-1, 0}, GaussInt{0, -1}})
    if (u * c == z) return u;
  throw std::logic_error("unit part not found");
}

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Wide floor_mod(Wide a, Wide b) { return a - floor_div(a, b) * b; }

DivRem divrem(GaussInt a, GaussInt b) {
  if (b.is_zero()) throw std::invalid_argument("divrem: division by zero");
  const Wide d = norm_wide(b);
  const Wide wr = static_cast<Wide>(a.re) * b.re + static_cast<Wide>(a.im) * b.im;
  const Wide wi = static_cast<Wide>(a.im) * b.re - static_cast<Wide>(a.re) * b.im;
  // Nearest integer to w/d with halves rounded down: ceil((2w - d) / 2d).
  auto round_down_ties = [d](Wide w) { return -floor_div(-(2 * w - d), 2 * d); };
  GaussInt q{checked_narrow(round_down_ties(wr)), checked_narrow(round_down_ties(wi))};
  return {q, a - q * b};
}

GaussInt exact_div(GaussInt a, GaussInt b) {
  DivRem dr = divrem(a, b);
  if (!dr.remainder.is_zero()) throw std::domain_error("exact_div: divisor does not divide");
  return dr.quotient;
}

bool divides(GaussInt d, GaussInt a) {
  if (d.is_zero()) return a.is_zero();
  return divrem(a, d).remainder.is_zero();
}

GaussInt gcd(GaussInt a, GaussInt b) {
  if (a.is_zero() && b.is_zero()) throw std::invalid_argument("gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    GaussInt r = divrem(a, b).remainder;
    a = b;
    b = r;
  }
  return canonical(a);
}

bool coprime(GaussInt a, GaussInt b) { return gcd(a, b) == GaussInt{1, 0}; }

GaussInt reduce(GaussInt r, GaussInt m) {
  if (m.is_zero()) throw std::invalid_argument("reduce: zero modulus");
  const Wide d = norm_wide(m);
  const Wide wr = static_cast<Wide>(r.re) * m.re + static_cast<Wide>(r.im) * m.im;
  const Wide wi = static_cast<Wide>(r.im) * m.re - static_cast<Wide>(r.re) * m.im;
  GaussInt shift{checked_narrow(floor_div(wr, d)), checked_narrow(floor_div(wi, d))};
  return r - shift * m;
}

ResidueSystem residue_system(GaussInt m, bool reduced) {
  if (m.is_zero()) throw std::invalid_argument("residue_system: zero modulus");
  const Wide d = norm_wide(m);
  // Bounding box of the parallelogram with vertices 0, m, i*m, m + i*m.
  const Int xs[] = {0, m.re, -m.im, m.re - m.im};
  const Int ys[] = {0, m.im, m.re, m.im + m.re};
  const Int x0 = *std::min_element(std::begin(xs), std::end(xs));
  const Int x1 = *std::max_element(std::begin(xs), std::end(xs));
  const Int y0 = *std::min_element(std::begin(ys), std::end(ys));
  const Int y1 = *std::max_element(std::begin(ys), std::end(ys));

  ResidueSystem out{m, {}, reduced};
  out.representatives.reserve(static_cast<std::size_t>(d));
  for (Int x = x0; x <= x1; ++x) {
    for (Int y = y0; y <= y1; ++y) {
      const Wide wr = static_cast<Wide>(x) * m.re + static_cast<Wide>(y) * m.im;
      const Wide wi = static_cast<Wide>(y) * m.re - static_cast<Wide>(x) * m.im;
      if (wr < 0 || wr >= d || wi < 0 || wi >= d) continue;
      GaussInt p{x, y};
      if (reduced && !coprime(p, m)) continue;
      out.representatives.push_back(p);
    }
  }
  return out;
}

GaussInt Factorization::product() const {
  GaussInt p = unit;
  for (const auto& [prime, e] : prime_powers) p *= pow(prime, static_cast<unsigned>(e));
  return p;
}

Factorization factor(GaussInt m) {
  if (m.is_zero()) throw std::invalid_argument("factor: zero");
  Int n = norm(m);
  if (n > kMaxFactorNorm) throw std::domain_error("factor: norm beyond the trial-division range");

  Factorization f;
  GaussInt rest = m;

  auto split_prime = [&](Int p) {
    if (p == 2) {
      GaussInt pi{1, 1};
      if (int e = strip(rest, pi)) f.prime_powers.emplace_back(pi, e);
    } else if (p % 4 == 3) {
      GaussInt pi{p, 0};
      if (int e = strip(rest, pi)) f.prime_powers.emplace_back(pi, e);
    } else {
      GaussInt pi = gcd(GaussInt{p, 0}, GaussInt{sqrt_minus_one(p), 1});
      GaussInt pi_bar = canonical(conj(pi));
      if (int e = strip(rest, pi)) f.prime_powers.emplace_back(pi, e);
      if (int e = strip(rest, pi_bar)) f.prime_powers.emplace_back(pi_bar, e);
    }
  };

  for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    split_prime(p);
  }
  if (n > 1) split_prime(n);

  if (!rest.is_unit()) throw std::logic_error("factor: incomplete factorization");
  f.unit = rest;
  std::sort(f.prime_powers.begin(), f.prime_powers.end(), prime_less);
  return f;
}

Int gaussian_phi(GaussInt m) {
  Factorization f = factor(m);
  Int phi = 1;
  for (const auto& [prime, e] : f.prime_powers) {
    const Int np = norm(prime);
    Int term = np - 1;
    for (int i = 1; i < e; ++i) term *= np;
    phi *= term;
  }
  return phi;
}

Int divisor_count(GaussInt d) {
  Factorization f = factor(d);
  Int count = 1;
  for (const auto& pp : f.prime_powers) count *= pp.second + 1;
  return count;
}

GaussInt inv_mod(GaussInt r, GaussInt m) {
  if (m.is_zero()) throw std::invalid_argument("inv_mod: zero modulus");
  if (m.is_unit()) return GaussInt{0, 0};
  // Invariant: r0 = s0 * r and r1 = s1 * r modulo m.
  GaussInt r0 = m, s0{0, 0};
  GaussInt r1 = reduce(r, m), s1{1, 0};
  while (!r1.is_zero()) {
    DivRem dr = divrem(r0, r1);
    GaussInt s2 = reduce(s0 - dr.quotient * s1, m);
    r0 = r1;
    s0 = s1;
    r1 = dr.remainder;
    s1 = s2;
  }
  if (!r0.is_unit()) throw NotInvertible("inv_mod: element is not invertible modulo m");
  return reduce(s0 * conj(r0), m);
}

double nearest_gaussian_distance_sq(std::complex<double> z) {
  const double dx = std::remainder(z.real(), 1.0);
  const double dy = std::remainder(z.imag(), 1.0);
  return dx * dx + dy * dy;
}

double nearest_gaussian_distance(std::complex<double> z) { return std::sqrt(nearest_gaussian_distance_sq(z)); }

Wide nearest_offset(Wide a, Int den) {
  Wide r = floor_mod(a, den);
  if (2 * r > den) r -= den;
  return r;
}

Wide nearest_distance_sq_scaled(Wide re, Wide im, Int den) {
  const Wide x = nearest_offset(re, den);
  const Wide y = nearest_offset(im, den);
  return x * x + y * y;
}

}  // namespace lsieve
