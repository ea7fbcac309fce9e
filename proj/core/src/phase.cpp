#include "lsieve/phase.hpp"

#include <cmath>

namespace lsieve {

namespace {

Wide mul_checked(Wide a, Wide b) {
  Wide out;
  if (__builtin_mul_overflow(a, b, &out)) throw ArithmeticOverflow("128-bit product overflows");
  return out;
}

Wide add_checked(Wide a, Wide b) {
  Wide out;
  if (__builtin_add_overflow(a, b, &out)) throw ArithmeticOverflow("128-bit sum overflows");
  return out;
}

Wide sub_checked(Wide a, Wide b) {
  Wide out;
  if (__builtin_sub_overflow(a, b, &out)) throw ArithmeticOverflow("128-bit difference overflows");
  return out;
}

}  // namespace

WideGauss operator*(WideGauss a, WideGauss b) {
  return {sub_checked(mul_checked(a.re, b.re), mul_checked(a.im, b.im)),
          add_checked(mul_checked(a.re, b.im), mul_checked(a.im, b.re))};
}

WideGauss operator+(WideGauss a, WideGauss b) { return {add_checked(a.re, b.re), add_checked(a.im, b.im)}; }
WideGauss operator-(WideGauss a, WideGauss b) { return {sub_checked(a.re, b.re), sub_checked(a.im, b.im)}; }

std::complex<double> unit_phase(Wide num, Wide den) {
  if (den <= 0) throw std::invalid_argument("unit_phase: denominator must be positive");
  const Wide r = floor_mod(num, den);
  return e(static_cast<double>(r) / static_cast<double>(den));
}

PhaseTable::PhaseTable(Int den) : den_(den) {
  if (den <= 0) throw std::invalid_argument("PhaseTable: denominator must be positive");
  table_.resize(static_cast<std::size_t>(den));
  for (Int k = 0; k < den; ++k)
    table_[static_cast<std::size_t>(k)] = e(static_cast<double>(k) / static_cast<double>(den));
}

}  // namespace lsieve
