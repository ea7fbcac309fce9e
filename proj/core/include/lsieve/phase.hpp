// Exact rational phases e(num/den) for the exponential sums.
//
// The numerator of every phase in the library is an integer built from
// Gaussian-integer products; it is reduced modulo the denominator before any
// floating-point work so large norms never cost precision.

#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "lsieve/gaussint.hpp"

namespace lsieve {

/// Gaussian integer with 128-bit components, for exact intermediate products.
struct WideGauss {
  Wide re = 0;
  Wide im = 0;

  WideGauss() = default;
  WideGauss(Wide r, Wide i) : re(r), im(i) {}
  WideGauss(GaussInt z) : re(z.re), im(z.im) {}
};

WideGauss operator*(WideGauss a, WideGauss b);
WideGauss operator+(WideGauss a, WideGauss b);
WideGauss operator-(WideGauss a, WideGauss b);
inline WideGauss conj(WideGauss z) { return {z.re, -z.im}; }

/// e(x) = exp(2*pi*i*x).
inline std::complex<double> e(double x) {
  return std::polar(1.0, 2.0 * std::numbers::pi * x);
}

/// e(num/den) with num reduced modulo den in exact arithmetic. den > 0.
std::complex<double> unit_phase(Wide num, Wide den);

/// Lookup table of e(k/den) for k in [0, den).
class PhaseTable {
 public:
  explicit PhaseTable(Int den);

  Int denominator() const { return den_; }
  std::complex<double> operator()(Wide num) const {
    return table_[static_cast<std::size_t>(floor_mod(num, den_))];
  }

 private:
  Int den_;
  std::vector<std::complex<double>> table_;
};

/// Largest denominator for which the sum evaluators build a PhaseTable.
inline constexpr Int kMaxPhaseTable = Int{1} << 22;

}  // namespace lsieve
