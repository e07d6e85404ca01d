#pragma once

#include <complex>

namespace dualopa::detail {

// Integer power by repeated squaring; ipow(z, 0) == 1 for every z, including 0.
inline std::complex<double> ipow(std::complex<double> base, int exp) {
  std::complex<double> result{1.0, 0.0};
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

}  // namespace dualopa::detail
