#pragma once

#include <complex>

namespace lsweep::special {

// Integer-order Bessel functions of real positive argument. All of them throw
// std::domain_error for x <= 0 or non-finite x.

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);

/// H^(1)_0(x) = J0(x) + i Y0(x).
std::complex<double> hankel1_0(double x);

/// H^(1)_1(x) = J1(x) + i Y1(x).
std::complex<double> hankel1_1(double x);

}  // namespace lsweep::special
