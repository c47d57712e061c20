#include "lsweep/special_functions.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>

namespace lsweep::special {

namespace {

void check_argument(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    std::ostringstream msg;
    msg << "Bessel argument must be positive and finite, got " << x;
    throw std::domain_error(msg.str());
  }
}

}  // namespace

double bessel_j0(double x) {
  check_argument(x);
  return boost::math::cyl_bessel_j(0, x);
}

double bessel_j1(double x) {
  check_argument(x);
  return boost::math::cyl_bessel_j(1, x);
}

double bessel_y0(double x) {
  check_argument(x);
  return boost::math::cyl_neumann(0, x);
}

double bessel_y1(double x) {
  check_argument(x);
  return boost::math::cyl_neumann(1, x);
}

std::complex<double> hankel1_0(double x) {
  check_argument(x);
  return {boost::math::cyl_bessel_j(0, x), boost::math::cyl_neumann(0, x)};
}

std::complex<double> hankel1_1(double x) {
  check_argument(x);
  return {boost::math::cyl_bessel_j(1, x), boost::math::cyl_neumann(1, x)};
}

}  // namespace lsweep::special
