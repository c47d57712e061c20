#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "lsweep/greens_kernel.hpp"
#include "lsweep/grid.hpp"
#include "lsweep/ls_operator.hpp"
#include "quadrature.hpp"
#include "test_util.hpp"

using namespace lsweep;
using lsweep::testing::integrate;
using lsweep::testing::random_field;
using lsweep::testing::rel_err;

namespace {

// Green's function through the standard library's Bessel functions.
std::complex<double> green(double r, double omega) {
  return std::complex<double>(0, -0.25) *
         std::complex<double>(std::cyl_bessel_j(0.0, omega * r), std::cyl_neumann(0.0, omega * r));
}

}  // namespace

TEST(Grid, GeometryAndOrdering) {
  const Grid g = make_square_grid(16, 10.0);
  EXPECT_DOUBLE_EQ(g.h(), 1.0 / 16);
  EXPECT_EQ(g.index(3, 2), 2u * 16 + 3);
  EXPECT_EQ(g.coords(g.index(5, 7)), std::make_pair(5, 7));
  EXPECT_DOUBLE_EQ(g.x(0), 1.0 / 16);
  EXPECT_DOUBLE_EQ(g.z_max(), 1.0);
  EXPECT_NEAR(g.points_per_wavelength(), 2 * std::numbers::pi * 16 / 10, 1e-12);
}

TEST(Grid, RejectsUnderResolution) {
  EXPECT_THROW(make_square_grid(16, 17.0), std::invalid_argument);
  EXPECT_NO_THROW(make_square_grid(16, 16.0));
  EXPECT_THROW(make_grid(0, 4, 0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(make_grid(4, 4, -0.1, 1.0), std::invalid_argument);
}

TEST(Medium, ProfilesRespectConstraints) {
  const Grid g = make_square_grid(40, 20.0);
  EXPECT_TRUE(make_medium(ZeroMedium{}, g).is_zero());
  const Medium bump = make_medium(SmoothBump{-1, 0.3}, g);
  EXPECT_NEAR(bump.values.real().minCoeff(), -0.3, 0.02);
  EXPECT_EQ(bump.values.imag().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(make_medium(SmoothBump{-1, 1.2}, g), std::invalid_argument);
  EXPECT_THROW(make_medium(SmoothBump{+1, 0.2, 0.5, 0.5, 0.6}, g), std::invalid_argument);
  const Medium blobs = make_medium(GaussianBumps{16, 0.2, 7, 0.02}, g);
  EXPECT_GT((1.0 + blobs.values.real().array()).minCoeff(), 0.0);
  EXPECT_EQ(blobs.values, make_medium(GaussianBumps{16, 0.2, 7, 0.02}, g).values);
  const Medium ring = make_medium(PlasmaRing{}, g);
  EXPECT_LT(ring.values.real().minCoeff(), -0.4);
  EXPECT_GT(ring.values.real().maxCoeff(), 0.2);
}

TEST(Medium, PlaneWave) {
  const Grid g = make_square_grid(8, 4.0);
  const Field u = incident_plane_wave(g, 0.3);
  const std::size_t k = g.index(3, 5);
  const double phase = 4.0 * (std::cos(0.3) * g.x(3) + std::sin(0.3) * g.z(5));
  EXPECT_NEAR(std::abs(u[k] - std::polar(1.0, phase)), 0.0, 1e-14);
}

TEST(Kernel, GreensValueMatchesStandardLibrary) {
  for (double r : {1e-4, 0.01, 0.3, 2.0, 17.0}) {
    EXPECT_NEAR(std::abs(greens_value(r, 3.0) - green(r, 3.0)), 0.0, 1e-12 * std::abs(green(r, 3.0)));
  }
}

TEST(Kernel, CellIntegralMatchesPolarQuadrature) {
  for (double h : {0.1, 0.02, 0.005}) {
    for (double omega : {1.0, 10.0, 60.0}) {
      // Eight triangles of the square; r = R u^2 removes the log singularity.
      auto inner = [&](double theta) {
        const double big_r = 0.5 * h / std::cos(theta);
        return integrate([&](double u) { return green(big_r * u * u, omega) * (big_r * u * u) * (2 * big_r * u); },
                         0.0, 1.0, 4);
      };
      const auto ref = 8.0 * integrate(inner, 0.0, std::numbers::pi / 4, 4);
      EXPECT_NEAR(std::abs(greens_cell_integral(h, omega) - ref), 0.0, 1e-10 * std::abs(ref))
          << h << " " << omega;
    }
  }
}

TEST(Kernel, CorrectedDiagonalIsFourthOrder) {
  const double omega = 10.0, s = 0.08;
  auto phi = [&](double r2) { return std::exp(-r2 / (s * s)); };
  // Radial reference with r = t^2.
  const auto ref = 2 * std::numbers::pi *
                   integrate([&](double t) { return green(t * t, omega) * phi(t * t * t * t) * (t * t) * (2 * t); },
                             0.0, std::sqrt(8 * s), 64);
  auto error = [&](double h, DiagonalRule rule) {
    const int reach = static_cast<int>(std::ceil(8 * s / h));
    std::complex<double> sum = (rule == DiagonalRule::Corrected ? greens_corrected_diagonal(h, omega)
                                                                : greens_cell_integral(h, omega));
    for (int j = -reach; j <= reach; ++j) {
      for (int i = -reach; i <= reach; ++i) {
        if (i == 0 && j == 0) continue;
        const double r2 = h * h * (i * i + j * j);
        sum += h * h * green(std::sqrt(r2), omega) * phi(r2);
      }
    }
    return std::abs(sum - ref) / std::abs(ref);
  };
  const double c1 = error(1.0 / 40, DiagonalRule::Corrected);
  const double c2 = error(1.0 / 80, DiagonalRule::Corrected);
  const double a1 = error(1.0 / 40, DiagonalRule::CellAverage);
  const double a2 = error(1.0 / 80, DiagonalRule::CellAverage);
  EXPECT_GT(std::log2(c1 / c2), 3.5);
  EXPECT_GT(std::log2(a1 / a2), 1.8);
  EXPECT_LT(c2, a2);
}

TEST(Kernel, ConvolutionMatchesDirectSums) {
  std::mt19937_64 rng(3);
  for (int nx = 4; nx <= 7; ++nx) {
    for (int nz = 4; nz <= 7; ++nz) {
      const Grid g = make_grid(nx, nz, 0.1, 5.0);
      const KernelTable k(g);
      const Field f = random_field(rng, g.size());
      Field ref = Field::Zero(f.size());
      for (std::size_t a = 0; a < g.size(); ++a) {
        const auto [ia, ja] = g.coords(a);
        for (std::size_t b = 0; b < g.size(); ++b) {
          const auto [ib, jb] = g.coords(b);
          const double r = g.h() * std::hypot(ia - ib, ja - jb);
          ref[a] += (a == b ? greens_cell_integral(g.h(), 5.0) : g.h() * g.h() * green(r, 5.0)) * f[b];
        }
      }
      EXPECT_LT(rel_err(k.convolve(f), ref), 1e-12) << nx << "x" << nz;
    }
  }
}

TEST(Kernel, SamplesAndValues) {
  const Grid g = make_square_grid(8, 8.0);
  const KernelTable k(g);
  EXPECT_EQ(k.sample(0, 0), k.diagonal_weight());
  EXPECT_EQ(k.sample(2, -3), k.sample(-2, 3));
  EXPECT_THROW(k.sample(8, 0), std::out_of_range);
  EXPECT_NEAR(std::abs(k.value(20, 1) - g.h() * g.h() * green(g.h() * std::hypot(20, 1), 8.0)), 0.0, 1e-15);
  EXPECT_GE(k.padded_nx(), 15);
  EXPECT_EQ(efficient_transform_length(11), 12);
  EXPECT_EQ(efficient_transform_length(13), 14);
  EXPECT_EQ(efficient_transform_length(64), 64);
}

TEST(LSOperator, ApplyAndRhs) {
  std::mt19937_64 rng(5);
  const Grid g = make_square_grid(12, 8.0);
  const KernelTable k(g);
  const Medium m = make_medium(SmoothBump{}, g);
  const LSOperator op(k, m);
  const Field u = random_field(rng, g.size());
  const Field m_u = m.values.cwiseProduct(u);
  EXPECT_LT(rel_err(op.apply(u), u + 64.0 * k.convolve(m_u)), 1e-14);
  EXPECT_LT(rel_err(op.rhs(u), -64.0 * k.convolve(m_u)), 1e-14);
  EXPECT_THROW(op.apply(Field::Zero(3)), std::invalid_argument);
}
