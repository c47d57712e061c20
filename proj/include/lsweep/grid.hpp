#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <variant>

#include <Eigen/Core>

namespace lsweep {

using cplx = std::complex<double>;

/// Complex nodal values in grid ordering (x fastest, then z).
using Field = Eigen::VectorXcd;

struct GridOptions {
  /// Smallest accepted 2*pi/(omega*h).
  double min_points_per_wavelength = 6.0;
  double origin_x = 0.0;
  double origin_z = 0.0;
};

/// Uniform collocation grid.
///
/// Nodes are addressed by zero-based pairs (i, j), 0 <= i < nx, 0 <= j < nz,
/// and sit at origin + h*(i + 1, j + 1). Vectors are stored z-major: all of
/// row j = 0 first, then row j = 1, and so on, so a constant-z row is a
/// contiguous block of length nx.
class Grid {
 public:
  Grid(int nx, int nz, double h, double omega, GridOptions options = {});

  int nx() const { return nx_; }
  int nz() const { return nz_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * nz_; }
  double h() const { return h_; }
  double omega() const { return omega_; }
  const GridOptions& options() const { return options_; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  std::pair<int, int> coords(std::size_t k) const {
    return {static_cast<int>(k % nx_), static_cast<int>(k / nx_)};
  }
  bool contains(int i, int j) const {
    return i >= 0 && i < nx_ && j >= 0 && j < nz_;
  }

  double x(int i) const { return options_.origin_x + h_ * (i + 1); }
  double z(int j) const { return options_.origin_z + h_ * (j + 1); }

  double points_per_wavelength() const;

  // Bounding box of the nodes.
  double x_min() const { return x(0); }
  double x_max() const { return x(nx_ - 1); }
  double z_min() const { return z(0); }
  double z_max() const { return z(nz_ - 1); }

 private:
  int nx_;
  int nz_;
  double h_;
  double omega_;
  GridOptions options_;
};

/// Throws std::invalid_argument on bad sizes or too few points per wavelength.
Grid make_grid(int nx, int nz, double h, double omega, GridOptions options = {});

/// n x n nodes on the unit square with h = 1/n.
Grid make_square_grid(int n, double omega, GridOptions options = {});

struct Box {
  double x0 = 0, z0 = 0, x1 = 0, z1 = 0;
  bool contains(double x, double z) const {
    return x >= x0 && x <= x1 && z >= z0 && z <= z1;
  }
};

// Medium profiles. Positions and lengths are in unit coordinates: (0, 0) is
// the first node and (1, 1) the last one, so a profile means the same thing
// at every resolution.

/// sign * amplitude * exp(1 - 1/(1 - r^2/radius^2)) inside the disc.
struct SmoothBump {
  int sign = +1;
  double amplitude = 0.2;
  double center_x = 0.5;
  double center_z = 0.5;
  double radius = 0.35;
};

/// `count` gaussians with widths in [min_width, 1.5 min_width], tapered to
/// compact support at four widths and placed by seeded rejection sampling.
struct GaussianBumps {
  int count = 64;
  double amplitude = 0.2;
  std::uint64_t seed = 1;
  double min_width = 0.015;
};

/// Idealized plasma analog: a negative core of depth `inner_amplitude` inside
/// `ring_radius`, surrounded by a positive ring of half that depth.
struct PlasmaRing {
  double inner_amplitude = -0.5;
  double ring_radius = 0.2;
  double center_x = 0.5;
  double center_z = 0.5;
};

struct ZeroMedium {};

using Profile = std::variant<ZeroMedium, SmoothBump, GaussianBumps, PlasmaRing>;

struct MediumOptions {
  /// Distance of the support from the node hull, as a fraction of its width.
  double margin = 0.1;
};

/// Perturbation m of the squared slowness 1 + m, sampled at the nodes.
struct Medium {
  Field values;
  Box support;

  bool is_zero() const { return values.isZero(0.0); }
};

/// Throws std::invalid_argument if 1 + m <= 0 somewhere or the support
/// leaves the margin.
Medium make_medium(const Profile& profile, const Grid& grid,
                   MediumOptions options = {});

/// exp(i omega (cos(angle) x + sin(angle) z)) at every node.
Field incident_plane_wave(const Grid& grid, double angle);

}  // namespace lsweep
