#include "lsweep/grid.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lsweep {

Grid::Grid(int nx, int nz, double h, double omega, GridOptions options)
    : nx_(nx), nz_(nz), h_(h), omega_(omega), options_(options) {
  if (nx < 4 || nz < 4) {
    throw std::invalid_argument("grid needs at least 4 nodes per direction");
  }
  if (!(h > 0) || !(omega > 0) || !std::isfinite(h) || !std::isfinite(omega)) {
    throw std::invalid_argument("grid step and frequency must be positive");
  }
  if (points_per_wavelength() < options_.min_points_per_wavelength) {
    std::ostringstream msg;
    msg << "grid resolves " << points_per_wavelength()
        << " points per wavelength, minimum is "
        << options_.min_points_per_wavelength;
    throw std::invalid_argument(msg.str());
  }
}

double Grid::points_per_wavelength() const {
  return 2.0 * std::numbers::pi / (omega_ * h_);
}

Grid make_grid(int nx, int nz, double h, double omega, GridOptions options) {
  return Grid(nx, nz, h, omega, options);
}

Grid make_square_grid(int n, double omega, GridOptions options) {
  return Grid(n, n, 1.0 / n, omega, options);
}

namespace {

// C-infinity bump with value 1 at 0 and support [0, 1).
double smooth_bump(double rho) {
  if (rho >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - rho * rho));
}

// C2 taper (1 - t^2)^3 on [0, 1).
double taper(double t) {
  if (t >= 1.0) return 0.0;
  const double s = 1.0 - t * t;
  return s * s * s;
}

// Uniform double in [0, 1) from the top 53 bits; stable across standard
// library implementations, unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct UnitFrame {
  double x0, z0, wx, wz;

  double ux(const Grid& g, int i) const { return (g.x(i) - x0) / wx; }
  double uz(const Grid& g, int j) const { return (g.z(j) - z0) / wz; }
};

UnitFrame unit_frame(const Grid& g) {
  return {g.x_min(), g.z_min(), g.x_max() - g.x_min(), g.z_max() - g.z_min()};
}

void require_inside_margin(double cx, double cz, double reach, double margin,
                           const char* what) {
  const double lo = margin;
  const double hi = 1.0 - margin;
  if (cx - reach < lo || cx + reach > hi || cz - reach < lo || cz + reach > hi) {
    std::ostringstream msg;
    msg << what << " support touches the boundary margin (" << margin << ")";
    throw std::invalid_argument(msg.str());
  }
}

Box unit_box_to_physical(const UnitFrame& f, double ux0, double uz0, double ux1,
                         double uz1) {
  return {f.x0 + ux0 * f.wx, f.z0 + uz0 * f.wz, f.x0 + ux1 * f.wx,
          f.z0 + uz1 * f.wz};
}

Medium bump_medium(const SmoothBump& p, const Grid& g, const MediumOptions& o) {
  if (p.sign != 1 && p.sign != -1) {
    throw std::invalid_argument("smooth bump sign must be +1 or -1");
  }
  if (p.amplitude < 0 || !(p.radius > 0)) {
    throw std::invalid_argument("smooth bump needs amplitude >= 0, radius > 0");
  }
  if (p.sign < 0 && p.amplitude >= 1.0) {
    throw std::invalid_argument("smooth bump amplitude makes 1 + m <= 0");
  }
  require_inside_margin(p.center_x, p.center_z, p.radius, o.margin, "smooth bump");
  const UnitFrame f = unit_frame(g);
  Medium m;
  m.values = Field::Zero(static_cast<Eigen::Index>(g.size()));
  m.support = unit_box_to_physical(f, p.center_x - p.radius, p.center_z - p.radius,
                                   p.center_x + p.radius, p.center_z + p.radius);
  const double a = p.sign * p.amplitude;
  for (int j = 0; j < g.nz(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double r = std::hypot(f.ux(g, i) - p.center_x, f.uz(g, j) - p.center_z);
      m.values[g.index(i, j)] = a * smooth_bump(r / p.radius);
    }
  }
  return m;
}

Medium gaussian_medium(const GaussianBumps& p, const Grid& g,
                       const MediumOptions& o) {
  if (p.count < 0 || !(p.min_width > 0)) {
    throw std::invalid_argument("gaussian bumps need count >= 0, min_width > 0");
  }
  struct Bump {
    double cx, cz, width;
  };
  std::mt19937_64 rng(p.seed);
  std::vector<Bump> bumps;
  const int max_tries = 200000;
  int tries = 0;
  while (static_cast<int>(bumps.size()) < p.count) {
    if (++tries > max_tries) {
      throw std::invalid_argument(
          "gaussian bumps: could not place all bumps inside the margin");
    }
    const double width = p.min_width * (1.0 + 0.5 * unit_uniform(rng));
    const double reach = 4.0 * width;
    const double lo = o.margin + reach;
    const double hi = 1.0 - o.margin - reach;
    if (hi <= lo) {
      throw std::invalid_argument("gaussian bumps too wide for the domain");
    }
    const double cx = lo + (hi - lo) * unit_uniform(rng);
    const double cz = lo + (hi - lo) * unit_uniform(rng);
    bool clear = true;
    for (const Bump& b : bumps) {
      if (std::hypot(cx - b.cx, cz - b.cz) < 2.0 * std::max(width, b.width)) {
        clear = false;
        break;
      }
    }
    if (clear) bumps.push_back({cx, cz, width});
  }

  const UnitFrame f = unit_frame(g);
  Medium m;
  m.values = Field::Zero(static_cast<Eigen::Index>(g.size()));
  m.support = unit_box_to_physical(f, o.margin, o.margin, 1 - o.margin, 1 - o.margin);
  for (int j = 0; j < g.nz(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double ux = f.ux(g, i);
      const double uz = f.uz(g, j);
      double v = 0;
      for (const Bump& b : bumps) {
        const double r = std::hypot(ux - b.cx, uz - b.cz);
        if (r >= 4.0 * b.width) continue;
        v += p.amplitude * std::exp(-0.5 * r * r / (b.width * b.width)) *
             taper(r / (4.0 * b.width));
      }
      m.values[g.index(i, j)] = v;
    }
  }
  return m;
}

Medium plasma_medium(const PlasmaRing& p, const Grid& g, const MediumOptions& o) {
  if (!(p.ring_radius > 0)) {
    throw std::invalid_argument("plasma ring radius must be positive");
  }
  if (p.inner_amplitude <= -1.0) {
    throw std::invalid_argument("plasma inner amplitude makes 1 + m <= 0");
  }
  const double ring_width = 0.5 * p.ring_radius;
  const double reach = p.ring_radius + ring_width;
  require_inside_margin(p.center_x, p.center_z, reach, o.margin, "plasma ring");
  const UnitFrame f = unit_frame(g);
  Medium m;
  m.values = Field::Zero(static_cast<Eigen::Index>(g.size()));
  m.support = unit_box_to_physical(f, p.center_x - reach, p.center_z - reach,
                                   p.center_x + reach, p.center_z + reach);
  const double ring_amplitude = -0.5 * p.inner_amplitude;
  for (int j = 0; j < g.nz(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double r = std::hypot(f.ux(g, i) - p.center_x, f.uz(g, j) - p.center_z);
      const double core = p.inner_amplitude * smooth_bump(r / p.ring_radius);
      const double ring =
          ring_amplitude * smooth_bump(std::abs(r - p.ring_radius) / ring_width);
      m.values[g.index(i, j)] = core + ring;
    }
  }
  return m;
}

}  // namespace

Medium make_medium(const Profile& profile, const Grid& grid, MediumOptions options) {
  if (!(options.margin >= 0) || options.margin >= 0.5) {
    throw std::invalid_argument("medium margin must lie in [0, 0.5)");
  }
  Medium m = std::visit(
      [&](const auto& p) -> Medium {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ZeroMedium>) {
          return {Field::Zero(static_cast<Eigen::Index>(grid.size())), Box{}};
        } else if constexpr (std::is_same_v<P, SmoothBump>) {
          return bump_medium(p, grid, options);
        } else if constexpr (std::is_same_v<P, GaussianBumps>) {
          return gaussian_medium(p, grid, options);
        } else {
          return plasma_medium(p, grid, options);
        }
      },
      profile);
  for (Eigen::Index k = 0; k < m.values.size(); ++k) {
    if (!(1.0 + m.values[k].real() > 0.0)) {
      throw std::invalid_argument("medium has 1 + m <= 0 at some node");
    }
  }
  return m;
}

Field incident_plane_wave(const Grid& grid, double angle) {
  const double kx = grid.omega() * std::cos(angle);
  const double kz = grid.omega() * std::sin(angle);
  Field u(static_cast<Eigen::Index>(grid.size()));
  for (int j = 0; j < grid.nz(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      u[grid.index(i, j)] = std::polar(1.0, kx * grid.x(i) + kz * grid.z(j));
    }
  }
  return u;
}

}  // namespace lsweep
