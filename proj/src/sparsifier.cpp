#include "lsweep/sparsifier.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

namespace lsweep {

StencilClass classify(bool x_low, bool x_high, bool z_low, bool z_high) {
  if (x_low && x_high) throw std::invalid_argument("classify: x_low and x_high");
  if (z_low && z_high) throw std::invalid_argument("classify: z_low and z_high");
  if (z_low) {
    if (x_low) return StencilClass::SouthWest;
    if (x_high) return StencilClass::SouthEast;
    return StencilClass::South;
  }
  if (z_high) {
    if (x_low) return StencilClass::NorthWest;
    if (x_high) return StencilClass::NorthEast;
    return StencilClass::North;
  }
  if (x_low) return StencilClass::West;
  if (x_high) return StencilClass::East;
  return StencilClass::Interior;
}

const char* to_string(StencilClass c) {
  switch (c) {
    case StencilClass::Interior: return "interior";
    case StencilClass::West: return "west";
    case StencilClass::East: return "east";
    case StencilClass::South: return "south";
    case StencilClass::North: return "north";
    case StencilClass::SouthWest: return "south-west";
    case StencilClass::SouthEast: return "south-east";
    case StencilClass::NorthWest: return "north-west";
    case StencilClass::NorthEast: return "north-east";
  }
  return "?";
}

namespace {

struct HalfPlanes {
  bool x_low = false, x_high = false, z_low = false, z_high = false;

  bool admits(int dx, int dz) const {
    return !(x_low && dx < 0) && !(x_high && dx > 0) && !(z_low && dz < 0) &&
           !(z_high && dz > 0);
  }
};

HalfPlanes half_planes(StencilClass c) {
  HalfPlanes p;
  switch (c) {
    case StencilClass::Interior: break;
    case StencilClass::West: p.x_low = true; break;
    case StencilClass::East: p.x_high = true; break;
    case StencilClass::South: p.z_low = true; break;
    case StencilClass::North: p.z_high = true; break;
    case StencilClass::SouthWest: p.x_low = p.z_low = true; break;
    case StencilClass::SouthEast: p.x_high = p.z_low = true; break;
    case StencilClass::NorthWest: p.x_low = p.z_high = true; break;
    case StencilClass::NorthEast: p.x_high = p.z_high = true; break;
  }
  return p;
}

}  // namespace

std::vector<Offset> stencil_offsets(StencilClass c) {
  const HalfPlanes p = half_planes(c);
  std::vector<Offset> out;
  for (int dz = -1; dz <= 1; ++dz) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (p.admits(dx, dz)) out.push_back({dx, dz});
    }
  }
  return out;
}

std::vector<Offset> stencil_targets(StencilClass c, int window_radius) {
  const HalfPlanes p = half_planes(c);
  std::vector<Offset> out;
  for (int dz = -window_radius; dz <= window_radius; ++dz) {
    for (int dx = -window_radius; dx <= window_radius; ++dx) {
      if (std::abs(dx) <= 1 && std::abs(dz) <= 1) continue;
      if (p.admits(dx, dz)) out.push_back({dx, dz});
    }
  }
  return out;
}

StencilClass node_class(Node k, const Grid& grid) {
  return classify(k.i == 0, k.i == grid.nx() - 1, k.j == 0, k.j == grid.nz() - 1);
}

std::vector<Node> neighbor_set(Node k, const Grid& grid) {
  if (!grid.contains(k.i, k.j)) {
    throw std::out_of_range("neighbor_set: node outside the grid");
  }
  std::vector<Node> out;
  for (const Offset& o : stencil_offsets(node_class(k, grid))) {
    out.push_back({k.i + o.dx, k.j + o.dz});
  }
  return out;
}

Eigen::MatrixXcd stencil_target_matrix(StencilClass c, const KernelTable& kernel,
                                       int window_radius) {
  const auto mu = stencil_offsets(c);
  const auto targets = stencil_targets(c, window_radius);
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(mu.size()),
                     static_cast<Eigen::Index>(targets.size()));
  for (std::size_t a = 0; a < mu.size(); ++a) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      m(a, t) = kernel.value(mu[a].dx - targets[t].dx, mu[a].dz - targets[t].dz);
    }
  }
  return m;
}

StencilSet compute_stencils(const Grid& grid, const KernelTable& kernel,
                            StencilOptions options) {
  if (options.window_radius < 2) {
    throw std::invalid_argument("stencil window radius must be at least 2");
  }
  std::array<Stencil, kStencilClassCount> classes;
  for (std::size_t ci = 0; ci < kStencilClassCount; ++ci) {
    const auto c = static_cast<StencilClass>(ci);
    Stencil st;
    st.offsets = stencil_offsets(c);
    const Eigen::MatrixXcd target = stencil_target_matrix(c, kernel, options.window_radius);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(target, Eigen::ComputeFullU);
    const auto& sigma = svd.singularValues();
    if (sigma(0) < 1e-14 * kernel.grid().h() * kernel.grid().h()) {
      std::ostringstream msg;
      msg << "degenerate stencil target matrix for class " << to_string(c);
      throw std::runtime_error(msg.str());
    }
    const Eigen::Index last = sigma.size() - 1;
    st.residual = sigma(last);
    Eigen::VectorXcd alpha = svd.matrixU().col(last).conjugate();

    // Fix the free phase: centre coefficient real positive.
    Eigen::Index centre = 0;
    for (std::size_t a = 0; a < st.offsets.size(); ++a) {
      if (st.offsets[a] == Offset{0, 0}) centre = static_cast<Eigen::Index>(a);
    }
    if (std::abs(alpha(centre)) > 0) {
      alpha *= std::conj(alpha(centre)) / std::abs(alpha(centre));
    }
    alpha.normalize();
    alpha(centre) = alpha(centre).real();
    st.alpha.assign(alpha.data(), alpha.data() + alpha.size());

    st.near_field.assign(st.offsets.size(), cplx{});
    for (std::size_t b = 0; b < st.offsets.size(); ++b) {
      cplx acc{};
      for (std::size_t a = 0; a < st.offsets.size(); ++a) {
        acc += st.alpha[a] * kernel.value(st.offsets[a].dx - st.offsets[b].dx,
                                          st.offsets[a].dz - st.offsets[b].dz);
      }
      st.near_field[b] = acc;
    }
    classes[ci] = std::move(st);
  }
  return StencilSet(std::move(classes), grid.omega(), options.window_radius);
}

Field apply_A(const StencilSet& stencils, const Grid& grid, const Field& f) {
  if (f.size() != static_cast<Eigen::Index>(grid.size())) {
    throw std::invalid_argument("apply_A: field size does not match the grid");
  }
  Field out(f.size());
  for (int j = 0; j < grid.nz(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const Stencil& st = stencils.at(node_class({i, j}, grid));
      cplx acc{};
      for (std::size_t a = 0; a < st.offsets.size(); ++a) {
        acc += st.alpha[a] * f[grid.index(i + st.offsets[a].dx, j + st.offsets[a].dz)];
      }
      out[grid.index(i, j)] = acc;
    }
  }
  return out;
}

void sparsified_row(const Stencil& stencil, double omega, std::span<const cplx> m,
                    std::span<cplx> out) {
  const double w2 = omega * omega;
  for (std::size_t b = 0; b < stencil.offsets.size(); ++b) {
    out[b] = stencil.alpha[b] + w2 * m[b] * stencil.near_field[b];
  }
}

SparseOperator::SparseOperator(const Grid& grid)
    : grid_(grid),
      cols_(grid.size() * kSlots, 0),
      vals_(grid.size() * kSlots, cplx{}),
      counts_(grid.size(), 0) {}

void SparseOperator::set_row(std::size_t k, std::span<const std::int32_t> cols,
                             std::span<const cplx> vals) {
  if (cols.size() > static_cast<std::size_t>(kSlots) || cols.size() != vals.size()) {
    throw std::invalid_argument("set_row: bad row length");
  }
  counts_[k] = static_cast<std::uint8_t>(cols.size());
  for (std::size_t e = 0; e < cols.size(); ++e) {
    cols_[k * kSlots + e] = cols[e];
    vals_[k * kSlots + e] = vals[e];
  }
}

cplx SparseOperator::entry(std::size_t k, std::size_t j) const {
  for (int e = 0; e < counts_[k]; ++e) {
    if (static_cast<std::size_t>(cols_[k * kSlots + e]) == j) return vals_[k * kSlots + e];
  }
  return {};
}

Field SparseOperator::apply(const Field& x) const {
  if (x.size() != static_cast<Eigen::Index>(size())) {
    throw std::invalid_argument("SparseOperator::apply: size mismatch");
  }
  Field y(x.size());
  for (std::size_t k = 0; k < size(); ++k) {
    cplx acc{};
    const std::size_t base = k * kSlots;
    for (int e = 0; e < counts_[k]; ++e) acc += vals_[base + e] * x[cols_[base + e]];
    y[k] = acc;
  }
  return y;
}

SparseOperator SparseOperator::transpose() const {
  SparseOperator t(grid_);
  for (std::size_t k = 0; k < size(); ++k) {
    for (int e = 0; e < counts_[k]; ++e) {
      const std::size_t j = static_cast<std::size_t>(cols_[k * kSlots + e]);
      const int slot = t.counts_[j]++;
      if (slot >= kSlots) throw std::logic_error("transpose: pattern not symmetric");
      t.cols_[j * kSlots + slot] = static_cast<std::int32_t>(k);
      t.vals_[j * kSlots + slot] = vals_[k * kSlots + e];
    }
  }
  return t;
}

Eigen::MatrixXcd SparseOperator::row_block(int row, int col) const {
  const int nx = grid_.nx();
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(nx, nx);
  for (int a = 0; a < nx; ++a) {
    const std::size_t k = grid_.index(a, row);
    for (int e = 0; e < counts_[k]; ++e) {
      const auto [bi, bj] = grid_.coords(static_cast<std::size_t>(cols_[k * kSlots + e]));
      if (bj == col) b(a, bi) = vals_[k * kSlots + e];
    }
  }
  return b;
}

void SparseOperator::write_triplets(std::ostream& out) const {
  std::size_t nnz = 0;
  for (auto c : counts_) nnz += c;
  out << "# lsweep-triplets v1 " << size() << " " << nnz << "\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < size(); ++k) {
    for (int e = 0; e < counts_[k]; ++e) {
      const cplx v = vals_[k * kSlots + e];
      out << k << " " << cols_[k * kSlots + e] << " " << v.real() << " " << v.imag()
          << "\n";
    }
  }
}

SparseOperator assemble_C(const StencilSet& stencils, const Medium& medium,
                          const KernelTable& kernel) {
  const Grid& grid = kernel.grid();
  if (medium.values.size() != static_cast<Eigen::Index>(grid.size())) {
    throw std::invalid_argument("assemble_C: medium does not match the grid");
  }
  SparseOperator c(grid);
  std::array<std::int32_t, 9> cols{};
  std::array<cplx, 9> m{};
  std::array<cplx, 9> vals{};
  for (int j = 0; j < grid.nz(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const Stencil& st = stencils.at(node_class({i, j}, grid));
      const std::size_t n = st.offsets.size();
      for (std::size_t b = 0; b < n; ++b) {
        const std::size_t col = grid.index(i + st.offsets[b].dx, j + st.offsets[b].dz);
        cols[b] = static_cast<std::int32_t>(col);
        m[b] = medium.values[static_cast<Eigen::Index>(col)];
      }
      sparsified_row(st, grid.omega(), std::span(m.data(), n), std::span(vals.data(), n));
      c.set_row(grid.index(i, j), std::span(cols.data(), n), std::span(vals.data(), n));
    }
  }
  return c;
}

}  // namespace lsweep
