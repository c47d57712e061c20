#include "lsweep/layered.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace lsweep {

const char* to_string(Orientation o) {
  return o == Orientation::Horizontal ? "horizontal" : "vertical";
}

Frame make_frame(const Grid& grid, Orientation o) { return {o, grid.nx(), grid.nz()}; }

LayerRange Partition::extended(int l) const {
  const LayerRange& r = interior(l);
  return {std::max(0, r.lo - extension),
          std::min(frame.n_normal() - 1, r.hi + extension)};
}

int default_layer_count(int n_normal) {
  return std::max(1, static_cast<int>(std::lround(n_normal / 50.0)));
}

Partition make_partition(const Grid& grid, int layers, int extension,
                         Orientation orientation) {
  Partition p;
  p.frame = make_frame(grid, orientation);
  p.extension = extension;
  const int n = p.frame.n_normal();
  if (layers < 1) throw std::invalid_argument("partition needs at least one layer");
  if (extension < 1) throw std::invalid_argument("layer extension must be >= 1");
  if (2 * layers > n) {
    std::ostringstream msg;
    msg << layers << " layers over " << n << " rows leaves layers thinner than 2 rows";
    throw std::invalid_argument(msg.str());
  }
  const int base = n / layers;
  const int extra = n % layers;
  int lo = 0;
  for (int l = 0; l < layers; ++l) {
    const int size = base + (l < extra ? 1 : 0);
    p.layers.push_back({lo, lo + size - 1});
    lo += size;
  }
  return p;
}

CutoffProfile make_cutoff(const Partition& partition, int layer, double omega,
                          double shift_strength) {
  CutoffProfile c;
  c.interior = partition.interior(layer);
  c.extended = partition.extended(layer);
  const cplx i_unit{0.0, 1.0};
  const int below = c.interior.lo - c.extended.lo;
  const int above = c.extended.hi - c.interior.hi;
  for (int s = c.extended.lo; s <= c.extended.hi; ++s) {
    double ramp = 0.0;
    if (s < c.interior.lo) {
      const double t = double(c.interior.lo - s) / below;
      ramp = t * t * (3.0 - 2.0 * t);
    } else if (s > c.interior.hi) {
      const double t = double(s - c.interior.hi) / above;
      ramp = t * t * (3.0 - 2.0 * t);
    }
    c.xi.push_back(1.0 - ramp);
    c.shift.push_back(i_unit * shift_strength * omega * ramp * ramp);
  }
  return c;
}

LocalSystem::LocalSystem(Frame frame, int layer, LayerRange interior, LayerRange extended)
    : frame_(frame), layer_(layer), interior_(interior), extended_(extended) {
  const std::size_t n = static_cast<std::size_t>(extended.size()) * frame.n_tangential();
  cols_.assign(n * 9, 0);
  vals_.assign(n * 9, cplx{});
  counts_.assign(n, 0);
}

cplx LocalSystem::entry(std::size_t k, std::size_t j) const {
  for (int e = 0; e < counts_[k]; ++e) {
    if (static_cast<std::size_t>(cols_[k * 9 + e]) == j) return vals_[k * 9 + e];
  }
  return {};
}

void LocalSystem::set_row(std::size_t k, std::span<const std::int32_t> cols,
                          std::span<const cplx> vals) {
  if (cols.size() > 9 || cols.size() != vals.size()) {
    throw std::invalid_argument("LocalSystem::set_row: bad row length");
  }
  counts_[k] = static_cast<std::uint8_t>(cols.size());
  std::copy(cols.begin(), cols.end(), cols_.begin() + static_cast<std::ptrdiff_t>(k * 9));
  std::copy(vals.begin(), vals.end(), vals_.begin() + static_cast<std::ptrdiff_t>(k * 9));
  band_.clear();
}

Field LocalSystem::apply(const Field& x) const {
  Field y(static_cast<Eigen::Index>(size()));
  for (std::size_t k = 0; k < size(); ++k) {
    cplx acc{};
    for (int e = 0; e < counts_[k]; ++e) acc += vals_[k * 9 + e] * x[cols_[k * 9 + e]];
    y[static_cast<Eigen::Index>(k)] = acc;
  }
  return y;
}

std::size_t LocalSystem::band_position(std::size_t local) const {
  if (!normal_fastest_) return local;
  const std::size_t nt = static_cast<std::size_t>(n_tangential());
  const std::size_t t = local % nt;
  const std::size_t r = local / nt;
  return t * static_cast<std::size_t>(n_rows()) + r;
}

void LocalSystem::factorize() {
  const int n = static_cast<int>(size());
  // Order the unknowns along the shorter side fastest: the bandwidth is then
  // the layer thickness, not the grid width.
  normal_fastest_ = n_rows() <= n_tangential();
  kl_ = (normal_fastest_ ? n_rows() : n_tangential()) + 1;
  kl_ = std::min(kl_, n - 1);
  const int ku = kl_;
  ldab_ = 2 * kl_ + ku + 1;
  std::vector<cplx> band(static_cast<std::size_t>(ldab_) * n, cplx{});
  for (std::size_t k = 0; k < size(); ++k) {
    const std::size_t r = band_position(k);
    for (int e = 0; e < counts_[k]; ++e) {
      const std::size_t c = band_position(static_cast<std::size_t>(cols_[k * 9 + e]));
      const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(r) - static_cast<std::ptrdiff_t>(c);
      if (std::abs(d) > kl_) throw std::logic_error("entry outside the band");
      band[static_cast<std::size_t>(kl_ + ku + d) + c * ldab_] = vals_[k * 9 + e];
    }
  }
  std::vector<int> piv(static_cast<std::size_t>(n));
  const lapack_int info =
      LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n, n, kl_, ku, band.data(), ldab_, piv.data());
  if (info != 0) {
    std::ostringstream msg;
    msg << "factorisation of " << to_string(frame_.orientation) << " layer " << layer_
        << (info > 0 ? " hit a zero pivot at position " : " failed with code ") << info
        << "; check the cut-off and shift configuration";
    throw std::runtime_error(msg.str());
  }
  band_ = std::move(band);
  pivots_ = std::move(piv);
}

Field LocalSystem::solve(const Field& b) const {
  if (!factorized()) throw std::logic_error("LocalSystem::solve before factorize");
  if (b.size() != static_cast<Eigen::Index>(size())) {
    throw std::invalid_argument("LocalSystem::solve: size mismatch");
  }
  const int n = static_cast<int>(size());
  std::vector<cplx> x(size());
  for (std::size_t k = 0; k < size(); ++k) x[band_position(k)] = b[static_cast<Eigen::Index>(k)];
  const lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n, kl_, kl_, 1,
                                         band_.data(), ldab_, pivots_.data(), x.data(), n);
  if (info != 0) throw std::runtime_error("zgbtrs failed");
  Field out(b.size());
  for (std::size_t k = 0; k < size(); ++k) out[static_cast<Eigen::Index>(k)] = x[band_position(k)];
  return out;
}

LocalSystem LocalSystem::transposed() const {
  LocalSystem t(frame_, layer_, interior_, extended_);
  for (std::size_t k = 0; k < size(); ++k) {
    for (int e = 0; e < counts_[k]; ++e) {
      const std::size_t j = static_cast<std::size_t>(cols_[k * 9 + e]);
      const int slot = t.counts_[j]++;
      if (slot >= 9) throw std::logic_error("LocalSystem::transposed: asymmetric pattern");
      t.cols_[j * 9 + slot] = static_cast<std::int32_t>(k);
      t.vals_[j * 9 + slot] = vals_[k * 9 + e];
    }
  }
  return t;
}

Field LocalSystem::restrict_interior(const Field& global) const {
  Field local = Field::Zero(static_cast<Eigen::Index>(size()));
  for (int s = interior_.lo; s <= interior_.hi; ++s) {
    for (int t = 0; t < n_tangential(); ++t) {
      local[static_cast<Eigen::Index>(local_index(t, s))] =
          global[static_cast<Eigen::Index>(global_index(t, s))];
    }
  }
  return local;
}

void LocalSystem::scatter_interior(const Field& local, Field& global) const {
  for (int s = interior_.lo; s <= interior_.hi; ++s) {
    for (int t = 0; t < n_tangential(); ++t) {
      global[static_cast<Eigen::Index>(global_index(t, s))] =
          local[static_cast<Eigen::Index>(local_index(t, s))];
    }
  }
}

Trace LocalSystem::trace(const Field& local, int s) const {
  if (!extended_.contains(s)) throw std::out_of_range("trace row outside the layer");
  Trace out(n_tangential());
  for (int t = 0; t < n_tangential(); ++t) {
    out[t] = local[static_cast<Eigen::Index>(local_index(t, s))];
  }
  return out;
}

Trace LocalSystem::couple(int row, int col, const Trace& v) const {
  if (!extended_.contains(row) || !extended_.contains(col)) {
    throw std::out_of_range("coupling rows outside the layer");
  }
  const int nt = n_tangential();
  Trace y = Trace::Zero(nt);
  const std::size_t col_begin = local_index(0, col);
  const std::size_t col_end = col_begin + static_cast<std::size_t>(nt);
  for (int t = 0; t < nt; ++t) {
    const std::size_t k = local_index(t, row);
    cplx acc{};
    for (int e = 0; e < counts_[k]; ++e) {
      const std::size_t j = static_cast<std::size_t>(cols_[k * 9 + e]);
      if (j >= col_begin && j < col_end) acc += vals_[k * 9 + e] * v[static_cast<Eigen::Index>(j - col_begin)];
    }
    y[t] = acc;
  }
  return y;
}

LocalSystem assemble_local(const Partition& partition, int layer,
                           const StencilSet& stencils, const Medium& medium,
                           const KernelTable& kernel, const CutoffProfile& cutoff) {
  const Frame& frame = partition.frame;
  const Grid& grid = kernel.grid();
  if (frame.nx != grid.nx() || frame.nz != grid.nz() ||
      medium.values.size() != static_cast<Eigen::Index>(grid.size())) {
    throw std::invalid_argument("assemble_local: inputs live on different grids");
  }
  const LayerRange interior = partition.interior(layer);
  const LayerRange ext = partition.extended(layer);
  if (!(cutoff.extended == ext) || !(cutoff.interior == interior)) {
    throw std::invalid_argument("assemble_local: cut-off belongs to another layer");
  }
  if (ext.size() < 3) {
    throw std::invalid_argument("assemble_local: layer too thin for the stencil");
  }
  const double omega = grid.omega();
  const double inv_w2 = 1.0 / (omega * omega);
  const int nt = frame.n_tangential();
  const bool horizontal = frame.orientation == Orientation::Horizontal;

  LocalSystem sys(frame, layer, interior, ext);
  std::array<std::int32_t, 9> cols{};
  std::array<cplx, 9> m{};
  std::array<cplx, 9> vals{};
  for (int s = ext.lo; s <= ext.hi; ++s) {
    for (int t = 0; t < nt; ++t) {
      const bool t_low = t == 0, t_high = t == nt - 1;
      const bool s_low = s == ext.lo, s_high = s == ext.hi;
      const StencilClass cls = horizontal ? classify(t_low, t_high, s_low, s_high)
                                          : classify(s_low, s_high, t_low, t_high);
      const Stencil& st = stencils.at(cls);
      const std::size_t n = st.offsets.size();
      for (std::size_t b = 0; b < n; ++b) {
        const auto [dt, ds] = frame.to_local(st.offsets[b]);
        const int tt = t + dt;
        const int ss = s + ds;
        cols[b] = static_cast<std::int32_t>(sys.local_index(tt, ss));
        const cplx mg = medium.values[static_cast<Eigen::Index>(frame.global(tt, ss))];
        m[b] = cutoff.xi_at(ss) * mg + cutoff.shift_at(ss) * inv_w2;
      }
      sparsified_row(st, omega, std::span(m.data(), n), std::span(vals.data(), n));
      sys.set_row(sys.local_index(t, s), std::span(cols.data(), n), std::span(vals.data(), n));
    }
  }
  return sys;
}

LayeredSystems prepare_layers(const Partition& partition, const StencilSet& stencils,
                              const Medium& medium, const KernelTable& kernel,
                              double shift_strength, bool transposed) {
  LayeredSystems out;
  out.partition = partition;
  out.transposed = transposed;
  out.layers.reserve(static_cast<std::size_t>(partition.count()));
  for (int l = 0; l < partition.count(); ++l) {
    const CutoffProfile cut = make_cutoff(partition, l, kernel.grid().omega(), shift_strength);
    LocalSystem sys = assemble_local(partition, l, stencils, medium, kernel, cut);
    if (transposed) sys = sys.transposed();
    sys.factorize();
    out.layers.push_back(std::move(sys));
  }
  return out;
}

}  // namespace lsweep
