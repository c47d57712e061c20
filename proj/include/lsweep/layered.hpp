#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lsweep/greens_kernel.hpp"
#include "lsweep/grid.hpp"
#include "lsweep/sparsifier.hpp"

namespace lsweep {

/// Horizontal layers are stacked along z; vertical layers along x.
enum class Orientation { Horizontal, Vertical };

const char* to_string(Orientation o);

/// Maps (tangential t, normal s) coordinates of a layered decomposition onto
/// grid nodes. Horizontal: t = i, s = j. Vertical: t = j, s = i.
struct Frame {
  Orientation orientation = Orientation::Horizontal;
  int nx = 0;
  int nz = 0;

  int n_tangential() const { return orientation == Orientation::Horizontal ? nx : nz; }
  int n_normal() const { return orientation == Orientation::Horizontal ? nz : nx; }

  std::size_t global(int t, int s) const {
    return orientation == Orientation::Horizontal
               ? static_cast<std::size_t>(s) * nx + t
               : static_cast<std::size_t>(t) * nx + s;
  }
  /// Inverse of global(): returns (t, s).
  std::pair<int, int> split(std::size_t k) const {
    const int i = static_cast<int>(k % nx);
    const int j = static_cast<int>(k / nx);
    return orientation == Orientation::Horizontal ? std::pair{i, j} : std::pair{j, i};
  }
  /// Grid-geometry offset (dx, dz) expressed as (dt, ds).
  std::pair<int, int> to_local(Offset o) const {
    return orientation == Orientation::Horizontal ? std::pair{o.dx, o.dz}
                                                  : std::pair{o.dz, o.dx};
  }
};

Frame make_frame(const Grid& grid, Orientation o);

/// Inclusive range of normal coordinates.
struct LayerRange {
  int lo = 0;
  int hi = -1;
  int size() const { return hi - lo + 1; }
  bool contains(int s) const { return s >= lo && s <= hi; }
  friend bool operator==(const LayerRange&, const LayerRange&) = default;
};

/// Layered decomposition of the grid along one direction. Layer 0 holds the
/// smallest normal coordinates.
struct Partition {
  Frame frame;
  int extension = 10;
  std::vector<LayerRange> layers;

  int count() const { return static_cast<int>(layers.size()); }
  const LayerRange& interior(int l) const { return layers.at(static_cast<std::size_t>(l)); }
  /// Interior grown by `extension` on both sides, clipped to the grid.
  LayerRange extended(int l) const;
};

/// Layers of roughly 50 grid points: max(1, round(n / 50)).
int default_layer_count(int n_normal);

/// Near-equal layer thicknesses, thicker layers first (10 rows in 4 layers
/// gives 3, 3, 2, 2). Throws std::invalid_argument if a layer would be thinner
/// than 2 rows, or for extension < 1.
Partition make_partition(const Grid& grid, int layers, int extension,
                         Orientation orientation);

/// Medium cut-off and absorbing shift over one extended layer, one value per
/// normal row.
struct CutoffProfile {
  LayerRange interior;
  LayerRange extended;
  std::vector<double> xi;
  std::vector<cplx> shift;

  double xi_at(int s) const { return xi.at(static_cast<std::size_t>(s - extended.lo)); }
  cplx shift_at(int s) const {
    return shift.at(static_cast<std::size_t>(s - extended.lo));
  }
};

/// xi = 1 on the layer, falling to 0 at the extended boundary along the cubic
/// 1 - (3t^2 - 2t^3); shift = i * shift_strength * omega * ramp^2 with
/// ramp = 1 - xi.
CutoffProfile make_cutoff(const Partition& partition, int layer, double omega,
                          double shift_strength = 1.0);

using Trace = Eigen::VectorXcd;

/// Localised sparsified operator of one extended layer, with a banded LU
/// factorisation. Local vectors are ordered normal-row by normal-row
/// (tangential index fastest), starting at the extended range's first row.
class LocalSystem {
 public:
  LocalSystem(Frame frame, int layer, LayerRange interior, LayerRange extended);

  const Frame& frame() const { return frame_; }
  int layer() const { return layer_; }
  const LayerRange& interior() const { return interior_; }
  const LayerRange& extended() const { return extended_; }
  int n_tangential() const { return frame_.n_tangential(); }
  int n_rows() const { return extended_.size(); }
  std::size_t size() const { return counts_.size(); }

  std::size_t local_index(int t, int s) const {
    return static_cast<std::size_t>(s - extended_.lo) * n_tangential() + t;
  }
  std::size_t global_index(int t, int s) const { return frame_.global(t, s); }

  int row_size(std::size_t k) const { return counts_[k]; }
  std::int32_t col(std::size_t k, int e) const { return cols_[k * 9 + e]; }
  cplx value(std::size_t k, int e) const { return vals_[k * 9 + e]; }
  cplx entry(std::size_t k, std::size_t j) const;
  void set_row(std::size_t k, std::span<const std::int32_t> cols,
               std::span<const cplx> vals);

  Field apply(const Field& x) const;

  /// Banded LU with partial pivoting. Throws std::runtime_error naming the
  /// layer if a pivot vanishes.
  void factorize();
  bool factorized() const { return !band_.empty(); }
  /// Requires factorize(); reentrant.
  Field solve(const Field& b) const;

  /// Unfactorised transpose (same frame and ranges).
  LocalSystem transposed() const;

  /// Local vector equal to g on the interior rows and zero elsewhere.
  Field restrict_interior(const Field& global) const;
  /// Writes the interior rows of a local vector into a global one.
  void scatter_interior(const Field& local, Field& global) const;

  /// Values of a local vector on normal row s.
  Trace trace(const Field& local, int s) const;
  /// Local coupling block applied to a trace: y_t = sum C_loc((t, row), (t', col)) v_t'.
  Trace couple(int row, int col, const Trace& v) const;

 private:
  std::size_t band_position(std::size_t local) const;

  Frame frame_;
  int layer_;
  LayerRange interior_;
  LayerRange extended_;
  std::vector<std::int32_t> cols_;
  std::vector<cplx> vals_;
  std::vector<std::uint8_t> counts_;

  // Band factorisation state.
  bool normal_fastest_ = true;
  int kl_ = 0;
  int ldab_ = 0;
  std::vector<cplx> band_;
  std::vector<int> pivots_;
};

/// Rows follow the sparsified assembly with m replaced by xi m + shift / omega^2.
/// Rows on the extended range's outer rows, and on the lateral sides, use the
/// boundary stencil classes of the rectangle.
LocalSystem assemble_local(const Partition& partition, int layer,
                           const StencilSet& stencils, const Medium& medium,
                           const KernelTable& kernel, const CutoffProfile& cutoff);

/// All local systems of a partition, assembled and factorised. With
/// `transposed`, each holds the transpose of its local matrix, for sweeping
/// the transposed global operator.
struct LayeredSystems {
  Partition partition;
  std::vector<LocalSystem> layers;
  bool transposed = false;
};

LayeredSystems prepare_layers(const Partition& partition, const StencilSet& stencils,
                              const Medium& medium, const KernelTable& kernel,
                              double shift_strength, bool transposed = false);

}  // namespace lsweep
