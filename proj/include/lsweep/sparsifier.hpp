#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lsweep/greens_kernel.hpp"
#include "lsweep/grid.hpp"

namespace lsweep {

/// Position of a node relative to the boundary of the rectangle it lives in.
enum class StencilClass : std::uint8_t {
  Interior,
  West,
  East,
  South,
  North,
  SouthWest,
  SouthEast,
  NorthWest,
  NorthEast,
};

inline constexpr std::size_t kStencilClassCount = 9;

/// West/East refer to the low/high x side, South/North to the low/high z side.
StencilClass classify(bool x_low, bool x_high, bool z_low, bool z_high);

const char* to_string(StencilClass c);

struct Offset {
  int dx = 0;
  int dz = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// The clipped 3x3 neighbourhood of a class, ordered with dz as the outer and
/// dx as the inner loop, both ascending.
std::vector<Offset> stencil_offsets(StencilClass c);

/// Neighbours of node k inside the grid, in the order of stencil_offsets().
std::vector<Node> neighbor_set(Node k, const Grid& grid);

StencilClass node_class(Node k, const Grid& grid);

struct Stencil {
  std::vector<Offset> offsets;
  /// Unit-norm left singular direction for the smallest singular value,
  /// phase-normalised so the centre coefficient is real and positive.
  std::vector<cplx> alpha;
  /// Smallest singular value of the target matrix.
  double residual = 0.0;
  /// near_field[b] = sum_a alpha[a] * sample(offsets[a] - offsets[b]); the
  /// part of (A G) that survives the pattern restriction.
  std::vector<cplx> near_field;
};

struct StencilOptions {
  /// Target columns are the nodes of the l-infinity window of this radius
  /// (clipped to the class' half-planes) that are not in the stencil.
  int window_radius = 12;
};

/// The nine translation-invariant annihilating stencils defining A.
class StencilSet {
 public:
  StencilSet() = default;
  StencilSet(std::array<Stencil, kStencilClassCount> classes, double omega,
             int window_radius)
      : classes_(std::move(classes)), omega_(omega), window_radius_(window_radius) {}

  const Stencil& at(StencilClass c) const {
    return classes_[static_cast<std::size_t>(c)];
  }
  double omega() const { return omega_; }
  int window_radius() const { return window_radius_; }

 private:
  std::array<Stencil, kStencilClassCount> classes_;
  double omega_ = 0;
  int window_radius_ = 0;
};

/// Offsets of the target set of a class for the given window.
std::vector<Offset> stencil_targets(StencilClass c, int window_radius);

/// G(mu, T) for one class: rows follow stencil_offsets(), columns
/// stencil_targets().
Eigen::MatrixXcd stencil_target_matrix(StencilClass c, const KernelTable& kernel,
                                       int window_radius);

/// Throws std::invalid_argument for window_radius < 2, std::runtime_error if
/// the target matrix is numerically zero.
StencilSet compute_stencils(const Grid& grid, const KernelTable& kernel,
                            StencilOptions options = {});

/// (A f)_k = sum over the neighbourhood of k of alpha_class(k)(p) f_p.
Field apply_A(const StencilSet& stencils, const Grid& grid, const Field& f);

/// One sparsified row: out[b] = C(k, k + offsets[b]) =
/// alpha[b] + omega^2 m[b] near_field[b], where m[b] is the medium at
/// k + offsets[b].
void sparsified_row(const Stencil& stencil, double omega, std::span<const cplx> m,
                    std::span<cplx> out);

/// Square sparse matrix with at most nine entries per row, stored row-wise in
/// fixed slots. Immutable after assembly.
class SparseOperator {
 public:
  static constexpr int kSlots = 9;

  SparseOperator() = default;
  explicit SparseOperator(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return counts_.size(); }

  int row_size(std::size_t k) const { return counts_[k]; }
  std::int32_t col(std::size_t k, int e) const { return cols_[k * kSlots + e]; }
  cplx value(std::size_t k, int e) const { return vals_[k * kSlots + e]; }

  /// C(k, j), zero outside the pattern.
  cplx entry(std::size_t k, std::size_t j) const;

  Field apply(const Field& x) const;
  SparseOperator transpose() const;

  /// Dense coupling block between constant-z rows: B(a, b) = C(index(a, row),
  /// index(b, col)).
  Eigen::MatrixXcd row_block(int row, int col) const;

  /// Plain text: a header line "# lsweep-triplets v1 <N> <nnz>", then one
  /// "row col re im" line per stored entry, zero-based indices.
  void write_triplets(std::ostream& out) const;

  /// Builder interface used by the assembly routines.
  void set_row(std::size_t k, std::span<const std::int32_t> cols,
               std::span<const cplx> vals);

 private:
  Grid grid_{4, 4, 1.0, 1.0, GridOptions{0.0}};
  std::vector<std::int32_t> cols_;
  std::vector<cplx> vals_;
  std::vector<std::uint8_t> counts_;
};

/// C = pattern restriction of A (I + omega^2 G diag(m)).
SparseOperator assemble_C(const StencilSet& stencils, const Medium& medium,
                          const KernelTable& kernel);

}  // namespace lsweep
