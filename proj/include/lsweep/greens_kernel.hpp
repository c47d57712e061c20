#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lsweep/grid.hpp"

namespace lsweep {

/// Free-space outgoing Green's function -(i/4) H^(1)_0(omega r), r > 0.
cplx greens_value(double r, double omega);

/// Integral of G over the h x h cell centred at the singularity.
cplx greens_cell_integral(double h, double omega);

/// Diagonal weight of the corrected trapezoidal rule with O(h^4 log h) error
/// for smooth densities (only the singular node is modified).
cplx greens_corrected_diagonal(double h, double omega);

enum class DiagonalRule {
  CellAverage,  // self term = integral of G over the cell
  Corrected,    // fourth-order corrected trapezoidal weight
};

struct KernelOptions {
  DiagonalRule diagonal = DiagonalRule::CellAverage;
  /// Upper bound on the number of points of the padded transform.
  std::size_t max_transform_points = std::size_t{1} << 26;
};

/// Node address (i, j) used for sub-block extraction.
struct Node {
  int i = 0;
  int j = 0;
};

/// Quadrature-weighted samples of G on the offset lattice
/// {-(nx-1)..nx-1} x {-(nz-1)..nz-1}, and their circulant embedding in
/// frequency space for O(N log N) application.
///
/// Immutable after construction; convolve() may be called concurrently.
class KernelTable {
 public:
  explicit KernelTable(const Grid& grid, KernelOptions options = {});
  ~KernelTable();
  KernelTable(KernelTable&&) noexcept;
  KernelTable& operator=(KernelTable&&) noexcept;
  KernelTable(const KernelTable&) = delete;
  KernelTable& operator=(const KernelTable&) = delete;

  const Grid& grid() const { return grid_; }
  cplx diagonal_weight() const { return diagonal_; }
  int padded_nx() const { return px_; }
  int padded_nz() const { return pz_; }

  /// Sample at lattice offset (di, dj); throws std::out_of_range outside the
  /// table.
  cplx sample(int di, int dj) const;

  /// Same as sample() inside the table; evaluates h^2 G directly outside it.
  /// Stencil optimisation uses this so that it does not depend on grid size.
  cplx value(int di, int dj) const;

  /// (G f)_k = sum_j sample(k - j) f_j, through the padded FFT.
  Field convolve(const Field& f) const;

  /// entry(a, b) = sample(rows[a] - cols[b]).
  Eigen::MatrixXcd submatrix(std::span<const Node> rows,
                             std::span<const Node> cols) const;

 private:
  struct Plans;

  std::size_t slot(int di, int dj) const {
    return static_cast<std::size_t>(dj + grid_.nz() - 1) * (2 * grid_.nx() - 1) +
           static_cast<std::size_t>(di + grid_.nx() - 1);
  }

  Grid grid_;
  cplx diagonal_;
  std::vector<cplx> samples_;
  int px_ = 0;
  int pz_ = 0;
  std::vector<cplx> spectrum_;
  std::unique_ptr<Plans> plans_;
};

/// Throws std::invalid_argument if the padded transform exceeds the budget.
KernelTable build_kernel(const Grid& grid, KernelOptions options = {});

/// Smallest integer >= n whose only prime factors are 2, 3, 5 and 7.
int efficient_transform_length(int n);

}  // namespace lsweep
