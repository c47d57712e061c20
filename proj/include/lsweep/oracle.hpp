#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "lsweep/greens_kernel.hpp"
#include "lsweep/grid.hpp"
#include "lsweep/sparsifier.hpp"

namespace lsweep::oracle {

/// Largest N for which the dense oracles materialise a matrix.
inline constexpr std::size_t kDenseCap = 4096;

/// Dense G with G(k, j) = sample(k - j). Throws std::length_error above the cap.
Eigen::MatrixXcd dense_G(const KernelTable& kernel, std::size_t cap = kDenseCap);

/// Dense I + omega^2 G diag(m).
Eigen::MatrixXcd dense_H(const KernelTable& kernel, const Medium& medium,
                         std::size_t cap = kDenseCap);

/// Dense A assembled row by row from the stencils.
Eigen::MatrixXcd dense_A(const StencilSet& stencils, const Grid& grid,
                         std::size_t cap = kDenseCap);

/// Dense copy of a sparse operator.
Eigen::MatrixXcd dense(const SparseOperator& c, std::size_t cap = kDenseCap);

/// Solves H u = f by LU with partial pivoting on the dense H.
Field dense_oracle_solve(const Medium& medium, const KernelTable& kernel, const Field& f,
                         std::size_t cap = kDenseCap);

/// Solves C u = g with a sparse direct LU; no size cap.
Field sparse_direct_solve(const SparseOperator& c, const Field& g);

}  // namespace lsweep::oracle
