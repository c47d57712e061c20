#include "lsweep/oracle.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace lsweep::oracle {

namespace {

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    std::ostringstream msg;
    msg << "dense oracle refused: N = " << n << " exceeds the cap " << cap;
    throw std::length_error(msg.str());
  }
}

}  // namespace

Eigen::MatrixXcd dense_G(const KernelTable& kernel, std::size_t cap) {
  const Grid& g = kernel.grid();
  check_cap(g.size(), cap);
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto [ki, kj] = g.coords(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto [ji, jj] = g.coords(static_cast<std::size_t>(j));
      out(k, j) = kernel.sample(ki - ji, kj - jj);
    }
  }
  return out;
}

Eigen::MatrixXcd dense_H(const KernelTable& kernel, const Medium& medium, std::size_t cap) {
  const double w2 = kernel.grid().omega() * kernel.grid().omega();
  Eigen::MatrixXcd h = w2 * dense_G(kernel, cap) * medium.values.asDiagonal();
  h.diagonal().array() += 1.0;
  return h;
}

Eigen::MatrixXcd dense_A(const StencilSet& stencils, const Grid& grid, std::size_t cap) {
  check_cap(grid.size(), cap);
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < grid.nz(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const Stencil& st = stencils.at(node_class({i, j}, grid));
      for (std::size_t b = 0; b < st.offsets.size(); ++b) {
        a(static_cast<Eigen::Index>(grid.index(i, j)),
          static_cast<Eigen::Index>(grid.index(i + st.offsets[b].dx, j + st.offsets[b].dz))) =
            st.alpha[b];
      }
    }
  }
  return a;
}

Eigen::MatrixXcd dense(const SparseOperator& c, std::size_t cap) {
  check_cap(c.size(), cap);
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < c.size(); ++k) {
    for (int e = 0; e < c.row_size(k); ++e) d(static_cast<Eigen::Index>(k), c.col(k, e)) = c.value(k, e);
  }
  return d;
}

Field dense_oracle_solve(const Medium& medium, const KernelTable& kernel, const Field& f,
                         std::size_t cap) {
  if (f.size() != static_cast<Eigen::Index>(kernel.grid().size())) {
    throw std::invalid_argument("dense_oracle_solve: size mismatch");
  }
  if (medium.is_zero()) return f;
  return dense_H(kernel, medium, cap).partialPivLu().solve(f);
}

Field sparse_direct_solve(const SparseOperator& c, const Field& g) {
  const auto n = static_cast<Eigen::Index>(c.size());
  if (g.size() != n) throw std::invalid_argument("sparse_direct_solve: size mismatch");
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(c.size() * 9);
  for (std::size_t k = 0; k < c.size(); ++k) {
    for (int e = 0; e < c.row_size(k); ++e) {
      trips.emplace_back(static_cast<int>(k), c.col(k, e), c.value(k, e));
    }
  }
  Eigen::SparseMatrix<cplx> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw std::runtime_error("sparse LU of C failed");
  return lu.solve(g);
}

}  // namespace lsweep::oracle
