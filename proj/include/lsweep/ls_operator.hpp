#pragma once

#include "lsweep/greens_kernel.hpp"
#include "lsweep/grid.hpp"

namespace lsweep {

/// Discrete Lippmann-Schwinger operator H = I + omega^2 G diag(m), applied
/// matrix-free. Holds references; the kernel and medium must outlive it.
class LSOperator {
 public:
  LSOperator(const KernelTable& kernel, const Medium& medium);

  const KernelTable& kernel() const { return *kernel_; }
  const Medium& medium() const { return *medium_; }
  const Grid& grid() const { return kernel_->grid(); }

  /// u + omega^2 G (m .* u).
  Field apply(const Field& u) const;

  /// Scattered-field right-hand side -omega^2 G (m .* u_incident).
  Field rhs(const Field& incident) const;

 private:
  void check(const Field& u) const;

  const KernelTable* kernel_;
  const Medium* medium_;
};

inline Field apply_H(const LSOperator& op, const Field& u) { return op.apply(u); }
inline Field build_rhs(const LSOperator& op, const Field& incident) {
  return op.rhs(incident);
}

}  // namespace lsweep
