#include "lsweep/ls_operator.hpp"

#include <stdexcept>

namespace lsweep {

LSOperator::LSOperator(const KernelTable& kernel, const Medium& medium)
    : kernel_(&kernel), medium_(&medium) {
  if (medium.values.size() != static_cast<Eigen::Index>(kernel.grid().size())) {
    throw std::invalid_argument("medium and kernel live on different grids");
  }
}

void LSOperator::check(const Field& u) const {
  if (u.size() != medium_->values.size()) {
    throw std::invalid_argument("field size does not match the operator");
  }
}

Field LSOperator::apply(const Field& u) const {
  check(u);
  const double w2 = grid().omega() * grid().omega();
  Field mu = medium_->values.cwiseProduct(u);
  return u + w2 * kernel_->convolve(mu);
}

Field LSOperator::rhs(const Field& incident) const {
  check(incident);
  const double w2 = grid().omega() * grid().omega();
  Field mu = medium_->values.cwiseProduct(incident);
  return -w2 * kernel_->convolve(mu);
}

}  // namespace lsweep
