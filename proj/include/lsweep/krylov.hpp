#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lsweep/grid.hpp"

namespace lsweep {

using LinearMap = std::function<Field(const Field&)>;

struct GmresOptions {
  double tol = 1e-6;
  int max_iter = 500;
  /// Krylov basis size before a restart.
  int restart = 200;
  /// Flexible right preconditioning; otherwise left preconditioning.
  bool flexible = false;
};

struct SolveReport {
  int iterations = 0;
  /// Relative residual after each iteration: preconditioned for left
  /// preconditioning, true residual for the flexible variant.
  std::vector<double> residual_history;
  /// ||b - A x|| / ||b|| of the returned iterate.
  double true_residual = 0.0;
  double wall_time = 0.0;
  bool converged = false;
  bool breakdown = false;
  /// Iterations spent in inner solves called from the preconditioner.
  long inner_iteration_total = 0;
  long operator_applications = 0;
  long preconditioner_applications = 0;
  long local_solves = 0;

  double final_residual() const {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
};

/// Raised when a NaN or infinity shows up in the iteration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// GMRES from a zero initial guess. `precond` may be empty. b = 0 returns zero
/// after 0 iterations. Throws std::invalid_argument for tol outside (0, 1),
/// NumericalError on non-finite values.
std::pair<Field, SolveReport> gmres(const LinearMap& apply, const Field& b,
                                    const LinearMap& precond, GmresOptions options);

}  // namespace lsweep
