#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "lsweep/greens_kernel.hpp"
#include "lsweep/grid.hpp"
#include "lsweep/krylov.hpp"
#include "lsweep/layered.hpp"
#include "lsweep/ls_operator.hpp"
#include "lsweep/sparsifier.hpp"
#include "lsweep/sweep.hpp"

namespace lsweep {

/// gmres on C, left preconditioned by the bidirectional sweep.
std::pair<Field, SolveReport> solve_sparsified(const Bidirectional& precond, const Field& g,
                                               double tol, int max_iter = 200);

/// Outer gmres on H preconditioned by r -> C^-1 A r, the inner solve being
/// solve_sparsified at inner_tol.
struct TwoLevelOptions {
  double outer_tol = 1e-10;
  double inner_tol = 1e-3;
  bool flexible = true;
  int restart = 200;
  int max_outer = 200;
  int max_inner = 200;
};

std::pair<Field, SolveReport> solve_ls(const LSOperator& op, const StencilSet& stencils,
                                       const Bidirectional& precond, const Field& f,
                                       TwoLevelOptions options = {});

struct SetupOptions {
  KernelOptions kernel;
  StencilOptions stencil;
  /// Layer counts; empty means default_layer_count of the direction.
  std::optional<int> layers_horizontal;
  std::optional<int> layers_vertical;
  int extension = 10;
  double shift_strength = 1.0;
  TransposeMode transpose = TransposeMode::Geometric;
};

/// Wall-clock seconds of the offline stage.
struct OfflineTimings {
  double kernel = 0;
  double stencils = 0;
  double assemble = 0;
  double factorize = 0;
  double total = 0;
};

/// Offline state of the method: kernel table, stencils, C and both layered
/// factorisations. Immutable after construction; solves may run concurrently.
class Solver {
 public:
  Solver(const Grid& grid, Medium medium, SetupOptions options = {});
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  const Grid& grid() const { return kernel_.grid(); }
  const Medium& medium() const { return medium_; }
  const KernelTable& kernel() const { return kernel_; }
  const StencilSet& stencils() const { return stencils_; }
  const SparseOperator& C() const { return c_; }
  const LSOperator& op() const { return op_; }
  const LayeredSystems& horizontal() const { return horizontal_; }
  const LayeredSystems& vertical() const { return vertical_; }
  const Bidirectional& preconditioner() const { return precond_; }
  const OfflineTimings& timings() const { return timings_; }
  const SetupOptions& options() const { return options_; }

  /// C u = g.
  std::pair<Field, SolveReport> solve_sparsified(const Field& g, double tol,
                                                 int max_iter = 200) const;
  /// H u = f.
  std::pair<Field, SolveReport> solve_ls(const Field& f, TwoLevelOptions options = {}) const;
  /// Scattered field of an incident wave.
  std::pair<Field, SolveReport> scatter(const Field& incident,
                                        TwoLevelOptions options = {}) const;
  /// Right-hand side A f with f = build_rhs(incident), for sparse studies.
  Field sparse_rhs(const Field& incident) const;

 private:
  OfflineTimings timings_;
  SetupOptions options_;
  Medium medium_;
  KernelTable kernel_;
  StencilSet stencils_;
  SparseOperator c_;
  SparseOperator c_t_;
  LSOperator op_;
  LayeredSystems horizontal_;
  LayeredSystems vertical_;
  Bidirectional precond_;
};

}  // namespace lsweep
