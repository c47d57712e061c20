#include "lsweep/twolevel.hpp"

#include <chrono>

namespace lsweep {

namespace {

template <class F>
auto timed(double& seconds, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto out = f();
  seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

std::pair<Field, SolveReport> solve_sparsified(const Bidirectional& precond, const Field& g,
                                               double tol, int max_iter) {
  SweepCounters counters;
  const SparseOperator& c = *precond.c;
  auto [u, rep] = gmres([&](const Field& v) { return c.apply(v); }, g,
                        [&](const Field& v) { return precond.apply(v, &counters); },
                        GmresOptions{tol, max_iter, max_iter, false});
  rep.local_solves = counters.local_solves;
  return {std::move(u), std::move(rep)};
}

std::pair<Field, SolveReport> solve_ls(const LSOperator& op, const StencilSet& stencils,
                                       const Bidirectional& precond, const Field& f,
                                       TwoLevelOptions options) {
  long inner = 0;
  long solves = 0;
  auto inner_solve = [&](const Field& r) {
    auto [u, rep] = solve_sparsified(precond, apply_A(stencils, op.grid(), r),
                                     options.inner_tol, options.max_inner);
    inner += rep.iterations;
    solves += rep.local_solves;
    return u;
  };
  auto [u, rep] = gmres([&](const Field& v) { return op.apply(v); }, f, inner_solve,
                        GmresOptions{options.outer_tol, options.max_outer, options.restart,
                                     options.flexible});
  rep.inner_iteration_total = inner;
  rep.local_solves = solves;
  return {std::move(u), std::move(rep)};
}

Solver::Solver(const Grid& grid, Medium medium, SetupOptions options)
    : options_(options),
      medium_(std::move(medium)),
      kernel_(timed(timings_.kernel, [&] { return build_kernel(grid, options.kernel); })),
      stencils_(timed(timings_.stencils,
                      [&] { return compute_stencils(grid, kernel_, options.stencil); })),
      c_(timed(timings_.assemble, [&] { return assemble_C(stencils_, medium_, kernel_); })),
      op_(kernel_, medium_) {
  if (options_.transpose == TransposeMode::Algebraic) {
    c_t_ = timed(timings_.assemble, [&] { return c_.transpose(); });
  }
  const int lh = options_.layers_horizontal.value_or(default_layer_count(grid.nz()));
  const int lv = options_.layers_vertical.value_or(default_layer_count(grid.nx()));
  const Partition ph = make_partition(grid, lh, options_.extension, Orientation::Horizontal);
  const Partition pv = make_partition(grid, lv, options_.extension, Orientation::Vertical);
  const bool algebraic = options_.transpose == TransposeMode::Algebraic;
  horizontal_ = timed(timings_.factorize, [&] {
    return prepare_layers(ph, stencils_, medium_, kernel_, options_.shift_strength);
  });
  vertical_ = timed(timings_.factorize, [&] {
    return prepare_layers(pv, stencils_, medium_, kernel_, options_.shift_strength, algebraic);
  });
  precond_ = Bidirectional{&c_, algebraic ? &c_t_ : &c_, &horizontal_, &vertical_};
  timings_.total = timings_.kernel + timings_.stencils + timings_.assemble + timings_.factorize;
}

std::pair<Field, SolveReport> Solver::solve_sparsified(const Field& g, double tol,
                                                       int max_iter) const {
  return lsweep::solve_sparsified(precond_, g, tol, max_iter);
}

std::pair<Field, SolveReport> Solver::solve_ls(const Field& f, TwoLevelOptions options) const {
  return lsweep::solve_ls(op_, stencils_, precond_, f, options);
}

std::pair<Field, SolveReport> Solver::scatter(const Field& incident,
                                              TwoLevelOptions options) const {
  return solve_ls(op_.rhs(incident), options);
}

Field Solver::sparse_rhs(const Field& incident) const {
  return apply_A(stencils_, grid(), op_.rhs(incident));
}

}  // namespace lsweep
