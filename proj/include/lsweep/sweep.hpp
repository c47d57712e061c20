#pragma once

#include <atomic>
#include <cstddef>
#include <optional>

#include "lsweep/layered.hpp"
#include "lsweep/sparsifier.hpp"

namespace lsweep {

/// Field equal to p on normal row `row` of the layer and zero elsewhere.
/// Throws std::out_of_range if the row is outside the extended layer.
Field inject_delta(const LocalSystem& sys, int row, const Trace& p);

/// Global coupling block between normal rows applied to a trace:
/// y_t = sum C((t, row), (t', col)) v_t', rows and columns read through the frame.
Trace global_couple(const SparseOperator& c, const Frame& frame, int row, int col,
                    const Trace& v);

/// Traces of a field at the four interface rows of a layer: below_outer = lo-1,
/// below_inner = lo, above_inner = hi, above_outer = hi+1. Rows that fall
/// outside the grid are left empty.
struct InterfaceTraces {
  std::optional<Trace> below_outer;
  std::optional<Trace> below_inner;
  std::optional<Trace> above_inner;
  std::optional<Trace> above_outer;
};

/// Interface traces of a global field for one layer.
InterfaceTraces global_traces(const LocalSystem& sys, const Field& global);

/// Green's representation solve:
///   w = (C^l)^-1 [ g_local - d_hi C(hi, hi+1) v(hi+1) + d_hi+1 C^l(hi+1, hi) v(hi)
///                         - d_lo C(lo, lo-1) v(lo-1) + d_lo-1 C^l(lo-1, lo) v(lo) ]
/// The outer couplings come from the global matrix, the inner ones from the
/// local matrix. With the traces of the exact solution of C v = g and
/// g_local = restrict_interior(g), w equals v on the layer interior.
Field grf_solve(const LocalSystem& sys, const SparseOperator& c,
                const InterfaceTraces& traces, const Field& g_local);

/// Local-solve counter shared by the sweeps; safe to bump from several threads.
struct SweepCounters {
  std::atomic<long> local_solves{0};
  std::atomic<long> sweeps{0};
};

/// Gauss-Seidel sweep over the layers: a downward pass from the last layer to
/// the first, each layer receiving the traces of the one above through the
/// incomplete representation formula, then an upward pass reusing the
/// accumulated sources and adding the traces of the layer below. The result
/// concatenates the layer interiors. 2L - 1 local solves (the first layer's
/// solve is shared by both passes).
///
/// `c` is the matrix being swept in the frame of `systems`.
Field gs_sweep(const LayeredSystems& systems, const SparseOperator& c, const Field& g,
               SweepCounters* counters = nullptr);

enum class TransposeMode {
  Geometric,  // left-right sweep of C over vertical layers
  Algebraic,  // sweep of C^T with transposed vertical local systems
};

const char* to_string(TransposeMode m);

/// The second direction of the bidirectional preconditioner. Geometric mode
/// sweeps C over vertical layers; algebraic mode sweeps C^T (pass it as
/// `c_vertical`) with systems prepared with `transposed = true`.
Field transpose_sweep(const LayeredSystems& vertical, const SparseOperator& c_vertical,
                      const Field& e, SweepCounters* counters = nullptr);

/// u1 = sweep_h(g); e = g - C u1; u2 = sweep_v(e); returns u1 + u2.
struct Bidirectional {
  const SparseOperator* c = nullptr;
  const SparseOperator* c_vertical = nullptr;
  const LayeredSystems* horizontal = nullptr;
  const LayeredSystems* vertical = nullptr;

  Field apply(const Field& g, SweepCounters* counters = nullptr) const;
};

Field bidirectional(const LayeredSystems& horizontal, const LayeredSystems& vertical,
                    const SparseOperator& c, const Field& g,
                    SweepCounters* counters = nullptr);

}  // namespace lsweep
