#include "lsweep/sweep.hpp"

#include <stdexcept>
#include <vector>

namespace lsweep {

namespace {

void add_row(const LocalSystem& sys, Field& local, int row, const Trace& p, double sign) {
  const int nt = sys.n_tangential();
  const std::size_t base = sys.local_index(0, row);
  for (int t = 0; t < nt; ++t) local[static_cast<Eigen::Index>(base + t)] += sign * p[t];
}

void check_trace(const LocalSystem& sys, const Trace& p) {
  if (p.size() != sys.n_tangential()) {
    throw std::invalid_argument("trace length does not match the layer width");
  }
}

// Injection of the traces of a neighbouring solution, lying above the layer.
void inject_from_above(const LocalSystem& sys, const SparseOperator& c, Field& rhs,
                       const Trace& at_hi, const Trace& at_hi1) {
  const int hi = sys.interior().hi;
  add_row(sys, rhs, hi, global_couple(c, sys.frame(), hi, hi + 1, at_hi1), -1.0);
  add_row(sys, rhs, hi + 1, sys.couple(hi + 1, hi, at_hi), +1.0);
}

void inject_from_below(const LocalSystem& sys, const SparseOperator& c, Field& rhs,
                       const Trace& at_lo1, const Trace& at_lo) {
  const int lo = sys.interior().lo;
  add_row(sys, rhs, lo, global_couple(c, sys.frame(), lo, lo - 1, at_lo1), -1.0);
  add_row(sys, rhs, lo - 1, sys.couple(lo - 1, lo, at_lo), +1.0);
}

}  // namespace

Field inject_delta(const LocalSystem& sys, int row, const Trace& p) {
  if (!sys.extended().contains(row)) throw std::out_of_range("inject_delta: row outside the layer");
  check_trace(sys, p);
  Field out = Field::Zero(static_cast<Eigen::Index>(sys.size()));
  add_row(sys, out, row, p, 1.0);
  return out;
}

Trace global_couple(const SparseOperator& c, const Frame& frame, int row, int col,
                    const Trace& v) {
  const int nt = frame.n_tangential();
  if (row < 0 || row >= frame.n_normal() || col < 0 || col >= frame.n_normal()) {
    throw std::out_of_range("global_couple: row outside the grid");
  }
  Trace y = Trace::Zero(nt);
  for (int t = 0; t < nt; ++t) {
    const std::size_t k = frame.global(t, row);
    cplx acc{};
    for (int e = 0; e < c.row_size(k); ++e) {
      const auto [tt, ss] = frame.split(static_cast<std::size_t>(c.col(k, e)));
      if (ss == col) acc += c.value(k, e) * v[tt];
    }
    y[t] = acc;
  }
  return y;
}

InterfaceTraces global_traces(const LocalSystem& sys, const Field& global) {
  const Frame& f = sys.frame();
  auto row = [&](int s) -> std::optional<Trace> {
    if (s < 0 || s >= f.n_normal()) return std::nullopt;
    Trace t(f.n_tangential());
    for (int i = 0; i < f.n_tangential(); ++i) {
      t[i] = global[static_cast<Eigen::Index>(f.global(i, s))];
    }
    return t;
  };
  const int lo = sys.interior().lo, hi = sys.interior().hi;
  InterfaceTraces tr;
  if (lo > 0) {
    tr.below_outer = row(lo - 1);
    tr.below_inner = row(lo);
  }
  if (hi < f.n_normal() - 1) {
    tr.above_inner = row(hi);
    tr.above_outer = row(hi + 1);
  }
  return tr;
}

Field grf_solve(const LocalSystem& sys, const SparseOperator& c,
                const InterfaceTraces& traces, const Field& g_local) {
  if (g_local.size() != static_cast<Eigen::Index>(sys.size())) {
    throw std::invalid_argument("grf_solve: source size does not match the layer");
  }
  Field rhs = g_local;
  if (traces.above_inner && traces.above_outer) {
    check_trace(sys, *traces.above_inner);
    check_trace(sys, *traces.above_outer);
    inject_from_above(sys, c, rhs, *traces.above_inner, *traces.above_outer);
  }
  if (traces.below_outer && traces.below_inner) {
    check_trace(sys, *traces.below_outer);
    check_trace(sys, *traces.below_inner);
    inject_from_below(sys, c, rhs, *traces.below_outer, *traces.below_inner);
  }
  return sys.solve(rhs);
}

Field gs_sweep(const LayeredSystems& systems, const SparseOperator& c, const Field& g,
               SweepCounters* counters) {
  const auto& layers = systems.layers;
  const int n_layers = static_cast<int>(layers.size());
  if (n_layers == 0) throw std::invalid_argument("gs_sweep: no layers");
  if (g.size() != static_cast<Eigen::Index>(c.size())) {
    throw std::invalid_argument("gs_sweep: source size does not match C");
  }
  std::vector<Field> src(static_cast<std::size_t>(n_layers));
  for (int l = 0; l < n_layers; ++l) src[l] = layers[l].restrict_interior(g);

  long solves = 0;
  // Downward pass. incoming[l] keeps the downgoing trace that layer l sent
  // into layer l-1 at row lo_l - 1.
  std::vector<Trace> incoming(static_cast<std::size_t>(n_layers));
  Field above;
  for (int l = n_layers - 1; l >= 0; --l) {
    const LocalSystem& sys = layers[l];
    if (l < n_layers - 1) {
      const LocalSystem& up = layers[l + 1];
      const int hi = sys.interior().hi;
      incoming[l + 1] = up.trace(above, hi);
      inject_from_above(sys, c, src[l], incoming[l + 1], up.trace(above, hi + 1));
    }
    above = sys.solve(src[l]);
    ++solves;
  }

  // Upward pass; `above` now holds the first layer's solution. Only the
  // upgoing part of the lower solution is sent up: the downgoing trace it
  // received is removed from the row below the interface.
  Field out(g.size());
  Field below = std::move(above);
  layers[0].scatter_interior(below, out);
  for (int l = 1; l < n_layers; ++l) {
    const LocalSystem& sys = layers[l];
    const LocalSystem& down = layers[l - 1];
    const int lo = sys.interior().lo;
    inject_from_below(sys, c, src[l], down.trace(below, lo - 1) - incoming[l],
                      down.trace(below, lo));
    below = sys.solve(src[l]);
    ++solves;
    sys.scatter_interior(below, out);
  }
  if (counters) {
    counters->local_solves += solves;
    counters->sweeps += 1;
  }
  return out;
}

const char* to_string(TransposeMode m) {
  return m == TransposeMode::Geometric ? "geometric" : "algebraic";
}

Field transpose_sweep(const LayeredSystems& vertical, const SparseOperator& c_vertical,
                      const Field& e, SweepCounters* counters) {
  if (vertical.partition.frame.orientation != Orientation::Vertical) {
    throw std::invalid_argument("transpose_sweep expects vertical layers");
  }
  return gs_sweep(vertical, c_vertical, e, counters);
}

Field Bidirectional::apply(const Field& g, SweepCounters* counters) const {
  Field u1 = gs_sweep(*horizontal, *c, g, counters);
  const Field e = g - c->apply(u1);
  const Field u2 = transpose_sweep(*vertical, c_vertical ? *c_vertical : *c, e, counters);
  u1 += u2;
  return u1;
}

Field bidirectional(const LayeredSystems& horizontal, const LayeredSystems& vertical,
                    const SparseOperator& c, const Field& g, SweepCounters* counters) {
  return Bidirectional{&c, &c, &horizontal, &vertical}.apply(g, counters);
}

}  // namespace lsweep
