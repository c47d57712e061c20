#include "lsweep/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace lsweep {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs fn `reps` times and keeps the first result with the median wall time.
template <class F>
auto timed_median(int reps, F&& fn) {
  std::vector<double> t;
  auto t0 = std::chrono::steady_clock::now();
  auto first = fn();
  t.push_back(seconds_since(t0));
  for (int r = 1; r < reps; ++r) {
    t0 = std::chrono::steady_clock::now();
    (void)fn();
    t.push_back(seconds_since(t0));
  }
  return std::pair{std::move(first), median(t)};
}

}  // namespace

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

SolveRun run_solve(const ExperimentConfig& config, int workers, bool keep_field) {
  const Grid grid = config_grid(config, config.grid.n);
  const Solver solver(grid, config_medium(config, grid), config_setup(config, grid));
  const TwoLevelOptions opts = config_two_level(config);
  const std::vector<double> angles = incident_angles(config);
  const int reps = config.solver.repetitions;

  SolveRun run;
  run.offline = solver.timings();
  run.waves.resize(angles.size());
  std::vector<Field> fields(keep_field ? 1 : 0);
  parallel_for(static_cast<int>(angles.size()), workers, [&](int w) {
    const Field inc = incident_plane_wave(grid, angles[w]);
    auto [res, secs] = timed_median(reps, [&] { return solver.scatter(inc, opts); });
    const SolveReport& rep = res.second;
    run.waves[w] = {w, angles[w], rep.iterations, rep.inner_iteration_total, rep.converged,
                    rep.final_residual(), secs};
    if (keep_field && w == 0) fields[0] = inc + res.first;
  });
  if (keep_field) run.total_field = std::move(fields[0]);

  SolveSummary& s = run.summary;
  s.n = grid.nx();
  s.N = grid.size();
  s.omega = grid.omega();
  s.layers = solver.horizontal().partition.count();
  s.waves = static_cast<int>(run.waves.size());
  s.offline_seconds = run.offline.total;
  for (const auto& w : run.waves) {
    s.avg_outer += w.outer_iterations;
    s.avg_inner += static_cast<double>(w.inner_iterations);
    s.avg_seconds += w.seconds;
    s.all_converged = s.all_converged && w.converged;
  }
  if (s.waves > 0) {
    s.avg_outer /= s.waves;
    s.avg_inner /= s.waves;
    s.avg_seconds /= s.waves;
  }
  return run;
}

std::vector<SparseWaveResult> run_sparse_bench(const ExperimentConfig& config, int workers,
                                               SolveSummary* summary) {
  const Grid grid = config_grid(config, config.grid.n);
  const Solver solver(grid, config_medium(config, grid), config_setup(config, grid));
  const std::vector<double> angles = incident_angles(config);
  const int reps = config.solver.repetitions;
  const double tol = config.solver.sparse_tol;
  const int max_it = config.solver.max_inner;

  std::vector<SparseWaveResult> rows(2 * angles.size());
  parallel_for(static_cast<int>(angles.size()), workers, [&](int w) {
    const Field g = solver.sparse_rhs(incident_plane_wave(grid, angles[w]));
    auto [bd, t_bd] = timed_median(reps, [&] { return solver.solve_sparsified(g, tol, max_it); });
    rows[2 * w] = {w, angles[w], "bd", bd.second.iterations, bd.second.converged,
                   bd.second.final_residual(), bd.second.local_solves, t_bd};
    auto [gs, t_gs] = timed_median(reps, [&] {
      SweepCounters counters;
      auto out = gmres([&](const Field& v) { return solver.C().apply(v); }, g,
                       [&](const Field& v) { return gs_sweep(solver.horizontal(), solver.C(), v, &counters); },
                       GmresOptions{tol, max_it, max_it, false});
      out.second.local_solves = counters.local_solves;
      return out;
    });
    rows[2 * w + 1] = {w, angles[w], "gs", gs.second.iterations, gs.second.converged,
                       gs.second.final_residual(), gs.second.local_solves, t_gs};
  });
  if (summary) {
    SolveSummary& s = *summary;
    s = {};
    s.n = grid.nx();
    s.N = grid.size();
    s.omega = grid.omega();
    s.layers = solver.horizontal().partition.count();
    s.waves = static_cast<int>(angles.size());
    s.offline_seconds = solver.timings().total;
    for (const auto& r : rows) {
      if (r.method != "bd") continue;
      s.avg_inner += r.iterations;
      s.avg_seconds += r.seconds;
      s.all_converged = s.all_converged && r.converged;
    }
    s.avg_inner /= s.waves;
    s.avg_seconds /= s.waves;
  }
  return rows;
}

std::vector<ScalingRow> run_scaling(const ExperimentConfig& config, int workers) {
  std::vector<ScalingRow> out;
  const std::vector<double> angles = incident_angles(config);
  const int reps = config.solver.repetitions;
  const TwoLevelOptions opts = config_two_level(config);
  for (int n : config.scaling.sizes) {
    const Grid grid = config_grid(config, n);
    const Solver solver(grid, config_medium(config, grid), config_setup(config, grid));
    ScalingRow row;
    row.n = n;
    row.N = grid.size();
    row.omega = grid.omega();
    row.layers = solver.horizontal().partition.count();
    row.offline_seconds = solver.timings().total;
    std::vector<double> t(angles.size()), outer(angles.size()), inner(angles.size()),
        sparse(angles.size());
    parallel_for(static_cast<int>(angles.size()), workers, [&](int w) {
      const Field inc = incident_plane_wave(grid, angles[w]);
      auto [res, secs] = timed_median(reps, [&] { return solver.scatter(inc, opts); });
      t[w] = secs;
      outer[w] = res.second.iterations;
      inner[w] = static_cast<double>(res.second.inner_iteration_total);
      sparse[w] = solver.solve_sparsified(solver.sparse_rhs(inc), config.solver.sparse_tol,
                                          config.solver.max_inner)
                      .second.iterations;
    });
    auto mean = [](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return v.empty() ? 0.0 : s / v.size();
    };
    row.online_seconds = mean(t);
    row.avg_outer = mean(outer);
    row.avg_inner = mean(inner);
    row.avg_sparse = mean(sparse);
    out.push_back(row);
  }
  return out;
}

ScalingFit loglog_fit(const std::string& quantity, const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_fit needs at least two points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw std::invalid_argument("loglog_fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  ScalingFit f;
  f.quantity = quantity;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

std::vector<ScalingFit> scaling_fits(const std::vector<ScalingRow>& rows) {
  std::vector<double> N, off, on;
  for (const auto& r : rows) {
    N.push_back(static_cast<double>(r.N));
    off.push_back(r.offline_seconds);
    on.push_back(r.online_seconds);
  }
  return {loglog_fit("offline_seconds", N, off), loglog_fit("online_seconds", N, on)};
}

void write_waves_csv(std::ostream& out, const std::vector<WaveResult>& rows) {
  out << "schema,wave,angle,outer_iterations,inner_iterations,converged,final_residual,seconds\n";
  out.precision(10);
  for (const auto& r : rows) {
    out << kCsvSchema << ',' << r.wave << ',' << r.angle << ',' << r.outer_iterations << ','
        << r.inner_iterations << ',' << (r.converged ? 1 : 0) << ',' << r.final_residual << ','
        << r.seconds << '\n';
  }
}

void write_summary_csv(std::ostream& out, const SolveSummary& s) {
  out << "schema,n,N,omega,L,waves,avg_outer,avg_inner,avg_seconds,offline_seconds\n";
  out.precision(10);
  out << kCsvSchema << ',' << s.n << ',' << s.N << ',' << s.omega << ',' << s.layers << ','
      << s.waves << ',' << s.avg_outer << ',' << s.avg_inner << ',' << s.avg_seconds << ','
      << s.offline_seconds << '\n';
}

void write_sparse_csv(std::ostream& out, const std::vector<SparseWaveResult>& rows) {
  out << "schema,wave,angle,method,iterations,converged,final_residual,local_solves,seconds\n";
  out.precision(10);
  for (const auto& r : rows) {
    out << kCsvSchema << ',' << r.wave << ',' << r.angle << ',' << r.method << ','
        << r.iterations << ',' << (r.converged ? 1 : 0) << ',' << r.final_residual << ','
        << r.local_solves << ',' << r.seconds << '\n';
  }
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "schema,n,N,omega,L,offline_seconds,online_seconds,avg_outer,avg_inner,avg_sparse\n";
  out.precision(10);
  for (const auto& r : rows) {
    out << kCsvSchema << ',' << r.n << ',' << r.N << ',' << r.omega << ',' << r.layers << ','
        << r.offline_seconds << ',' << r.online_seconds << ',' << r.avg_outer << ','
        << r.avg_inner << ',' << r.avg_sparse << '\n';
  }
}

void write_fit_csv(std::ostream& out, const std::vector<ScalingFit>& fits) {
  out << "schema,quantity,slope,intercept\n";
  out.precision(10);
  for (const auto& f : fits) {
    out << kCsvSchema << ',' << f.quantity << ',' << f.slope << ',' << f.intercept << '\n';
  }
}

void write_field_csv(std::ostream& out, const Grid& grid, const Field& u) {
  out.precision(12);
  out << "# lsweep-field nx=" << grid.nx() << " nz=" << grid.nz() << " omega=" << grid.omega()
      << " h=" << grid.h() << '\n';
  out << "i,j,re,im\n";
  for (int j = 0; j < grid.nz(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const cplx v = u[static_cast<Eigen::Index>(grid.index(i, j))];
      out << i << ',' << j << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
}

}  // namespace lsweep
