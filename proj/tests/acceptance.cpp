// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: lsweep_acceptance [c1 ... c10]   (no arguments runs all of them)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "lsweep/bench.hpp"
#include "lsweep/checks.hpp"
#include "lsweep/oracle.hpp"
#include "lsweep/twolevel.hpp"
#include "test_util.hpp"

using namespace lsweep;
using lsweep::testing::random_field;
using lsweep::testing::rel_err;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

int workers() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SetupOptions with_layers(int l) {
  SetupOptions o;
  o.layers_horizontal = l;
  o.layers_vertical = l;
  return o;
}

std::vector<double> angles(int count) {
  std::vector<double> a(static_cast<std::size_t>(count));
  for (int w = 0; w < count; ++w) a[w] = 2 * std::numbers::pi * w / count;
  return a;
}

// Mean bidirectional-preconditioned gmres iterations on C u = A f over the waves.
double mean_sparse_iterations(const Solver& s, int waves, double tol, bool* converged) {
  const auto a = angles(waves);
  std::vector<double> it(a.size());
  std::vector<char> ok(a.size());
  parallel_for(waves, workers(), [&](int w) {
    const auto rep = s.solve_sparsified(s.sparse_rhs(incident_plane_wave(s.grid(), a[w])), tol).second;
    it[w] = rep.iterations;
    ok[w] = rep.converged;
  });
  *converged = std::all_of(ok.begin(), ok.end(), [](char c) { return c; });
  double sum = 0;
  for (double v : it) sum += v;
  return sum / waves;
}

Outcome c1() {
  const double t0 = now();
  const Grid g = make_square_grid(32, 10.0);
  double worst = 0;
  for (int sign : {+1, -1}) {
    const Medium m = make_medium(SmoothBump{sign, 0.3}, g);
    const Solver s(g, m);
    const Field f = s.op().rhs(incident_plane_wave(g, 0.4));
    const Field u = s.solve_ls(f, TwoLevelOptions{1e-10, 1e-3}).first;
    worst = std::max(worst, rel_err(u, oracle::dense_oracle_solve(m, s.kernel(), f)));
  }
  const double t = now() - t0;
  return {worst <= 1e-8 && t < 10, fmt("max rel err %.2e (<= 1e-8), %.1f s (< 10 s)", worst, t)};
}

Outcome c2() {
  const double t0 = now();
  std::mt19937_64 rng(2);
  double worst = 0;
  for (int n : {32, 64}) {
    const Grid g = make_square_grid(n, n);
    for (int sign : {+1, -1}) {
      const Medium m = make_medium(SmoothBump{sign, 0.2}, g);
      for (int l : {2, 4, 8}) {
        const Solver s(g, m, with_layers(l));
        const Field rhs = random_field(rng, g.size());
        const Field v = oracle::sparse_direct_solve(s.C(), rhs);
        for (const auto* sys : {&s.horizontal(), &s.vertical()}) {
          for (const auto& layer : sys->layers) {
            const Field w = grf_solve(layer, s.C(), global_traces(layer, v), layer.restrict_interior(rhs));
            Field a = Field::Zero(v.size()), b = Field::Zero(v.size());
            layer.scatter_interior(w, a);
            layer.scatter_interior(layer.restrict_interior(v), b);
            worst = std::max(worst, rel_err(a, b));
          }
        }
      }
    }
  }
  const double t = now() - t0;
  return {worst <= 1e-10 && t < 30, fmt("max rel err %.2e (<= 1e-10), %.1f s (< 30 s)", worst, t)};
}

Outcome c3() {
  const double t0 = now();
  std::mt19937_64 rng(3);
  double worst = 0;
  for (int nx = 4; nx <= 12; ++nx) {
    for (int nz = 4; nz <= 12; ++nz) {
      const Grid g = make_grid(nx, nz, 1.0 / 12, 12.0);
      const KernelTable k(g);
      const Eigen::MatrixXcd dense = oracle::dense_G(k);
      for (int r = 0; r < 100; ++r) {
        const Field f = random_field(rng, g.size());
        worst = std::max(worst, rel_err(k.convolve(f), dense * f));
      }
    }
  }
  const double t = now() - t0;
  return {worst <= 1e-12 && t < 5, fmt("max rel err %.2e over 81 grids x 100 fields (<= 1e-12), %.1f s (< 5 s)", worst, t)};
}

Outcome c4() {
  const double t0 = now();
  const Grid g = make_square_grid(10, 10.0);
  const KernelTable k(g);
  const Medium m = make_medium(SmoothBump{-1, 0.3}, g);
  const StencilSet st = compute_stencils(g, k);
  const SparseOperator c = assemble_C(st, m, k);
  const Eigen::MatrixXcd ah = oracle::dense_A(st, g) * oracle::dense_H(k, m);
  const double scale = ah.cwiseAbs().maxCoeff();
  double pattern = 0;
  for (std::size_t r = 0; r < c.size(); ++r) {
    for (int e = 0; e < c.row_size(r); ++e) {
      pattern = std::max(pattern, std::abs(c.value(r, e) - ah(r, c.col(r, e))) / scale);
    }
  }
  double sigma = 0;
  for (std::size_t ci = 0; ci < kStencilClassCount; ++ci) {
    const auto cls = static_cast<StencilClass>(ci);
    Eigen::MatrixXcd t = stencil_target_matrix(cls, k, st.window_radius());
    const lapack_int rows = static_cast<lapack_int>(t.rows()), cols = static_cast<lapack_int>(t.cols());
    std::vector<double> s(static_cast<std::size_t>(std::min(rows, cols))), superb(s.size());
    LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', rows, cols, t.data(), rows, s.data(), nullptr, 1, nullptr, 1,
                   superb.data());
    const double smin = *std::min_element(s.begin(), s.end());
    sigma = std::max(sigma, std::abs(st.at(cls).residual - smin) / smin);
  }
  const double t = now() - t0;
  return {pattern <= 1e-12 && sigma <= 1e-10 && t < 5,
          fmt("pattern err %.2e (<= 1e-12), sigma_min rel err %.2e (<= 1e-10), %.1f s (< 5 s)", pattern, sigma, t)};
}

Outcome c5() {
  const double t0 = now();
  const Grid g = make_square_grid(200, 200.0);
  std::string detail;
  bool ok = true;
  for (int sign : {+1, -1}) {
    const Solver s(g, make_medium(SmoothBump{sign, 0.2}, g), with_layers(4));
    bool conv = false;
    const double avg = mean_sparse_iterations(s, 16, 1e-6, &conv);
    ok = ok && conv && avg <= 6;
    detail += fmt("sign %+d avg %.2f; ", sign, avg);
  }
  const double t = now() - t0;
  return {ok && t < 600, detail + fmt("(<= 6), %.0f s (< 600 s)", t)};
}

Outcome c6() {
  const double t0 = now();
  std::vector<double> avg;
  std::string detail;
  bool conv_all = true;
  for (int n : {100, 200, 400}) {
    const Grid g = make_square_grid(n, n);
    const Solver s(g, make_medium(SmoothBump{+1, 0.2}, g));
    bool conv = false;
    avg.push_back(mean_sparse_iterations(s, 8, 1e-6, &conv));
    conv_all = conv_all && conv;
    detail += fmt("n=%d L=%d avg %.2f; ", n, s.horizontal().partition.count(), avg.back());
  }
  const double growth = std::max(avg[1] - avg[0], avg[2] - avg[1]);
  const double t = now() - t0;
  return {conv_all && growth <= 3 && t < 1800,
          detail + fmt("max increase per doubling %.2f (<= 3), %.0f s (< 1800 s)", growth, t)};
}

Outcome c7() {
  const double t0 = now();
  std::vector<double> outer;
  std::string detail;
  bool conv_all = true;
  for (int w : {64, 128, 200}) {
    const Grid g = make_square_grid(w, w);
    const Solver s(g, make_medium(SmoothBump{+1, 0.2}, g));
    const auto a = angles(8);
    std::vector<double> it(a.size());
    std::vector<char> ok(a.size());
    parallel_for(8, workers(), [&](int k) {
      const auto rep = s.scatter(incident_plane_wave(g, a[k])).second;
      it[k] = rep.iterations;
      ok[k] = rep.converged;
    });
    double sum = 0;
    for (double v : it) sum += v;
    outer.push_back(sum / 8);
    conv_all = conv_all && std::all_of(ok.begin(), ok.end(), [](char c) { return c; });
    detail += fmt("omega=%d avg outer %.2f; ", w, outer.back());
  }
  const double spread = *std::max_element(outer.begin(), outer.end()) - *std::min_element(outer.begin(), outer.end());
  const double t = now() - t0;
  return {conv_all && spread <= 3 && t < 1200, detail + fmt("spread %.2f (<= 3), %.0f s (< 1200 s)", spread, t)};
}

Outcome c8() {
  const double t0 = now();
  std::vector<double> n_points, secs;
  std::string detail;
  for (int n : {64, 128, 256}) {
    const Grid g = make_square_grid(n, n);
    const Medium m = make_medium(SmoothBump{+1, 0.2}, g);
    std::vector<double> reps;
    for (int r = 0; r < 3; ++r) reps.push_back(Solver(g, m).timings().total);
    n_points.push_back(static_cast<double>(g.size()));
    secs.push_back(median(reps));
    detail += fmt("n=%d %.3f s; ", n, secs.back());
  }
  const double slope = loglog_fit("offline", n_points, secs).slope;
  const double t = now() - t0;
  return {slope >= 0.8 && slope <= 1.3 && t < 600,
          detail + fmt("slope %.3f (in [0.8, 1.3]), %.0f s (< 600 s)", slope, t)};
}

Outcome c9() {
  const Grid g = make_square_grid(64, 64.0);
  const Solver s(g, make_medium(ZeroMedium{}, g));
  int worst_iter = 0;
  double worst_norm = 0;
  for (double a : angles(4)) {
    const auto [u, rep] = s.scatter(incident_plane_wave(g, a));
    worst_iter = std::max(worst_iter, rep.iterations);
    worst_norm = std::max(worst_norm, u.cwiseAbs().maxCoeff());
  }
  return {worst_iter == 0 && worst_norm == 0.0,
          fmt("max outer iterations %d (== 0), max |u| %.1e (== 0)", worst_iter, worst_norm)};
}

Outcome c10() {
  const double t0 = now();
  const Grid g = make_square_grid(64, 64.0);
  double worst = 0;
  for (int sign : {+1, -1}) {
    const Solver s(g, make_medium(SmoothBump{sign, 0.2}, g), with_layers(4));
    for (const auto* sys : {&s.horizontal(), &s.vertical()}) {
      for (const auto& layer : sys->layers) worst = std::max(worst, compatibility_error(layer, s.C()));
    }
  }
  const double t = now() - t0;
  return {worst <= 1e-13 && t < 10, fmt("max row difference %.2e (<= 1e-13), %.1f s (< 10 s)", worst, t)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::pair<const char*, std::function<Outcome()>>> all{
      {"c1", {"oracle equivalence", c1}},
      {"c2", {"GRF exactness", c2}},
      {"c3", {"FFT vs dense convolution", c3}},
      {"c4", {"sparsifier consistency", c4}},
      {"c5", {"n=200 bidirectional iterations", c5}},
      {"c6", {"logarithmic inner growth", c6}},
      {"c7", {"frequency-robust outer loop", c7}},
      {"c8", {"offline linearity", c8}},
      {"c9", {"trivial medium identity", c9}},
      {"c10", {"compatibility condition", c10}},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.empty()) {
    for (int i = 1; i <= 10; ++i) wanted.push_back("c" + std::to_string(i));
  }
  bool ok = true;
  for (const auto& id : wanted) {
    const auto it = all.find(id);
    if (it == all.end()) {
      std::fprintf(stderr, "unknown criterion %s\n", id.c_str());
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%-4s %s  %s: %s\n", id.c_str(), o.passed ? "PASS" : "FAIL", it->second.first, o.detail.c_str());
    std::fflush(stdout);
    ok = ok && o.passed;
  }
  return ok ? 0 : 1;
}
