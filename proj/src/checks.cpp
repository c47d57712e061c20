#include "lsweep/checks.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>

#include <Eigen/SVD>

#include "lsweep/oracle.hpp"
#include "lsweep/twolevel.hpp"

namespace lsweep {

double compatibility_error(const LocalSystem& sys, const SparseOperator& c) {
  const Frame& f = sys.frame();
  const int nt = sys.n_tangential();
  double worst = 0;
  for (int s = sys.interior().lo; s <= sys.interior().hi; ++s) {
    const bool inside_normal = (s - 1 >= sys.interior().lo || s == 0) &&
                               (s + 1 <= sys.interior().hi || s == f.n_normal() - 1);
    if (!inside_normal) continue;
    for (int t = 0; t < nt; ++t) {
      const std::size_t k = f.global(t, s);
      const std::size_t kl = sys.local_index(t, s);
      if (c.row_size(k) != sys.row_size(kl)) return INFINITY;
      for (int e = 0; e < c.row_size(k); ++e) {
        const auto [tt, ss] = f.split(static_cast<std::size_t>(c.col(k, e)));
        worst = std::max(worst, std::abs(c.value(k, e) - sys.entry(kl, sys.local_index(tt, ss))));
      }
    }
  }
  return worst;
}

namespace {

Field random_field(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  Field f(static_cast<Eigen::Index>(n));
  for (auto& v : f) v = cplx(d(rng), d(rng));
  return f;
}

double rel(const Field& a, const Field& b) { return (a - b).norm() / b.norm(); }

CheckResult timed_check(const std::string& name, double threshold,
                        const std::function<double()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  r.name = name;
  r.threshold = threshold;
  r.value = fn();
  r.passed = r.value <= threshold;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

std::vector<CheckResult> run_oracle_checks(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;

  const Grid g8 = make_grid(8, 8, 1.0 / 8, 8.0);
  const KernelTable k8(g8);
  const Medium m8 = make_medium(SmoothBump{}, g8);
  out.push_back(timed_check("convolution_vs_dense", 1e-12, [&] {
    const Field f = random_field(rng, g8.size());
    return rel(k8.convolve(f), oracle::dense_G(k8) * f);
  }));
  out.push_back(timed_check("apply_H_vs_dense", 1e-12, [&] {
    const Field f = random_field(rng, g8.size());
    return rel(LSOperator(k8, m8).apply(f), oracle::dense_H(k8, m8) * f);
  }));

  const Grid g10 = make_grid(10, 10, 1.0 / 10, 10.0);
  const KernelTable k10(g10);
  const Medium m10 = make_medium(SmoothBump{-1, 0.3}, g10);
  const StencilSet s10 = compute_stencils(g10, k10);
  out.push_back(timed_check("C_vs_pattern_of_AH", 1e-12, [&] {
    const SparseOperator c = assemble_C(s10, m10, k10);
    const Eigen::MatrixXcd ah = oracle::dense_A(s10, g10) * oracle::dense_H(k10, m10);
    const Eigen::MatrixXcd cd = oracle::dense(c);
    double worst = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      for (int e = 0; e < c.row_size(k); ++e) {
        worst = std::max(worst, std::abs(cd(static_cast<Eigen::Index>(k), c.col(k, e)) -
                                         ah(static_cast<Eigen::Index>(k), c.col(k, e))));
      }
    }
    return worst / ah.cwiseAbs().maxCoeff();
  }));
  out.push_back(timed_check("stencil_residual_vs_svd", 1e-10, [&] {
    double worst = 0;
    for (std::size_t ci = 0; ci < kStencilClassCount; ++ci) {
      const auto c = static_cast<StencilClass>(ci);
      const Eigen::MatrixXcd t = stencil_target_matrix(c, k10, s10.window_radius());
      const Eigen::BDCSVD<Eigen::MatrixXcd> svd(t);
      const double smin = svd.singularValues().minCoeff();
      worst = std::max(worst, std::abs(s10.at(c).residual - smin) / smin);
    }
    return worst;
  }));

  const Grid g32 = make_square_grid(32, 32.0);
  const Medium m32 = make_medium(SmoothBump{+1, 0.2}, g32);
  SetupOptions so;
  so.layers_horizontal = 2;
  so.layers_vertical = 2;
  const Solver s32(g32, m32, so);
  out.push_back(timed_check("grf_exact_traces", 1e-10, [&] {
    const Field gg = random_field(rng, g32.size());
    const Field v = oracle::sparse_direct_solve(s32.C(), gg);
    double worst = 0;
    for (const auto* sys : {&s32.horizontal(), &s32.vertical()}) {
      for (const auto& layer : sys->layers) {
        const Field w = grf_solve(layer, s32.C(), global_traces(layer, v),
                                  layer.restrict_interior(gg));
        Field a = Field::Zero(gg.size()), b = Field::Zero(gg.size());
        layer.scatter_interior(w, a);
        layer.scatter_interior(layer.restrict_interior(v), b);
        worst = std::max(worst, rel(a, b));
      }
    }
    return worst;
  }));
  out.push_back(timed_check("compatibility_rows", 1e-13, [&] {
    double worst = 0;
    for (const auto* sys : {&s32.horizontal(), &s32.vertical()}) {
      for (const auto& layer : sys->layers) {
        worst = std::max(worst, compatibility_error(layer, s32.C()));
      }
    }
    return worst;
  }));
  out.push_back(timed_check("single_layer_sweep_exact", 1e-12, [&] {
    SetupOptions one;
    one.layers_horizontal = 1;
    one.layers_vertical = 1;
    const Solver s1(g32, m32, one);
    const Field gg = random_field(rng, g32.size());
    const Field u = gs_sweep(s1.horizontal(), s1.C(), gg);
    return (s1.C().apply(u) - gg).norm() / gg.norm();
  }));

  const Grid gl = make_square_grid(32, 10.0);
  const Medium ml = make_medium(SmoothBump{+1, 0.3}, gl);
  out.push_back(timed_check("solve_ls_vs_dense", 1e-8, [&] {
    const Solver s(gl, ml);
    const Field f = s.op().rhs(incident_plane_wave(gl, 0.4));
    const Field u = s.solve_ls(f).first;
    return rel(u, oracle::dense_oracle_solve(ml, s.kernel(), f));
  }));
  return out;
}

}  // namespace lsweep
