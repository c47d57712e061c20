#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "lsweep/checks.hpp"
#include "lsweep/layered.hpp"
#include "lsweep/oracle.hpp"
#include "test_util.hpp"

using namespace lsweep;
using lsweep::testing::random_field;
using lsweep::testing::rel_err;

TEST(Partition, NearEqualLargestFirst) {
  const Grid g = make_grid(8, 10, 0.1, 1.0);
  const Partition p = make_partition(g, 4, 2, Orientation::Horizontal);
  ASSERT_EQ(p.count(), 4);
  EXPECT_EQ(p.interior(0), (LayerRange{0, 2}));
  EXPECT_EQ(p.interior(1), (LayerRange{3, 5}));
  EXPECT_EQ(p.interior(2), (LayerRange{6, 7}));
  EXPECT_EQ(p.interior(3), (LayerRange{8, 9}));
  EXPECT_EQ(p.extended(0), (LayerRange{0, 4}));
  EXPECT_EQ(p.extended(3), (LayerRange{6, 9}));
}

TEST(Partition, LargeGridSizesAndDefaults) {
  const Grid g = make_square_grid(200, 200.0);
  const Partition p = make_partition(g, 4, 10, Orientation::Vertical);
  for (int l = 0; l < 4; ++l) EXPECT_EQ(p.interior(l).size(), 50);
  EXPECT_EQ(default_layer_count(200), 4);
  EXPECT_EQ(default_layer_count(20), 1);
  EXPECT_EQ(default_layer_count(400), 8);
  const Partition one = make_partition(g, 1, 10, Orientation::Horizontal);
  EXPECT_EQ(one.extended(0), (LayerRange{0, 199}));
}

TEST(Partition, RejectsBadInput) {
  const Grid g = make_grid(8, 10, 0.1, 1.0);
  EXPECT_THROW(make_partition(g, 6, 2, Orientation::Horizontal), std::invalid_argument);
  EXPECT_THROW(make_partition(g, 2, 0, Orientation::Horizontal), std::invalid_argument);
  EXPECT_THROW(make_partition(g, 0, 2, Orientation::Horizontal), std::invalid_argument);
}

TEST(Frame, RoundTrip) {
  const Grid g = make_grid(7, 5, 0.1, 1.0);
  for (auto o : {Orientation::Horizontal, Orientation::Vertical}) {
    const Frame f = make_frame(g, o);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto [t, s] = f.split(k);
      EXPECT_EQ(f.global(t, s), k);
    }
  }
  EXPECT_EQ(make_frame(g, Orientation::Vertical).n_normal(), 7);
}

TEST(Cutoff, ShapeAndShift) {
  const Grid g = make_square_grid(64, 64.0);
  const Partition p = make_partition(g, 4, 10, Orientation::Horizontal);
  const CutoffProfile c = make_cutoff(p, 1, 64.0, 1.0);
  for (int s = c.extended.lo; s <= c.extended.hi; ++s) {
    const double xi = c.xi_at(s);
    EXPECT_GE(xi, 0.0);
    EXPECT_LE(xi, 1.0);
    EXPECT_GE(c.shift_at(s).imag(), 0.0);
    EXPECT_EQ(c.shift_at(s).real(), 0.0);
    if (c.interior.contains(s)) {
      EXPECT_EQ(xi, 1.0);
      EXPECT_EQ(c.shift_at(s), cplx(0.0));
    } else {
      EXPECT_LT(xi, 1.0);
      EXPECT_GT(c.shift_at(s).imag(), 0.0);
    }
  }
  for (int s = c.extended.lo; s < c.interior.lo; ++s) EXPECT_LE(c.xi_at(s), c.xi_at(s + 1));
  for (int s = c.interior.hi; s < c.extended.hi; ++s) EXPECT_GE(c.xi_at(s), c.xi_at(s + 1));
  EXPECT_EQ(make_cutoff(p, 1, 64.0, 0.0).shift_at(c.extended.lo), cplx(0.0));
}

class LocalSystems : public ::testing::TestWithParam<Orientation> {};

TEST_P(LocalSystems, FactorizationAndCompatibility) {
  std::mt19937_64 rng(11);
  const Grid g = make_grid(24, 30, 1.0 / 30, 20.0);
  const KernelTable k(g);
  const Medium m = make_medium(SmoothBump{+1, 0.2}, g);
  const StencilSet st = compute_stencils(g, k);
  const SparseOperator c = assemble_C(st, m, k);
  const Partition p = make_partition(g, 3, 4, GetParam());
  const LayeredSystems sys = prepare_layers(p, st, m, k, 1.0);
  ASSERT_EQ(sys.layers.size(), 3u);
  for (const LocalSystem& l : sys.layers) {
    ASSERT_TRUE(l.factorized());
    EXPECT_EQ(compatibility_error(l, c), 0.0);
    const Field b = random_field(rng, l.size());
    EXPECT_LT((l.apply(l.solve(b)) - b).norm() / b.norm(), 1e-12);
    // Transpose against a dense copy of the local matrix.
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(l.size(), l.size());
    for (std::size_t r = 0; r < l.size(); ++r) {
      for (int e = 0; e < l.row_size(r); ++e) dense(r, l.col(r, e)) = l.value(r, e);
    }
    EXPECT_LT(rel_err(l.apply(b), dense * b), 1e-14);
    LocalSystem t = l.transposed();
    EXPECT_LT(rel_err(t.apply(b), dense.transpose() * b), 1e-14);
    t.factorize();
    EXPECT_LT((dense.transpose() * t.solve(b) - b).norm() / b.norm(), 1e-12);
    // Restriction, scatter and traces.
    const Field x = random_field(rng, g.size());
    const Field xl = l.restrict_interior(x);
    Field back = Field::Zero(x.size());
    l.scatter_interior(xl, back);
    const int s = l.interior().lo;
    const Trace tr = l.trace(xl, s);
    for (int t2 = 0; t2 < l.n_tangential(); ++t2) {
      EXPECT_EQ(tr[t2], x[p.frame.global(t2, s)]);
      EXPECT_EQ(back[p.frame.global(t2, s)], x[p.frame.global(t2, s)]);
    }
    if (l.extended().lo < l.interior().lo) {
      EXPECT_TRUE(l.trace(xl, l.extended().lo).isZero(0.0));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Orientations, LocalSystems,
                         ::testing::Values(Orientation::Horizontal, Orientation::Vertical));
