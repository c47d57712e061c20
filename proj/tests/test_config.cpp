#include <cmath>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "lsweep/config.hpp"

using namespace lsweep;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, DefaultsAndRoundTrip) {
  const ExperimentConfig d = parse_config("");
  EXPECT_EQ(d.grid.n, 64);
  EXPECT_DOUBLE_EQ(d.grid.resolved_omega(), 64.0);
  EXPECT_EQ(d.solver.waves, 64);
  EXPECT_FALSE(d.partition.layers.has_value());
  const std::string text = dump_config(d);
  EXPECT_EQ(dump_config(parse_config(text)), text);
}

TEST(Config, ParsesEverySection) {
  const ExperimentConfig c = parse_config(R"(
seed: 9
grid: {n: 100, ppw: 8}
medium: {profile: gaussian_bumps, count: 5, amplitude: 0.1, min_width: 0.04}
partition: {layers: 3, extension: 6, shift_strength: 2}
solver: {outer_tol: 1.0e-9, transpose: algebraic, diagonal_rule: corrected, waves: 4}
scaling: {sizes: [32, 64]}
output: {dir: res, dump_field: true}
)");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_NEAR(c.grid.resolved_omega(), 2 * std::numbers::pi * 100 / 8, 1e-12);
  EXPECT_EQ(*c.partition.layers, 3);
  EXPECT_EQ(c.solver.transpose, TransposeMode::Algebraic);
  EXPECT_EQ(c.solver.diagonal, DiagonalRule::Corrected);
  EXPECT_EQ(c.scaling.sizes, (std::vector<int>{32, 64}));
  EXPECT_TRUE(c.output.dump_field);
  EXPECT_EQ(dump_config(parse_config(dump_config(c))), dump_config(c));
  // Gaussian bumps inherit the run seed unless given one.
  const Grid g = config_grid(c, 100);
  EXPECT_EQ(std::get<GaussianBumps>(c.medium.profile).count, 5);
  EXPECT_EQ(config_medium(c, g).values, config_medium(c, g).values);
}

TEST(Config, ErrorsNameTheLine) {
  EXPECT_EQ(error_of("grid:\n  n: 32\n  bogus: 1\n"), "t.yaml:3: unknown key 'bogus' in section 'grid'");
  EXPECT_NE(error_of("solver:\n  inner_tol: 2\n").find("t.yaml:2"), std::string::npos);
  EXPECT_NE(error_of("colour: red\n").find("unknown key 'colour'"), std::string::npos);
  EXPECT_NE(error_of("grid: {n: 32, omega: 5, ppw: 8}").find("either omega or ppw"), std::string::npos);
  EXPECT_NE(error_of("medium: {profile: lava}").find("unknown profile"), std::string::npos);
  EXPECT_NE(error_of("medium: {sign: 2}").find("sign must be"), std::string::npos);
  EXPECT_NE(error_of("partition: {layers: many}").find("layers"), std::string::npos);
  EXPECT_NE(error_of("scaling: {sizes: [64, 32]}").find("increasing"), std::string::npos);
  EXPECT_NE(error_of("solver: {transpose: sideways}").find("transpose"), std::string::npos);
  EXPECT_NE(error_of("grid: [1, 2").find("t.yaml:"), std::string::npos);
  EXPECT_THROW(load_config("/nonexistent/file.yaml"), ConfigError);
}

TEST(Config, DerivedObjects) {
  ExperimentConfig c = parse_config("grid: {n: 100}\npartition: {layers: 60}\n");
  const Grid g = config_grid(c, 200);
  EXPECT_DOUBLE_EQ(g.omega(), 200.0);
  EXPECT_DOUBLE_EQ(g.h(), 1.0 / 200);
  EXPECT_THROW(config_setup(c, config_grid(c, 100)), ConfigError);
  c.partition.layers.reset();
  const SetupOptions s = config_setup(c, config_grid(c, 200));
  EXPECT_EQ(s.extension, 10);
  ExperimentConfig under = parse_config("grid: {n: 32, omega: 40}\n");
  EXPECT_THROW(config_grid(under, 32), ConfigError);
}

TEST(Config, IncidentAngles) {
  ExperimentConfig c = parse_config("solver: {waves: 4}\n");
  const auto a = incident_angles(c);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_DOUBLE_EQ(a[1], std::numbers::pi / 2);
  c.solver.angle_jitter = 0.5;
  const auto j1 = incident_angles(c);
  EXPECT_EQ(j1, incident_angles(c));
  EXPECT_NE(j1, a);
  for (std::size_t w = 0; w < 4; ++w) EXPECT_LE(std::abs(j1[w] - a[w]), 0.5 * std::numbers::pi / 2 + 1e-12);
  c.seed = 2;
  EXPECT_NE(incident_angles(c), j1);
}
