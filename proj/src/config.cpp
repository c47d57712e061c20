#include "lsweep/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace lsweep {

namespace {

struct Ctx {
  std::string source;

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    std::ostringstream msg;
    msg << source;
    if (node.IsDefined() && node.Mark().line >= 0) msg << ":" << node.Mark().line + 1;
    msg << ": " << what;
    throw ConfigError(msg.str());
  }

  void allow(const YAML::Node& map, const std::string& section,
             std::initializer_list<const char*> keys) const {
    if (!map.IsMap()) fail(map, "section '" + section + "' must be a mapping");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!ok.count(key)) fail(kv.first, "unknown key '" + key + "' in section '" + section + "'");
    }
  }

  template <class T>
  T get(const YAML::Node& node, const std::string& key) const {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "bad value for '" + key + "'");
    }
  }

  template <class T>
  void read(const YAML::Node& map, const char* key, T& out) const {
    if (const YAML::Node v = map[key]) out = get<T>(v, key);
  }
  template <class T>
  void read(const YAML::Node& map, const char* key, std::optional<T>& out) const {
    if (const YAML::Node v = map[key]) out = get<T>(v, key);
  }

  void positive(const YAML::Node& map, const char* key, double v) const {
    if (!(v > 0)) fail(map[key].IsDefined() ? map[key] : map, std::string(key) + " must be positive");
  }
};

void read_center(const Ctx& ctx, const YAML::Node& m, double& x, double& z) {
  if (const YAML::Node c = m["center"]) {
    if (!c.IsSequence() || c.size() != 2) ctx.fail(c, "center must be a pair [x, z]");
    x = ctx.get<double>(c[0], "center");
    z = ctx.get<double>(c[1], "center");
  }
}

void parse_medium(const Ctx& ctx, const YAML::Node& m, MediumConfig& out) {
  std::string profile = "smooth_bump";
  if (m["profile"]) profile = ctx.get<std::string>(m["profile"], "profile");
  if (profile == "smooth_bump") {
    ctx.allow(m, "medium", {"profile", "sign", "amplitude", "center", "radius", "margin"});
    SmoothBump b;
    ctx.read(m, "sign", b.sign);
    ctx.read(m, "amplitude", b.amplitude);
    ctx.read(m, "radius", b.radius);
    read_center(ctx, m, b.center_x, b.center_z);
    if (b.sign != 1 && b.sign != -1) ctx.fail(m["sign"], "sign must be 1 or -1");
    out.profile = b;
  } else if (profile == "gaussian_bumps") {
    ctx.allow(m, "medium", {"profile", "count", "amplitude", "seed", "min_width", "margin"});
    GaussianBumps b;
    ctx.read(m, "count", b.count);
    ctx.read(m, "amplitude", b.amplitude);
    ctx.read(m, "min_width", b.min_width);
    ctx.read(m, "seed", out.seed);
    if (b.count < 1) ctx.fail(m["count"], "count must be at least 1");
    out.profile = b;
  } else if (profile == "plasma_ring") {
    ctx.allow(m, "medium", {"profile", "inner_amplitude", "ring_radius", "center", "margin"});
    PlasmaRing p;
    ctx.read(m, "inner_amplitude", p.inner_amplitude);
    ctx.read(m, "ring_radius", p.ring_radius);
    read_center(ctx, m, p.center_x, p.center_z);
    out.profile = p;
  } else if (profile == "zero") {
    ctx.allow(m, "medium", {"profile", "margin"});
    out.profile = ZeroMedium{};
  } else {
    ctx.fail(m["profile"], "unknown profile '" + profile +
                               "' (smooth_bump, gaussian_bumps, plasma_ring, zero)");
  }
  ctx.read(m, "margin", out.margin);
  if (!(out.margin > 0 && out.margin < 0.5)) ctx.fail(m["margin"], "margin must lie in (0, 0.5)");
}

}  // namespace

double GridConfig::resolved_omega() const {
  if (omega) return *omega;
  if (ppw) return 2.0 * std::numbers::pi * n / *ppw;
  return n;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  const Ctx ctx{source};
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream msg;
    msg << source << ":" << e.mark.line + 1 << ": " << e.msg;
    throw ConfigError(msg.str());
  }
  ExperimentConfig cfg;
  if (root.IsNull()) return cfg;
  ctx.allow(root, "top level",
            {"grid", "medium", "partition", "solver", "scaling", "output", "seed"});
  ctx.read(root, "seed", cfg.seed);

  if (const YAML::Node g = root["grid"]) {
    ctx.allow(g, "grid", {"n", "omega", "ppw", "min_ppw"});
    ctx.read(g, "n", cfg.grid.n);
    ctx.read(g, "omega", cfg.grid.omega);
    ctx.read(g, "ppw", cfg.grid.ppw);
    ctx.read(g, "min_ppw", cfg.grid.min_ppw);
    if (cfg.grid.n < 4) ctx.fail(g["n"], "n must be at least 4");
    if (cfg.grid.omega && cfg.grid.ppw) ctx.fail(g["ppw"], "give either omega or ppw, not both");
    if (cfg.grid.omega) ctx.positive(g, "omega", *cfg.grid.omega);
    if (cfg.grid.ppw) ctx.positive(g, "ppw", *cfg.grid.ppw);
    ctx.positive(g, "min_ppw", cfg.grid.min_ppw);
  }
  if (const YAML::Node m = root["medium"]) parse_medium(ctx, m, cfg.medium);

  if (const YAML::Node p = root["partition"]) {
    ctx.allow(p, "partition", {"layers", "extension", "shift_strength"});
    if (const YAML::Node l = p["layers"]) {
      if (l.IsScalar() && l.Scalar() == "auto") {
        cfg.partition.layers.reset();
      } else {
        cfg.partition.layers = ctx.get<int>(l, "layers");
        if (*cfg.partition.layers < 1) ctx.fail(l, "layers must be 'auto' or a positive integer");
      }
    }
    ctx.read(p, "extension", cfg.partition.extension);
    ctx.read(p, "shift_strength", cfg.partition.shift_strength);
    if (cfg.partition.extension < 1) ctx.fail(p["extension"], "extension must be at least 1");
    if (cfg.partition.shift_strength < 0) {
      ctx.fail(p["shift_strength"], "shift_strength must be non-negative");
    }
  }

  if (const YAML::Node s = root["solver"]) {
    ctx.allow(s, "solver",
              {"outer_tol", "inner_tol", "sparse_tol", "flexible", "restart", "max_outer",
               "max_inner", "waves", "angle_jitter", "window_radius", "diagonal_rule",
               "transpose", "repetitions"});
    SolverConfig& sc = cfg.solver;
    ctx.read(s, "outer_tol", sc.outer_tol);
    ctx.read(s, "inner_tol", sc.inner_tol);
    ctx.read(s, "sparse_tol", sc.sparse_tol);
    ctx.read(s, "flexible", sc.flexible);
    ctx.read(s, "restart", sc.restart);
    ctx.read(s, "max_outer", sc.max_outer);
    ctx.read(s, "max_inner", sc.max_inner);
    ctx.read(s, "waves", sc.waves);
    ctx.read(s, "angle_jitter", sc.angle_jitter);
    ctx.read(s, "window_radius", sc.window_radius);
    ctx.read(s, "repetitions", sc.repetitions);
    auto check_tol = [&](const char* key, double v) {
      if (!(v > 0 && v < 1)) ctx.fail(s[key].IsDefined() ? s[key] : s, std::string(key) + " must lie in (0, 1)");
    };
    check_tol("outer_tol", sc.outer_tol);
    check_tol("inner_tol", sc.inner_tol);
    check_tol("sparse_tol", sc.sparse_tol);
    for (const char* key : {"restart", "max_outer", "max_inner", "waves", "repetitions"}) {
      if (const YAML::Node v = s[key]; v && ctx.get<int>(v, key) < 1) {
        ctx.fail(v, std::string(key) + " must be at least 1");
      }
    }
    if (sc.window_radius < 2) ctx.fail(s["window_radius"], "window_radius must be at least 2");
    if (sc.angle_jitter < 0 || sc.angle_jitter > 1) {
      ctx.fail(s["angle_jitter"], "angle_jitter must lie in [0, 1]");
    }
    if (const YAML::Node d = s["diagonal_rule"]) {
      const auto v = ctx.get<std::string>(d, "diagonal_rule");
      if (v == "cell_average") sc.diagonal = DiagonalRule::CellAverage;
      else if (v == "corrected") sc.diagonal = DiagonalRule::Corrected;
      else ctx.fail(d, "diagonal_rule must be cell_average or corrected");
    }
    if (const YAML::Node t = s["transpose"]) {
      const auto v = ctx.get<std::string>(t, "transpose");
      if (v == "geometric") sc.transpose = TransposeMode::Geometric;
      else if (v == "algebraic") sc.transpose = TransposeMode::Algebraic;
      else ctx.fail(t, "transpose must be geometric or algebraic");
    }
  }

  if (const YAML::Node s = root["scaling"]) {
    ctx.allow(s, "scaling", {"sizes"});
    if (const YAML::Node z = s["sizes"]) {
      if (!z.IsSequence() || z.size() == 0) ctx.fail(z, "sizes must be a non-empty list");
      cfg.scaling.sizes.clear();
      for (const auto& v : z) {
        const int n = ctx.get<int>(v, "sizes");
        if (n < 4) ctx.fail(v, "sizes must be at least 4");
        if (!cfg.scaling.sizes.empty() && n <= cfg.scaling.sizes.back()) {
          ctx.fail(v, "sizes must be strictly increasing");
        }
        cfg.scaling.sizes.push_back(n);
      }
    }
  }

  if (const YAML::Node o = root["output"]) {
    ctx.allow(o, "output", {"dir", "dump_field"});
    ctx.read(o, "dir", cfg.output.dir);
    ctx.read(o, "dump_field", cfg.output.dump_field);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string dump_config(const ExperimentConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(12);
  e << YAML::BeginMap;
  e << YAML::Key << "seed" << YAML::Value << c.seed;

  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n" << YAML::Value << c.grid.n;
  if (c.grid.ppw) e << YAML::Key << "ppw" << YAML::Value << *c.grid.ppw;
  else e << YAML::Key << "omega" << YAML::Value << c.grid.resolved_omega();
  e << YAML::Key << "min_ppw" << YAML::Value << c.grid.min_ppw;
  e << YAML::EndMap;

  e << YAML::Key << "medium" << YAML::Value << YAML::BeginMap;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SmoothBump>) {
          e << YAML::Key << "profile" << YAML::Value << "smooth_bump";
          e << YAML::Key << "sign" << YAML::Value << p.sign;
          e << YAML::Key << "amplitude" << YAML::Value << p.amplitude;
          e << YAML::Key << "center" << YAML::Value << YAML::Flow << YAML::BeginSeq
            << p.center_x << p.center_z << YAML::EndSeq;
          e << YAML::Key << "radius" << YAML::Value << p.radius;
        } else if constexpr (std::is_same_v<T, GaussianBumps>) {
          e << YAML::Key << "profile" << YAML::Value << "gaussian_bumps";
          e << YAML::Key << "count" << YAML::Value << p.count;
          e << YAML::Key << "amplitude" << YAML::Value << p.amplitude;
          e << YAML::Key << "min_width" << YAML::Value << p.min_width;
          e << YAML::Key << "seed" << YAML::Value << c.medium.seed.value_or(c.seed);
        } else if constexpr (std::is_same_v<T, PlasmaRing>) {
          e << YAML::Key << "profile" << YAML::Value << "plasma_ring";
          e << YAML::Key << "inner_amplitude" << YAML::Value << p.inner_amplitude;
          e << YAML::Key << "ring_radius" << YAML::Value << p.ring_radius;
          e << YAML::Key << "center" << YAML::Value << YAML::Flow << YAML::BeginSeq
            << p.center_x << p.center_z << YAML::EndSeq;
        } else {
          e << YAML::Key << "profile" << YAML::Value << "zero";
        }
      },
      c.medium.profile);
  e << YAML::Key << "margin" << YAML::Value << c.medium.margin;
  e << YAML::EndMap;

  e << YAML::Key << "partition" << YAML::Value << YAML::BeginMap;
  if (c.partition.layers) e << YAML::Key << "layers" << YAML::Value << *c.partition.layers;
  else e << YAML::Key << "layers" << YAML::Value << "auto";
  e << YAML::Key << "extension" << YAML::Value << c.partition.extension;
  e << YAML::Key << "shift_strength" << YAML::Value << c.partition.shift_strength;
  e << YAML::EndMap;

  const SolverConfig& s = c.solver;
  e << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "outer_tol" << YAML::Value << s.outer_tol;
  e << YAML::Key << "inner_tol" << YAML::Value << s.inner_tol;
  e << YAML::Key << "sparse_tol" << YAML::Value << s.sparse_tol;
  e << YAML::Key << "flexible" << YAML::Value << s.flexible;
  e << YAML::Key << "restart" << YAML::Value << s.restart;
  e << YAML::Key << "max_outer" << YAML::Value << s.max_outer;
  e << YAML::Key << "max_inner" << YAML::Value << s.max_inner;
  e << YAML::Key << "waves" << YAML::Value << s.waves;
  e << YAML::Key << "angle_jitter" << YAML::Value << s.angle_jitter;
  e << YAML::Key << "window_radius" << YAML::Value << s.window_radius;
  e << YAML::Key << "diagonal_rule" << YAML::Value
    << (s.diagonal == DiagonalRule::CellAverage ? "cell_average" : "corrected");
  e << YAML::Key << "transpose" << YAML::Value << to_string(s.transpose);
  e << YAML::Key << "repetitions" << YAML::Value << s.repetitions;
  e << YAML::EndMap;

  e << YAML::Key << "scaling" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "sizes" << YAML::Value << YAML::Flow << c.scaling.sizes;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "dir" << YAML::Value << c.output.dir;
  e << YAML::Key << "dump_field" << YAML::Value << c.output.dump_field;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

Grid config_grid(const ExperimentConfig& c, int n) {
  const double omega = c.grid.resolved_omega() * n / c.grid.n;
  GridOptions opts;
  opts.min_points_per_wavelength = c.grid.min_ppw;
  try {
    return make_square_grid(n, omega, opts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

Medium config_medium(const ExperimentConfig& c, const Grid& grid) {
  Profile p = c.medium.profile;
  if (auto* b = std::get_if<GaussianBumps>(&p)) b->seed = c.medium.seed.value_or(c.seed);
  try {
    return make_medium(p, grid, MediumOptions{c.medium.margin});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("medium: ") + e.what());
  }
}

SetupOptions config_setup(const ExperimentConfig& c, const Grid& grid) {
  SetupOptions s;
  s.kernel.diagonal = c.solver.diagonal;
  s.stencil.window_radius = c.solver.window_radius;
  const int lh = c.partition.layers.value_or(default_layer_count(grid.nz()));
  const int lv = c.partition.layers.value_or(default_layer_count(grid.nx()));
  if (2 * lh > grid.nz() || 2 * lv > grid.nx()) {
    throw ConfigError("partition: too many layers for a grid of " + std::to_string(grid.nx()) +
                      " points");
  }
  s.layers_horizontal = lh;
  s.layers_vertical = lv;
  s.extension = c.partition.extension;
  s.shift_strength = c.partition.shift_strength;
  s.transpose = c.solver.transpose;
  return s;
}

TwoLevelOptions config_two_level(const ExperimentConfig& c) {
  TwoLevelOptions t;
  t.outer_tol = c.solver.outer_tol;
  t.inner_tol = c.solver.inner_tol;
  t.flexible = c.solver.flexible;
  t.restart = c.solver.restart;
  t.max_outer = c.solver.max_outer;
  t.max_inner = c.solver.max_inner;
  return t;
}

std::vector<double> incident_angles(const ExperimentConfig& c) {
  const int w = c.solver.waves;
  const double step = 2.0 * std::numbers::pi / w;
  std::mt19937_64 rng(c.seed);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(w));
  for (int k = 0; k < w; ++k) {
    double a = k * step;
    if (c.solver.angle_jitter > 0) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
      a += c.solver.angle_jitter * step * u;
    }
    out.push_back(a);
  }
  return out;
}

}  // namespace lsweep
