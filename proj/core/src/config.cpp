#include "elastica/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>

namespace elastica {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_trimmed(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

double to_double(const std::string& key, std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, s));
  }
  return v;
}

int to_int(const std::string& key, std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, s));
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "on" || s == "true") return true;
  if (s == "off" || s == "false") return false;
  throw ConfigError(fmt::format("{}: expected on/off, got '{}'", key, s));
}

const char* on_off(bool b) { return b ? "on" : "off"; }

// Consumes keys from the map and remembers which ones were used.
class Reader {
 public:
  explicit Reader(const ConfigMap& map) : map_(map) {}

  const std::string* find(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }
  void get(const std::string& key, double& out) {
    if (auto* v = find(key)) out = to_double(key, *v);
  }
  void get(const std::string& key, int& out) {
    if (auto* v = find(key)) out = to_int(key, *v);
  }
  void get(const std::string& key, bool& out) {
    if (auto* v = find(key)) out = to_bool(key, *v);
  }
  void get(const std::string& key, std::string& out) {
    if (auto* v = find(key)) out = *v;
  }
  void reject_unused() const {
    for (const auto& [k, v] : map_) {
      if (!used_.count(k)) throw ConfigError("unknown key '" + k + "'");
    }
  }

 private:
  const ConfigMap& map_;
  std::set<std::string> used_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

std::string format_circles(const CurveSpec& spec) {
  std::string out;
  for (const auto& c : spec.components) {
    const auto* circle = std::get_if<Circle>(&c);
    if (!circle) throw ConfigError("init.circles: only circles can be written to a config");
    if (!out.empty()) out += "; ";
    out += fmt::format("{:.17g} {:.17g} {:.17g} {:+d}", circle->center[0], circle->center[1], circle->radius,
                       circle->orientation);
  }
  return out;
}

std::string format_shape(const ProceduralShape& shape) {
  std::string out;
  for (const auto& p : shape.primitives) {
    if (!out.empty()) out += "; ";
    switch (p.kind) {
      case ShapePrimitive::Kind::Disk:
        out += fmt::format("disk {:.17g} {:.17g} {:.17g}", p.a[0], p.a[1], p.radius);
        break;
      case ShapePrimitive::Kind::Hole:
        out += fmt::format("hole {:.17g} {:.17g} {:.17g}", p.a[0], p.a[1], p.radius);
        break;
      case ShapePrimitive::Kind::Capsule:
        out += fmt::format("capsule {:.17g} {:.17g} {:.17g} {:.17g} {:.17g}", p.a[0], p.a[1], p.b[0], p.b[1],
                           p.radius);
        break;
    }
  }
  return out;
}

}  // namespace

CurveSpec parse_circles(const std::string& value) {
  CurveSpec spec;
  for (const auto& item : split_trimmed(value, ';')) {
    const auto w = words(item);
    if (w.size() != 3 && w.size() != 4) {
      throw ConfigError("init.circles: expected 'x y r [orientation]', got '" + item + "'");
    }
    Circle c;
    c.center = {to_double("init.circles", w[0]), to_double("init.circles", w[1])};
    c.radius = to_double("init.circles", w[2]);
    if (w.size() == 4) {
      c.orientation = to_int("init.circles", w[3]);
      if (c.orientation != 1 && c.orientation != -1) throw ConfigError("init.circles: orientation must be +1 or -1");
    }
    spec.components.emplace_back(c);
  }
  if (spec.components.empty()) throw ConfigError("init.circles: no circles given");
  return spec;
}

ProceduralShape parse_shape(const std::string& value) {
  ProceduralShape shape;
  for (const auto& item : split_trimmed(value, ';')) {
    const auto w = words(item);
    ShapePrimitive p;
    auto num = [&](std::size_t i) { return to_double("init.shape", w[i]); };
    if ((w[0] == "disk" || w[0] == "hole") && w.size() == 4) {
      p.kind = w[0] == "disk" ? ShapePrimitive::Kind::Disk : ShapePrimitive::Kind::Hole;
      p.a = {num(1), num(2)};
      p.radius = num(3);
    } else if (w[0] == "capsule" && w.size() == 6) {
      p.kind = ShapePrimitive::Kind::Capsule;
      p.a = {num(1), num(2)};
      p.b = {num(3), num(4)};
      p.radius = num(5);
    } else {
      throw ConfigError("init.shape: cannot parse '" + item + "'");
    }
    if (!(p.radius > 0.0)) throw ConfigError("init.shape: radius must be positive in '" + item + "'");
    shape.primitives.push_back(p);
  }
  if (shape.primitives.empty()) throw ConfigError("init.shape: no primitives given");
  return shape;
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", lineno));
    if (value.empty()) throw ConfigError(fmt::format("line {}: empty value for '{}'", lineno, key));
    if (!map.emplace(key, value).second) throw ConfigError(fmt::format("line {}: repeated key '{}'", lineno, key));
  }
  return map;
}

SimulationConfig config_from_map(const ConfigMap& map, const std::filesystem::path& base_dir) {
  SimulationConfig cfg;
  Reader r(map);
  r.get("name", cfg.name);
  r.get("grid.n", cfg.grid_n);
  r.get("grid.extent", cfg.grid_extent);

  auto& e = cfg.energy;
  r.get("energy.epsilon", e.epsilon);
  r.get("energy.alpha", e.alpha_exp);
  r.get("energy.beta", e.beta_exp);
  r.get("energy.c_beta", e.c_beta);
  r.get("energy.sigma_mis", e.sigma_mis);
  r.get("energy.length_target", e.length_target);
  r.get("energy.winding_target", e.winding_target);
  r.get("energy.length", e.length_on);
  r.get("energy.winding", e.winding_on);
  r.get("energy.mismatch", e.mismatch_on);

  if (auto* v = r.find("winding.mode")) {
    if (*v == "smooth") {
      cfg.winding_mode = WindingMode::Smooth;
    } else if (*v == "improved") {
      cfg.winding_mode = WindingMode::Improved;
    } else {
      throw ConfigError("winding.mode: expected smooth or improved, got '" + *v + "'");
    }
  }
  r.get("winding.refresh", cfg.flow.weight_refresh);

  auto& f = cfg.flow;
  r.get("flow.steps", cfg.steps);
  r.get("flow.tau_relax", f.tau_relax);
  r.get("flow.tau_main", f.tau_main);
  r.get("flow.relax_steps", f.relax_steps);
  r.get("flow.newton_tol", f.newton_tol);
  r.get("flow.newton_max", f.newton_max);
  r.get("flow.cg_tol", f.cg_tol);
  r.get("flow.cg_max", f.cg_max);
  r.get("flow.adaptive_forcing", f.adaptive_forcing);
  if (auto* v = r.find("flow.preconditioner")) {
    if (*v == "spectral") {
      f.preconditioner = FlowParams::Pcg::Spectral;
    } else if (*v == "diagonal") {
      f.preconditioner = FlowParams::Pcg::Diagonal;
    } else {
      throw ConfigError("flow.preconditioner: expected spectral or diagonal, got '" + *v + "'");
    }
  }
  r.get("flow.max_halvings", f.max_halvings);
  r.get("flow.max_rejections", f.max_consecutive_rejections);
  r.get("flow.dissipation_factor", f.dissipation_factor);
  r.get("flow.tau_growth", f.tau_growth);
  r.get("flow.tau_max", f.tau_max);
  r.get("flow.penalty_ramp_steps", f.ramp.penalty_ramp_steps);
  r.get("flow.length_ramp_steps", f.ramp.L_ramp_steps);
  if (!map.count("flow.tau_max")) f.tau_max = std::max(f.tau_max, f.tau_main);

  auto& t = cfg.topology;
  r.get("topology.gamma", t.gamma_exp);
  r.get("topology.max_iters", t.max_iters);
  r.get("topology.gap_tol", t.gap_tol);
  r.get("topology.check_every", t.check_every);
  r.get("topology.restart_every", t.restart_every);
  r.get("topology.warm_start", t.warm_start);

  std::string out_dir;
  r.get("output.dir", out_dir);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  r.get("output.snapshot_every", cfg.snapshot_every);
  r.get("output.tv_every", cfg.tv_every);

  std::string kind = "curves";
  r.get("init.kind", kind);
  if (kind == "curves") {
    CurvesInit init;
    const auto* circles = r.find("init.circles");
    if (!circles) throw ConfigError("init.circles is required for init.kind = curves");
    init.curves = parse_circles(*circles);
    r.get("init.delta", init.delta);
    cfg.init = init;
  } else if (kind == "shape" || kind == "trilobe") {
    ShapeInit init;
    if (kind == "shape") {
      const auto* shape = r.find("init.shape");
      if (!shape) throw ConfigError("init.shape is required for init.kind = shape");
      init.shape = parse_shape(*shape);
    } else {
      double core = 0.3, lobe = 0.22, dist = 0.6, neck = 0.08, rot = 0.0;
      r.get("init.core_radius", core);
      r.get("init.lobe_radius", lobe);
      r.get("init.lobe_distance", dist);
      r.get("init.neck_radius", neck);
      r.get("init.rotation", rot);
      init.shape = make_trilobe(core, lobe, dist, neck, rot);
    }
    r.get("init.pixels", init.pixels);
    r.get("init.blur", init.blur_sigma);
    r.get("init.image_extent", init.image_extent);
    cfg.init = init;
  } else if (kind == "image") {
    ImageInit init;
    const auto* path = r.find("init.image");
    if (!path) throw ConfigError("init.image is required for init.kind = image");
    init.params.path = resolve(base_dir, *path);
    r.get("init.blur", init.params.blur_sigma);
    r.get("init.image_extent", init.params.image_extent);
    cfg.init = init;
  } else if (kind == "snapshot") {
    const auto* path = r.find("init.snapshot");
    if (!path) throw ConfigError("init.snapshot is required for init.kind = snapshot");
    cfg.init = SnapshotInit{resolve(base_dir, *path)};
  } else {
    throw ConfigError("init.kind: expected curves, shape, trilobe, image or snapshot, got '" + kind + "'");
  }

  r.reject_unused();
  cfg.validate();
  return cfg;
}

SimulationConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  return config_from_map(parse_config_text(text), base_dir);
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void SimulationConfig::validate() const {
  try {
    build_grid(grid_n, grid_extent);
    energy.validate();
    flow.validate();
    topology.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (steps < 0) throw ConfigError("flow.steps must be >= 0");
  if (snapshot_every < 0) throw ConfigError("output.snapshot_every must be >= 0");
  if (tv_every < 0) throw ConfigError("output.tv_every must be >= 0");
  if (const auto* c = std::get_if<CurvesInit>(&init)) {
    try {
      c->curves.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("init.circles: ") + e.what());
    }
  }
  if (const auto* s = std::get_if<ShapeInit>(&init)) {
    if (s->pixels < 8) throw ConfigError("init.pixels must be >= 8");
    if (s->blur_sigma < 0.0) throw ConfigError("init.blur must be >= 0");
    if (!(s->image_extent > 0.0)) throw ConfigError("init.image_extent must be positive");
  }
  if (const auto* i = std::get_if<ImageInit>(&init)) {
    if (i->params.blur_sigma < 0.0) throw ConfigError("init.blur must be >= 0");
  }
}

std::string to_config_text(const SimulationConfig& cfg) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) { out += fmt::format("{} = {}\n", key, value); };
  auto num = [](double v) { return fmt::format("{:.17g}", v); };
  line("name", cfg.name);
  line("grid.n", std::to_string(cfg.grid_n));
  line("grid.extent", num(cfg.grid_extent));
  const auto& e = cfg.energy;
  line("energy.epsilon", num(e.epsilon));
  line("energy.alpha", num(e.alpha_exp));
  line("energy.beta", num(e.beta_exp));
  line("energy.c_beta", num(e.c_beta));
  line("energy.sigma_mis", num(e.sigma_mis));
  line("energy.length_target", num(e.length_target));
  line("energy.winding_target", num(e.winding_target));
  line("energy.length", on_off(e.length_on));
  line("energy.winding", on_off(e.winding_on));
  line("energy.mismatch", on_off(e.mismatch_on));
  line("winding.mode", cfg.winding_mode == WindingMode::Smooth ? "smooth" : "improved");
  const auto& f = cfg.flow;
  line("winding.refresh", std::to_string(f.weight_refresh));
  line("flow.steps", std::to_string(cfg.steps));
  line("flow.tau_relax", num(f.tau_relax));
  line("flow.tau_main", num(f.tau_main));
  line("flow.relax_steps", std::to_string(f.relax_steps));
  line("flow.newton_tol", num(f.newton_tol));
  line("flow.newton_max", std::to_string(f.newton_max));
  line("flow.cg_tol", num(f.cg_tol));
  line("flow.cg_max", std::to_string(f.cg_max));
  line("flow.adaptive_forcing", f.adaptive_forcing ? "on" : "off");
  line("flow.preconditioner", f.preconditioner == FlowParams::Pcg::Spectral ? "spectral" : "diagonal");
  line("flow.max_halvings", std::to_string(f.max_halvings));
  line("flow.max_rejections", std::to_string(f.max_consecutive_rejections));
  line("flow.dissipation_factor", num(f.dissipation_factor));
  line("flow.tau_growth", num(f.tau_growth));
  line("flow.tau_max", num(f.tau_max));
  line("flow.penalty_ramp_steps", std::to_string(f.ramp.penalty_ramp_steps));
  line("flow.length_ramp_steps", std::to_string(f.ramp.L_ramp_steps));
  const auto& t = cfg.topology;
  line("topology.gamma", num(t.gamma_exp));
  line("topology.max_iters", std::to_string(t.max_iters));
  line("topology.gap_tol", num(t.gap_tol));
  line("topology.check_every", std::to_string(t.check_every));
  line("topology.restart_every", std::to_string(t.restart_every));
  line("topology.warm_start", on_off(t.warm_start));
  line("output.dir", cfg.output_dir.string());
  line("output.snapshot_every", std::to_string(cfg.snapshot_every));
  line("output.tv_every", std::to_string(cfg.tv_every));
  std::visit(
      [&](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, CurvesInit>) {
          line("init.kind", "curves");
          line("init.circles", format_circles(init.curves));
          line("init.delta", num(init.delta));
        } else if constexpr (std::is_same_v<T, ShapeInit>) {
          line("init.kind", "shape");
          line("init.shape", format_shape(init.shape));
          line("init.pixels", std::to_string(init.pixels));
          line("init.blur", num(init.blur_sigma));
          line("init.image_extent", num(init.image_extent));
        } else if constexpr (std::is_same_v<T, ImageInit>) {
          line("init.kind", "image");
          line("init.image", init.params.path.string());
          line("init.blur", num(init.params.blur_sigma));
          line("init.image_extent", num(init.params.image_extent));
        } else {
          line("init.kind", "snapshot");
          line("init.snapshot", init.path.string());
        }
      },
      cfg.init);
  return out;
}

}  // namespace elastica
