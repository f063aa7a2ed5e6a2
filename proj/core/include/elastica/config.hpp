#pragma once

// Simulation configuration: flat `key = value` text with dotted sections,
// `#` comments and on/off booleans. Unknown or repeated keys are errors.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>

#include "elastica/flow.hpp"
#include "elastica/functionals.hpp"
#include "elastica/image.hpp"
#include "elastica/profiles.hpp"
#include "elastica/topology.hpp"

namespace elastica {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Recovery field of analytic curves; delta <= 0 selects the default.
struct CurvesInit {
  CurveSpec curves;
  double delta = 0.0;
};

/// Rasterized procedural region, blurred and sampled like an image.
struct ShapeInit {
  ProceduralShape shape;
  int pixels = 512;
  double blur_sigma = 4.0;
  double image_extent = 1.0;
};

struct ImageInit {
  ImageInitParams params;
};

struct SnapshotInit {
  std::filesystem::path path;
};

using InitialCondition = std::variant<CurvesInit, ShapeInit, ImageInit, SnapshotInit>;

enum class WindingMode { Smooth, Improved };

struct SimulationConfig {
  std::string name = "unnamed";
  int grid_n = 256;
  double grid_extent = 1.25;
  EnergyParams energy;
  FlowParams flow;
  TVSolveParams topology;
  /// Smooth: penalize T_bar. Improved: weight the smoothed winding density by
  /// phi[u], refreshed every flow.weight_refresh steps.
  WindingMode winding_mode = WindingMode::Smooth;
  int steps = 1000;
  InitialCondition init = CurvesInit{};
  std::filesystem::path output_dir = "out";
  /// 0 disables field snapshots.
  int snapshot_every = 0;
  /// Cadence of the T~ diagnostic in the time series; 0 disables it.
  int tv_every = 0;

  /// Throws ConfigError naming the offending setting.
  void validate() const;
};

using ConfigMap = std::map<std::string, std::string>;

/// Splits text into key/value pairs; throws ConfigError with line numbers.
ConfigMap parse_config_text(const std::string& text);

/// Relative input paths (images, snapshots) resolve against `base_dir`.
SimulationConfig config_from_map(const ConfigMap& map, const std::filesystem::path& base_dir = {});
SimulationConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
SimulationConfig load_config(const std::filesystem::path& path);

/// Round-trippable text form.
std::string to_config_text(const SimulationConfig& cfg);

/// "0 0 0.5 +1; 0 0.75 0.2 +1" -> circles (x y r orientation).
CurveSpec parse_circles(const std::string& value);
/// "disk x y r; capsule x1 y1 x2 y2 r; hole x y r".
ProceduralShape parse_shape(const std::string& value);

}  // namespace elastica
