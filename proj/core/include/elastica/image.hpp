#pragma once

// Grayscale images: binary PGM (P5) I/O, Gaussian blur, procedural shape
// rasterization and the image-based initial condition.

#include <filesystem>
#include <string>
#include <vector>

#include "elastica/grid.hpp"
#include "elastica/profiles.hpp"

namespace elastica {

struct GrayImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<double> pixels;  // row-major, row 0 at the top

  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// 8-bit binary PGM. Throws std::runtime_error on unreadable or malformed input.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

/// Separable Gaussian blur with edge clamping; sigma in pixels, 0 is a copy.
GrayImage gaussian_blur(const GrayImage& image, double sigma);

/// A region built as a union of disks and capsules minus disk-shaped holes.
struct ShapePrimitive {
  enum class Kind { Disk, Capsule, Hole };
  Kind kind = Kind::Disk;
  Point a{0.0, 0.0};
  Point b{0.0, 0.0};  // capsule end point
  double radius = 0.1;
};

struct ProceduralShape {
  std::vector<ShapePrimitive> primitives;

  bool contains(Point x) const;
};

/// Three disks at 120 degrees around a core disk, each joined by a capsule.
ProceduralShape make_trilobe(double core_radius, double lobe_radius, double lobe_distance,
                             double neck_radius, double rotation);

/// White (maxval) where the shape contains the pixel center, black elsewhere.
/// The image covers [-image_extent, image_extent]^2.
GrayImage rasterize(const ProceduralShape& shape, int pixels, double image_extent = 1.0);

struct ImageInitParams {
  std::filesystem::path path;
  double blur_sigma = 0.0;    // pixels
  double image_extent = 1.0;  // the image covers [-image_extent, image_extent]^2
};

/// Bilinear samples of the blurred image mapped affinely from [0, maxval] to
/// [-1, 1] and clipped; CLAMPED nodes are -1.
ScalarField init_from_image(const ImageInitParams& params, const DomainPtr& domain);
ScalarField init_from_image(const GrayImage& image, double blur_sigma, double image_extent,
                            const DomainPtr& domain);

}  // namespace elastica
