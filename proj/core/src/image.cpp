#include "elastica/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace elastica {

namespace {

// Skips whitespace and '#' comments between PGM header tokens.
int read_header_int(std::istream& in, const std::filesystem::path& path) {
  while (true) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw std::runtime_error("pgm: malformed header in " + path.string());
  return value;
}

double segment_distance(Point p, Point a, Point b) {
  const double abx = b[0] - a[0], aby = b[1] - a[1];
  const double apx = p[0] - a[0], apy = p[1] - a[1];
  const double len2 = abx * abx + aby * aby;
  const double t = len2 > 0.0 ? std::clamp((apx * abx + apy * aby) / len2, 0.0, 1.0) : 0.0;
  return std::hypot(apx - t * abx, apy - t * aby);
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::runtime_error("pgm: expected binary P5 in " + path.string());
  GrayImage img;
  img.width = read_header_int(in, path);
  img.height = read_header_int(in, path);
  img.maxval = read_header_int(in, path);
  if (img.width <= 0 || img.height <= 0) throw std::runtime_error("pgm: zero-size image " + path.string());
  if (img.maxval <= 0 || img.maxval > 255) {
    throw std::runtime_error("pgm: only 8-bit images are supported: " + path.string());
  }
  in.get();  // single whitespace before the raster
  std::vector<unsigned char> raw(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw std::runtime_error("pgm: truncated raster in " + path.string());
  }
  img.pixels.assign(raw.begin(), raw.end());
  return img;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm: cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << '\n' << image.maxval << '\n';
  std::vector<unsigned char> raw(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), raw.begin(), [&](double v) {
    return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, static_cast<long>(image.maxval)));
  });
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("pgm: write failed for " + path.string());
}

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("blur: sigma must be non-negative");
  if (sigma == 0.0) return image;
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));
    sum += kernel[k + radius];
  }
  for (auto& k : kernel) k /= sum;

  const int w = image.width, h = image.height;
  GrayImage tmp = image;
  GrayImage out = image;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) s += kernel[k + radius] * image.at(std::clamp(x + k, 0, w - 1), y);
      tmp.at(x, y) = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) s += kernel[k + radius] * tmp.at(x, std::clamp(y + k, 0, h - 1));
      out.at(x, y) = s;
    }
  }
  return out;
}

bool ProceduralShape::contains(Point x) const {
  bool in = false;
  for (const auto& p : primitives) {
    if (p.kind == ShapePrimitive::Kind::Disk) {
      in = in || std::hypot(x[0] - p.a[0], x[1] - p.a[1]) < p.radius;
    } else if (p.kind == ShapePrimitive::Kind::Capsule) {
      in = in || segment_distance(x, p.a, p.b) < p.radius;
    }
  }
  for (const auto& p : primitives) {
    if (p.kind == ShapePrimitive::Kind::Hole && std::hypot(x[0] - p.a[0], x[1] - p.a[1]) < p.radius) {
      return false;
    }
  }
  return in;
}

ProceduralShape make_trilobe(double core_radius, double lobe_radius, double lobe_distance,
                             double neck_radius, double rotation) {
  ProceduralShape s;
  s.primitives.push_back({ShapePrimitive::Kind::Disk, {0.0, 0.0}, {0.0, 0.0}, core_radius});
  for (int k = 0; k < 3; ++k) {
    const double a = rotation + k * 2.0943951023931954923;  // 2 pi / 3
    const Point c{lobe_distance * std::cos(a), lobe_distance * std::sin(a)};
    s.primitives.push_back({ShapePrimitive::Kind::Disk, c, c, lobe_radius});
    s.primitives.push_back({ShapePrimitive::Kind::Capsule, {0.0, 0.0}, c, neck_radius});
  }
  return s;
}

GrayImage rasterize(const ProceduralShape& shape, int pixels, double image_extent) {
  if (pixels <= 0) throw std::invalid_argument("rasterize: pixel count must be positive");
  GrayImage img;
  img.width = img.height = pixels;
  img.maxval = 255;
  img.pixels.assign(static_cast<std::size_t>(pixels) * pixels, 0.0);
  const double px = 2.0 * image_extent / pixels;
  for (int y = 0; y < pixels; ++y) {
    for (int x = 0; x < pixels; ++x) {
      const Point p{-image_extent + (x + 0.5) * px, image_extent - (y + 0.5) * px};
      if (shape.contains(p)) img.at(x, y) = 255.0;
    }
  }
  return img;
}

ScalarField init_from_image(const GrayImage& image, double blur_sigma, double image_extent,
                            const DomainPtr& domain) {
  if (image.width <= 0 || image.height <= 0 || image.pixels.empty()) {
    throw std::invalid_argument("image init: empty image");
  }
  if (!(image_extent > 0.0)) throw std::invalid_argument("image init: image extent must be positive");
  const GrayImage blurred = gaussian_blur(image, blur_sigma);
  const double sx = image.width / (2.0 * image_extent);
  const double sy = image.height / (2.0 * image_extent);

  // Continuous pixel coordinates: pixel centers sit at integer + 0.5.
  auto sample = [&](double x, double y) {
    const double fx = (x + image_extent) * sx - 0.5;
    const double fy = (image_extent - y) * sy - 0.5;
    if (fx < -0.5 || fy < -0.5 || fx > image.width - 0.5 || fy > image.height - 0.5) return 0.0;
    const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, image.width - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, image.height - 1);
    const int x1 = std::min(x0 + 1, image.width - 1);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double tx = std::clamp(fx - x0, 0.0, 1.0);
    const double ty = std::clamp(fy - y0, 0.0, 1.0);
    const double top = (1 - tx) * blurred.at(x0, y0) + tx * blurred.at(x1, y0);
    const double bottom = (1 - tx) * blurred.at(x0, y1) + tx * blurred.at(x1, y1);
    return (1 - ty) * top + ty * bottom;
  };

  ScalarField u = make_phase_field(domain);
  const auto& g = domain->grid();
  const auto rows = domain->free_rows();
  for (int j = 0; j < g.n; ++j) {
    for (int i = rows[j].begin; i < rows[j].end; ++i) {
      const double v = sample(g.coord(i), g.coord(j));
      u.at(i, j) = std::clamp(2.0 * v / image.maxval - 1.0, -1.0, 1.0);
    }
  }
  return u;
}

ScalarField init_from_image(const ImageInitParams& params, const DomainPtr& domain) {
  if (params.blur_sigma < 0.0) throw std::invalid_argument("image init: blur sigma must be non-negative");
  return init_from_image(read_pgm(params.path), params.blur_sigma, params.image_extent, domain);
}

}  // namespace elastica
