#include "sudonet/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace sudonet {

namespace {

void require_xy_scalar(const Network& net) {
  if (net.spec().input_dim() != 2 || net.spec().output_dim() != 1) {
    throw ConfigError("renderer needs a 2-input, 1-output network");
  }
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RgbImage render_decision_surface(const std::function<double(double, double)>& f,
                                 std::size_t resolution) {
  if (resolution < 2) throw ConfigError("render needs resolution >= 2");
  RgbImage img;
  img.width = resolution;
  img.height = resolution;
  img.pixels.assign(resolution * resolution * 3, 0);
  for (std::size_t r = 0; r < resolution; ++r) {
    const double y = 1.0 - 2.0 * static_cast<double>(r) / (resolution - 1);
    for (std::size_t c = 0; c < resolution; ++c) {
      const double x = -1.0 + 2.0 * static_cast<double>(c) / (resolution - 1);
      if (f(x, y) >= 0.0) {
        img.pixels[(r * resolution + c) * 3] = 255;  // red class
      }
    }
  }
  return img;
}

RgbImage render_decision_surface(const Network& net, std::size_t resolution) {
  require_xy_scalar(net);
  if (resolution < 2) throw ConfigError("render needs resolution >= 2");
  // Batch one raster row per forward call.
  RgbImage img;
  img.width = resolution;
  img.height = resolution;
  img.pixels.assign(resolution * resolution * 3, 0);
  Matrix row(resolution, 2);
  for (std::size_t r = 0; r < resolution; ++r) {
    const double y = 1.0 - 2.0 * static_cast<double>(r) / (resolution - 1);
    for (std::size_t c = 0; c < resolution; ++c) {
      row(c, 0) = -1.0 + 2.0 * static_cast<double>(c) / (resolution - 1);
      row(c, 1) = y;
    }
    const Matrix out = net.forward(row);
    for (std::size_t c = 0; c < resolution; ++c) {
      if (out(c, 0) >= 0.0) img.pixels[(r * resolution + c) * 3] = 255;
    }
  }
  return img;
}

namespace {

std::uint8_t to_intensity(double v) {
  // [-1,1] -> 0..255, round half away from zero, clamp.
  const double scaled = (v + 1.0) / 2.0 * 255.0;
  double rounded = std::round(scaled);
  if (rounded < 0.0) rounded = 0.0;
  if (rounded > 255.0) rounded = 255.0;
  return static_cast<std::uint8_t>(rounded);
}

}  // namespace

GrayImage render_reconstruction(const std::function<double(double, double)>& f,
                                std::size_t width, std::size_t height) {
  if (width < 2 || height < 2) throw ConfigError("reconstruction needs dims >= 2");
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.assign(width * height, 0);
  for (std::size_t r = 0; r < height; ++r) {
    const double y = -1.0 + 2.0 * static_cast<double>(r) / (height - 1);
    for (std::size_t c = 0; c < width; ++c) {
      const double x = -1.0 + 2.0 * static_cast<double>(c) / (width - 1);
      img.pixels[r * width + c] = to_intensity(f(x, y));
    }
  }
  return img;
}

GrayImage render_reconstruction(const Network& net, std::size_t width, std::size_t height) {
  require_xy_scalar(net);
  if (width < 2 || height < 2) throw ConfigError("reconstruction needs dims >= 2");
  GrayImage img;
  img.width = width;
  img.height = height;
  img.pixels.assign(width * height, 0);
  Matrix row(width, 2);
  for (std::size_t r = 0; r < height; ++r) {
    const double y = -1.0 + 2.0 * static_cast<double>(r) / (height - 1);
    for (std::size_t c = 0; c < width; ++c) {
      row(c, 0) = -1.0 + 2.0 * static_cast<double>(c) / (width - 1);
      row(c, 1) = y;
    }
    const Matrix out = net.forward(row);
    for (std::size_t c = 0; c < width; ++c) {
      img.pixels[r * width + c] = to_intensity(out(c, 0));
    }
  }
  return img;
}

void emit_histogram_csv(const std::filesystem::path& path, const ActivationHistogram& hist) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  if (hist.exact_levels) {
    out << "# columns: level,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
      out << fmt_double(hist.levels[i]) << "," << hist.counts[i] << "\n";
    }
  } else {
    out << "# columns: bin_low,bin_high,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
      out << fmt_double(hist.edges[i]) << "," << fmt_double(hist.edges[i + 1]) << ","
          << hist.counts[i] << "\n";
    }
  }
}

void emit_fit_curve_csv(const std::filesystem::path& path, const Matrix& x, const Matrix& pred) {
  if (x.rows() != pred.rows()) {
    throw ShapeError("fit curve: x " + x.shape_str() + " vs pred " + pred.shape_str());
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  out << "# columns: x,prediction\n";
  for (std::size_t r = 0; r < x.rows(); ++r) {
    out << fmt_double(x(r, 0)) << "," << fmt_double(pred(r, 0)) << "\n";
  }
}

}  // namespace sudonet
