#include "sudonet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

namespace sudonet {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int cell_index(double coord, int board) {
  int c = static_cast<int>(std::floor((coord + 1.0) / 2.0 * board));
  if (c >= board) c = board - 1;  // +1 lands in the last cell
  if (c < 0) c = 0;
  return c;
}

std::uint32_t get_u32_be(std::istream& in, const std::filesystem::path& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw ParseError("truncated IDX header in " + path.string());
  }
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

double checkerboard_label(double x, double y, int board) {
  const int parity = (cell_index(x, board) + cell_index(y, board)) % 2;
  return parity == 0 ? 1.0 : -1.0;
}

Dataset gen_checkerboard(std::size_t n_train, int board, std::uint64_t seed) {
  if (board < 2) throw ConfigError("checkerboard needs board >= 2");
  if (n_train < 1) throw ConfigError("checkerboard needs n_train >= 1");
  Dataset ds;
  ds.kind = DatasetKind::Checkerboard;
  ds.inputs = Matrix(n_train, 2);
  ds.targets = Matrix(n_train, 1);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n_train; ++i) {
    const double x = 2.0 * uniform01(rng) - 1.0;
    const double y = 2.0 * uniform01(rng) - 1.0;
    ds.inputs(i, 0) = x;
    ds.inputs(i, 1) = y;
    ds.targets(i, 0) = checkerboard_label(x, y, board);
  }
  return ds;
}

Dataset gen_checkerboard_testgrid(int board) {
  if (board < 2) throw ConfigError("checkerboard needs board >= 2");
  constexpr std::size_t side = 500;
  Dataset ds;
  ds.kind = DatasetKind::CheckerboardGrid;
  ds.grid_rows = side;
  ds.grid_cols = side;
  ds.inputs = Matrix(side * side, 2);
  ds.targets = Matrix(side * side, 1);
  std::size_t n = 0;
  for (std::size_t iy = 0; iy < side; ++iy) {
    const double y = -1.0 + 2.0 * static_cast<double>(iy) / (side - 1);
    for (std::size_t ix = 0; ix < side; ++ix, ++n) {
      const double x = -1.0 + 2.0 * static_cast<double>(ix) / (side - 1);
      ds.inputs(n, 0) = x;
      ds.inputs(n, 1) = y;
      ds.targets(n, 0) = checkerboard_label(x, y, board);
    }
  }
  return ds;
}

Dataset gen_parabola(std::size_t n) {
  if (n < 2) throw ConfigError("parabola needs n >= 2");
  Dataset ds;
  ds.kind = DatasetKind::Parabola;
  ds.inputs = Matrix(n, 1);
  ds.targets = Matrix(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / (n - 1);
    ds.inputs(i, 0) = x;
    ds.targets(i, 0) = x * x;
  }
  return ds;
}

double sincos_target(double x, double y) { return std::sin(x * 10.0) * std::cos(y * 5.0); }

Dataset gen_sincos(std::size_t n_side) {
  if (n_side < 2) throw ConfigError("sincos grid needs n_side >= 2");
  Dataset ds;
  ds.kind = DatasetKind::SinCos;
  ds.grid_rows = n_side;
  ds.grid_cols = n_side;
  ds.inputs = Matrix(n_side * n_side, 2);
  ds.targets = Matrix(n_side * n_side, 1);
  std::size_t n = 0;
  for (std::size_t iy = 0; iy < n_side; ++iy) {
    const double y = -1.0 + 2.0 * static_cast<double>(iy) / (n_side - 1);
    for (std::size_t ix = 0; ix < n_side; ++ix, ++n) {
      const double x = -1.0 + 2.0 * static_cast<double>(ix) / (n_side - 1);
      ds.inputs(n, 0) = x;
      ds.inputs(n, 1) = y;
      ds.targets(n, 0) = sincos_target(x, y);
    }
  }
  return ds;
}

Dataset gen_memorization(const GrayImage& img) {
  if (img.width < 2 || img.height < 2) throw ConfigError("memorization image too small");
  Dataset ds;
  ds.kind = DatasetKind::Memorization;
  ds.grid_rows = img.height;
  ds.grid_cols = img.width;
  const std::size_t n = img.width * img.height;
  ds.inputs = Matrix(n, 2);
  ds.targets = Matrix(n, 1);
  std::size_t i = 0;
  for (std::size_t r = 0; r < img.height; ++r) {
    const double y = -1.0 + 2.0 * static_cast<double>(r) / (img.height - 1);
    for (std::size_t c = 0; c < img.width; ++c, ++i) {
      const double x = -1.0 + 2.0 * static_cast<double>(c) / (img.width - 1);
      ds.inputs(i, 0) = x;
      ds.inputs(i, 1) = y;
      ds.targets(i, 0) = static_cast<double>(img.pixels[i]) / 255.0 * 2.0 - 1.0;
    }
  }
  return ds;
}

Dataset load_mnist(const std::filesystem::path& images_path,
                   const std::filesystem::path& labels_path) {
  std::ifstream imgs(images_path, std::ios::binary);
  if (!imgs) throw ParseError("cannot open " + images_path.string());
  std::ifstream labs(labels_path, std::ios::binary);
  if (!labs) throw ParseError("cannot open " + labels_path.string());

  const std::uint32_t img_magic = get_u32_be(imgs, images_path);
  if (img_magic != 0x00000803u) {
    throw ParseError("bad IDX image magic in " + images_path.string() +
                     ": expected 0x00000803");
  }
  const std::uint32_t lab_magic = get_u32_be(labs, labels_path);
  if (lab_magic != 0x00000801u) {
    throw ParseError("bad IDX label magic in " + labels_path.string() +
                     ": expected 0x00000801");
  }
  const std::uint32_t n_images = get_u32_be(imgs, images_path);
  const std::uint32_t rows = get_u32_be(imgs, images_path);
  const std::uint32_t cols = get_u32_be(imgs, images_path);
  const std::uint32_t n_labels = get_u32_be(labs, labels_path);
  if (n_images != n_labels) {
    throw ParseError("IDX count mismatch: " + std::to_string(n_images) + " images vs " +
                     std::to_string(n_labels) + " labels");
  }
  if (rows == 0 || cols == 0) throw ParseError("zero IDX image dims in " + images_path.string());

  const std::size_t dim = static_cast<std::size_t>(rows) * cols;
  Dataset ds;
  ds.kind = DatasetKind::Mnist;
  ds.grid_rows = rows;
  ds.grid_cols = cols;
  ds.inputs = Matrix(n_images, dim);
  ds.targets = Matrix(n_images, 10);

  std::vector<unsigned char> buf(dim);
  for (std::uint32_t i = 0; i < n_images; ++i) {
    if (!imgs.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(dim))) {
      throw ParseError("truncated IDX image data in " + images_path.string());
    }
    double* dst = ds.inputs.data() + static_cast<std::size_t>(i) * dim;
    for (std::size_t p = 0; p < dim; ++p) dst[p] = static_cast<double>(buf[p]) / 255.0;

    char label;
    if (!labs.read(&label, 1)) {
      throw ParseError("truncated IDX label data in " + labels_path.string());
    }
    const unsigned char lv = static_cast<unsigned char>(label);
    if (lv > 9) throw ParseError("IDX label out of range: " + std::to_string(int(lv)));
    ds.targets(i, lv) = 1.0;
  }
  return ds;
}

Matrix image_to_matrix(const GrayImage& img) {
  Matrix m(img.height, img.width);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    m.data()[i] = static_cast<double>(img.pixels[i]);
  }
  return m;
}

Matrix center_crop_square(const Matrix& img) {
  const std::size_t side = std::min(img.rows(), img.cols());
  const std::size_t top = (img.rows() - side) / 2;
  const std::size_t left = (img.cols() - side) / 2;
  Matrix out(side, side);
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) out(r, c) = img(top + r, left + c);
  return out;
}

Matrix resize_bilinear(const Matrix& img, std::size_t out_rows, std::size_t out_cols) {
  if (img.rows() < 1 || img.cols() < 1) throw ShapeError("resize_bilinear: empty image");
  Matrix out(out_rows, out_cols);
  for (std::size_t r = 0; r < out_rows; ++r) {
    // Pixel centers map to pixel centers; out-of-range samples clamp to the
    // border.
    double sy = (static_cast<double>(r) + 0.5) * static_cast<double>(img.rows()) /
                    static_cast<double>(out_rows) -
                0.5;
    sy = std::clamp(sy, 0.0, static_cast<double>(img.rows() - 1));
    const std::size_t y0 = static_cast<std::size_t>(sy);
    const std::size_t y1 = std::min(y0 + 1, img.rows() - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t c = 0; c < out_cols; ++c) {
      double sx = (static_cast<double>(c) + 0.5) * static_cast<double>(img.cols()) /
                      static_cast<double>(out_cols) -
                  0.5;
      sx = std::clamp(sx, 0.0, static_cast<double>(img.cols() - 1));
      const std::size_t x0 = static_cast<std::size_t>(sx);
      const std::size_t x1 = std::min(x0 + 1, img.cols() - 1);
      const double fx = sx - static_cast<double>(x0);
      const double top = img(y0, x0) * (1.0 - fx) + img(y0, x1) * fx;
      const double bot = img(y1, x0) * (1.0 - fx) + img(y1, x1) * fx;
      out(r, c) = top * (1.0 - fy) + bot * fy;
    }
  }
  return out;
}

Dataset load_image_dir(const std::filesystem::path& dir, std::size_t size) {
  if (!std::filesystem::is_directory(dir)) {
    throw ParseError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::vector<double>> rows;
  for (const auto& file : files) {
    try {
      const GrayImage img = read_pgm(file);
      const Matrix resized = resize_bilinear(center_crop_square(image_to_matrix(img)), size, size);
      std::vector<double> flat(size * size);
      for (std::size_t i = 0; i < flat.size(); ++i) {
        flat[i] = resized.data()[i] / 127.5 - 1.0;
      }
      rows.push_back(std::move(flat));
    } catch (const ParseError& e) {
      std::cerr << "warning: skipping " << file.string() << ": " << e.what() << "\n";
    }
  }
  if (rows.empty()) {
    throw ParseError("no usable PGM images in " + dir.string());
  }

  Dataset ds;
  ds.kind = DatasetKind::ImageCorpus;
  ds.grid_rows = size;
  ds.grid_cols = size;
  ds.inputs = Matrix(rows.size(), size * size);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), ds.inputs.data() + r * size * size);
  }
  ds.targets = ds.inputs;
  return ds;
}

}  // namespace sudonet
