#ifndef SUDONET_DATASET_HPP
#define SUDONET_DATASET_HPP

#include <cstdint>
#include <filesystem>

#include "sudonet/matrix.hpp"
#include "sudonet/netpbm.hpp"

namespace sudonet {

enum class DatasetKind {
  Checkerboard,
  CheckerboardGrid,
  Parabola,
  SinCos,
  Memorization,
  Mnist,
  ImageCorpus,
};

struct Dataset {
  DatasetKind kind = DatasetKind::Parabola;
  Matrix inputs;   // N x D
  Matrix targets;  // N x K
  // Grid / image shape when the rows come from one (rows of the grid first).
  std::size_t grid_rows = 0;
  std::size_t grid_cols = 0;
};

/// +1 when the cell parity of (x, y) on a board x board grid over [-1,1]^2 is
/// even, else -1. Coordinates exactly at +1 are clamped into the last cell.
double checkerboard_label(double x, double y, int board);

/// n_train points uniform on [-1,1]^2 with checkerboard labels.
Dataset gen_checkerboard(std::size_t n_train, int board, std::uint64_t seed);

/// 500x500 uniformly spaced evaluation grid over [-1,1]^2 (250,000 points).
Dataset gen_checkerboard_testgrid(int board);

/// x on a uniform n-point grid over [-1,1]; target x^2.
Dataset gen_parabola(std::size_t n);

double sincos_target(double x, double y);

/// n_side x n_side grid over [-1,1]^2; target sin(10x)*cos(5y).
Dataset gen_sincos(std::size_t n_side);

/// One sample per pixel: inputs are (x, y) scaled to [-1,1]^2 and targets
/// the intensity scaled to [-1,1].
Dataset gen_memorization(const GrayImage& img);

/// IDX-format MNIST pair. Inputs N x (rows*cols) scaled to [0,1]; targets
/// N x 10 one-hot.
Dataset load_mnist(const std::filesystem::path& images_path,
                   const std::filesystem::path& labels_path);

/// Every readable P5 file in `dir`, center-cropped square, bilinearly
/// resized to size x size, flattened to [-1,1]; targets == inputs.
/// Unreadable files are skipped with a warning on stderr; an empty result is
/// an error.
Dataset load_image_dir(const std::filesystem::path& dir, std::size_t size = 32);

// Image-as-matrix helpers behind load_image_dir, exposed for direct use.
Matrix image_to_matrix(const GrayImage& img);
Matrix center_crop_square(const Matrix& img);
Matrix resize_bilinear(const Matrix& img, std::size_t out_rows, std::size_t out_cols);

}  // namespace sudonet

#endif  // SUDONET_DATASET_HPP
