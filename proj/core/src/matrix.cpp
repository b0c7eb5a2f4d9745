#include "sudonet/matrix.hpp"

namespace sudonet {

namespace detail {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shapes " + a.shape_str() + " and " +
                     b.shape_str() + " do not match");
  }
}

}  // namespace detail

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& row : init) {
    if (row.size() != cols_) {
      throw ShapeError("Matrix initializer rows have unequal lengths");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: lhs " + a.shape_str() + " incompatible with rhs " +
                     b.shape_str());
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n);
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  // i-k-j order keeps both the b row and the c row contiguous, which the
  // compiler vectorizes well.
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = pa + i * k;
    double* crow = pc + i * n;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double aik = arow[kk];
      const double* brow = pb + kk * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  detail::require_same_shape(a, b, "hadamard");
  return zip(a, b, [](double x, double y) { return x * y; });
}

Matrix scale(const Matrix& m, double c) {
  return elementwise(m, [c](double x) { return x * c; });
}

Matrix add(const Matrix& a, const Matrix& b) {
  detail::require_same_shape(a, b, "add");
  return zip(a, b, [](double x, double y) { return x + y; });
}

Matrix sub(const Matrix& a, const Matrix& b) {
  detail::require_same_shape(a, b, "sub");
  return zip(a, b, [](double x, double y) { return x - y; });
}

Matrix add_row_broadcast(const Matrix& m, const Matrix& bias) {
  if (bias.rows() != 1 || bias.cols() != m.cols()) {
    throw ShapeError("add_row_broadcast: bias " + bias.shape_str() +
                     " does not broadcast over " + m.shape_str());
  }
  Matrix out(m.rows(), m.cols());
  const double* pb = bias.data();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* src = m.data() + r * m.cols();
    double* dst = out.data() + r * m.cols();
    for (std::size_t c = 0; c < m.cols(); ++c) dst[c] = src[c] + pb[c];
  }
  return out;
}

Matrix sum_rows(const Matrix& m) {
  Matrix out(1, m.cols());
  double* acc = out.data();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* src = m.data() + r * m.cols();
    for (std::size_t c = 0; c < m.cols(); ++c) acc[c] += src[c];
  }
  return out;
}

}  // namespace sudonet
