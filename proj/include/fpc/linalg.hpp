#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpc {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return d_.size(); }

  double operator()(int r, int c) const { return d_[static_cast<std::size_t>(r) * cols_ + c]; }
  double& operator()(int r, int c) { return d_[static_cast<std::size_t>(r) * cols_ + c]; }

  const double* data() const { return d_.data(); }
  double* data() { return d_.data(); }
  const double* row(int r) const { return d_.data() + static_cast<std::size_t>(r) * cols_; }
  double* row(int r) { return d_.data() + static_cast<std::size_t>(r) * cols_; }

  std::span<const double> flat() const { return d_; }
  std::span<double> flat() { return d_; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> d_;
};

// Parallel kernels. Each output element is accumulated by a single thread in
// a fixed index order, so results are bitwise independent of the worker count.
Matrix matmul(const Matrix& a, const Matrix& b);      // A(r,k) * B(k,c)
Matrix matmul_ta(const Matrix& a, const Matrix& b);   // A^T * B, A is (k,r)
Matrix matmul_tb(const Matrix& a, const Matrix& b);   // A * B^T, B is (c,k)

void add_row_vector(Matrix& m, std::span<const double> v);  // add v to every row
std::vector<double> col_sums(const Matrix& m);
std::vector<double> col_means(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double inf_norm(std::span<const double> v);

// Serial reference kernels, kept for cross-checking the parallel ones and for
// the benchmark tool.
namespace reference {
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_ta(const Matrix& a, const Matrix& b);
Matrix matmul_tb(const Matrix& a, const Matrix& b);
}  // namespace reference

}  // namespace fpc
