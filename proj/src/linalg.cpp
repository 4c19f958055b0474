#include "fpc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fpc/types.hpp"

namespace fpc {

namespace {
void check(bool ok, const char* what) {
  if (!ok) throw DimError(what);
}
}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  check(a.cols() == b.rows(), "matmul: inner dimensions differ");
  const int r = a.rows(), k = a.cols(), c = b.cols();
  Matrix out(r, c);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < r; ++i) {
    double* oi = out.row(i);
    const double* ai = a.row(i);
    for (int p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double* bp = b.row(p);
      for (int j = 0; j < c; ++j) oi[j] += aip * bp[j];
    }
  }
  return out;
}

namespace {

Matrix transposed(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m.cols(); ++i) {
    double* ti = t.row(i);
    for (int j = 0; j < m.rows(); ++j) ti[j] = m(j, i);
  }
  return t;
}

}  // namespace

// Both transpose variants materialize one transposed operand and then run the
// same accumulate-into-the-output-row loop as matmul. Each output element
// still receives its terms in ascending inner-index order, so results stay
// bitwise stable for any thread count.

Matrix matmul_ta(const Matrix& a, const Matrix& b) {
  check(a.rows() == b.rows(), "matmul_ta: inner dimensions differ");
  const int k = a.rows(), r = a.cols(), c = b.cols();
  Matrix at = transposed(a);
  Matrix out(r, c);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < r; ++i) {
    double* oi = out.row(i);
    const double* ai = at.row(i);
    for (int p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double* bp = b.row(p);
      for (int j = 0; j < c; ++j) oi[j] += aip * bp[j];
    }
  }
  return out;
}

Matrix matmul_tb(const Matrix& a, const Matrix& b) {
  check(a.cols() == b.cols(), "matmul_tb: inner dimensions differ");
  const int r = a.rows(), k = a.cols(), c = b.rows();
  Matrix bt = transposed(b);
  Matrix out(r, c);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < r; ++i) {
    double* oi = out.row(i);
    const double* ai = a.row(i);
    for (int p = 0; p < k; ++p) {
      const double aip = ai[p];
      const double* bp = bt.row(p);
      for (int j = 0; j < c; ++j) oi[j] += aip * bp[j];
    }
  }
  return out;
}

void add_row_vector(Matrix& m, std::span<const double> v) {
  check(static_cast<std::size_t>(m.cols()) == v.size(), "add_row_vector: length mismatch");
  const double* vp = v.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m.rows(); ++i) {
    double* mi = m.row(i);
    for (int j = 0; j < m.cols(); ++j) mi[j] += vp[j];
  }
}

std::vector<double> col_sums(const Matrix& m) {
  // Fixed-size row chunks, serially combined in chunk order, so the result is
  // bitwise independent of the worker count.
  constexpr int kChunk = 64;
  const int n_chunks = (m.rows() + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(n_chunks, std::vector<double>(m.cols(), 0.0));
#pragma omp parallel for schedule(static)
  for (int c = 0; c < n_chunks; ++c) {
    double* acc = partial[c].data();
    const int hi = std::min(m.rows(), (c + 1) * kChunk);
    for (int i = c * kChunk; i < hi; ++i) {
      const double* mi = m.row(i);
      for (int j = 0; j < m.cols(); ++j) acc[j] += mi[j];
    }
  }
  std::vector<double> s(m.cols(), 0.0);
  for (int c = 0; c < n_chunks; ++c)
    for (int j = 0; j < m.cols(); ++j) s[j] += partial[c][j];
  return s;
}

std::vector<double> col_means(const Matrix& m) {
  check(m.rows() > 0, "col_means: empty matrix");
  std::vector<double> s = col_sums(m);
  for (double& v : s) v /= m.rows();
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check(a.size() == b.size(), "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

namespace reference {

Matrix matmul(const Matrix& a, const Matrix& b) {
  check(a.cols() == b.rows(), "matmul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (int p = 0; p < a.cols(); ++p) s += a(i, p) * b(p, j);
      out(i, j) = s;
    }
  return out;
}

Matrix matmul_ta(const Matrix& a, const Matrix& b) {
  check(a.rows() == b.rows(), "matmul_ta: inner dimensions differ");
  Matrix out(a.cols(), b.cols());
  for (int i = 0; i < a.cols(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (int p = 0; p < a.rows(); ++p) s += a(p, i) * b(p, j);
      out(i, j) = s;
    }
  return out;
}

Matrix matmul_tb(const Matrix& a, const Matrix& b) {
  check(a.cols() == b.cols(), "matmul_tb: inner dimensions differ");
  Matrix out(a.rows(), b.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (int p = 0; p < a.cols(); ++p) s += a(i, p) * b(j, p);
      out(i, j) = s;
    }
  return out;
}

}  // namespace reference

}  // namespace fpc
