#ifndef MDFLOW_DENSE_HPP
#define MDFLOW_DENSE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "mdflow/core.hpp"

namespace mdflow {

/// Row-major dense matrix. Used for element matrices, coarse AMG levels and
/// test oracles; not meant for large systems.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  std::vector<double> mult(const std::vector<double>& x) const {
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

/// LU factorization with partial pivoting, stored in place.
class LuFactor {
 public:
  LuFactor() = default;

  explicit LuFactor(DenseMatrix a) : lu_(std::move(a)), piv_(lu_.rows()) {
    const int n = lu_.rows();
    if (n != lu_.cols()) throw contract_error("LuFactor: matrix must be square");
    for (int i = 0; i < n; ++i) piv_[i] = i;
    for (int k = 0; k < n; ++k) {
      int p = k;
      for (int i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(piv_[k], piv_[p]);
      }
      const double d = lu_(k, k);
      if (d == 0.0) throw contract_error("LuFactor: singular matrix");
      for (int i = k + 1; i < n; ++i) {
        const double m = lu_(i, k) / d;
        lu_(i, k) = m;
        for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
      }
    }
  }

  std::vector<double> solve(const std::vector<double>& b) const {
    const int n = lu_.rows();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[piv_[i]];
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

  int size() const { return lu_.rows(); }

 private:
  DenseMatrix lu_;
  std::vector<int> piv_;
};

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method.
/// Returns them sorted ascending. Tolerant workhorse for small matrices.
inline std::vector<double> symmetric_eigenvalues(DenseMatrix a) {
  const int n = a.rows();
  if (n != a.cols()) throw contract_error("symmetric_eigenvalues: matrix must be square");
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) < 1e-15 * (1.0 + a.max_abs())) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Generalized eigenvalues of A x = chi * D x with D diagonal positive,
/// via the symmetric similarity D^{-1/2} A D^{-1/2}.
inline std::vector<double> generalized_eigenvalues_diag(const DenseMatrix& a,
                                                        const std::vector<double>& d) {
  const int n = a.rows();
  DenseMatrix c(n, n);
  std::vector<double> ds(n);
  for (int i = 0; i < n; ++i) {
    if (d[i] <= 0.0) throw contract_error("generalized_eigenvalues_diag: D not positive");
    ds[i] = 1.0 / std::sqrt(d[i]);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = ds[i] * a(i, j) * ds[j];
  return symmetric_eigenvalues(c);
}

}  // namespace mdflow

#endif  // MDFLOW_DENSE_HPP
