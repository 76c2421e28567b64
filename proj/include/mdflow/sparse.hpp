#ifndef MDFLOW_SPARSE_HPP
#define MDFLOW_SPARSE_HPP

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "mdflow/core.hpp"
#include "mdflow/dense.hpp"

namespace mdflow {

/// Compressed sparse row matrix. Column indices are sorted within each row
/// and duplicates are combined on construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), ptr_(rows + 1, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return col_.size(); }

  const std::vector<int>& row_ptr() const { return ptr_; }
  const std::vector<int>& col_idx() const { return col_; }
  const std::vector<double>& values() const { return val_; }
  std::vector<double>& values() { return val_; }

  double operator()(int i, int j) const {
    for (int k = ptr_[i]; k < ptr_[i + 1]; ++k)
      if (col_[k] == j) return val_[k];
    return 0.0;
  }

  std::vector<double> diagonal() const {
    std::vector<double> d(std::min(rows_, cols_), 0.0);
    for (int i = 0; i < int(d.size()); ++i) d[i] = (*this)(i, i);
    return d;
  }

  void mult(const double* x, double* y) const {
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
      y[i] = s;
    }
  }

  std::vector<double> mult(const std::vector<double>& x) const {
    if (int(x.size()) != cols_) throw contract_error("spmv: shape mismatch");
    std::vector<double> y(rows_);
    mult(x.data(), y.data());
    return y;
  }

  /// y = M^T x without forming the transpose.
  std::vector<double> mult_transpose(const std::vector<double>& x) const {
    if (int(x.size()) != rows_) throw contract_error("spmv^T: shape mismatch");
    std::vector<double> y(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) y[col_[k]] += val_[k] * xi;
    }
    return y;
  }

  SparseMatrix transposed() const {
    SparseMatrix t(cols_, rows_);
    std::vector<int> count(cols_, 0);
    for (int c : col_) ++count[c];
    t.ptr_.assign(cols_ + 1, 0);
    for (int j = 0; j < cols_; ++j) t.ptr_[j + 1] = t.ptr_[j] + count[j];
    t.col_.resize(nnz());
    t.val_.resize(nnz());
    std::vector<int> next(t.ptr_.begin(), t.ptr_.end() - 1);
    for (int i = 0; i < rows_; ++i)
      for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) {
        const int pos = next[col_[k]]++;
        t.col_[pos] = i;
        t.val_[pos] = val_[k];
      }
    return t;
  }

  /// Scales column j by s[j] in place.
  void scale_columns(const std::vector<double>& s) {
    for (std::size_t k = 0; k < col_.size(); ++k) val_[k] *= s[col_[k]];
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) d(i, col_[k]) = val_[k];
    return d;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : val_) m = std::max(m, std::abs(v));
    return m;
  }

  static SparseMatrix from_csr(int rows, int cols, std::vector<int> ptr, std::vector<int> col,
                               std::vector<double> val) {
    SparseMatrix m(rows, cols);
    m.ptr_ = std::move(ptr);
    m.col_ = std::move(col);
    m.val_ = std::move(val);
    return m;
  }

 private:
  friend class Triplets;
  int rows_ = 0, cols_ = 0;
  std::vector<int> ptr_, col_;
  std::vector<double> val_;
};

/// Coordinate-format accumulator; duplicate entries are summed.
class Triplets {
 public:
  Triplets(int rows, int cols) : rows_(rows), cols_(cols) {}

  void add(int i, int j, double v) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw contract_error("Triplets::add: index out of range");
    entries_.emplace_back(i, j, v);
  }

  SparseMatrix to_csr() const {
    std::vector<std::size_t> order(entries_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& ea = entries_[a];
      const auto& eb = entries_[b];
      if (std::get<0>(ea) != std::get<0>(eb)) return std::get<0>(ea) < std::get<0>(eb);
      return std::get<1>(ea) < std::get<1>(eb);
    });
    SparseMatrix m(rows_, cols_);
    m.ptr_.assign(rows_ + 1, 0);
    int last_i = -1, last_j = -1;
    for (std::size_t k : order) {
      const auto& [i, j, v] = entries_[k];
      if (i == last_i && j == last_j) {
        m.val_.back() += v;
      } else {
        m.col_.push_back(j);
        m.val_.push_back(v);
        ++m.ptr_[i + 1];
        last_i = i;
        last_j = j;
      }
    }
    for (int i = 0; i < rows_; ++i) m.ptr_[i + 1] += m.ptr_[i];
    return m;
  }

 private:
  int rows_, cols_;
  std::vector<std::tuple<int, int, double>> entries_;
};

inline std::vector<double> spmv(const SparseMatrix& m, const std::vector<double>& x) {
  return m.mult(x);
}

/// C = A * B in CSR (classic row-merge algorithm).
inline SparseMatrix matmul(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw contract_error("matmul: shape mismatch");
  const int rows = a.rows(), cols = b.cols();
  std::vector<int> ptr(rows + 1, 0);
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> accum(cols, 0.0);
  std::vector<int> marker(cols, -1);
  std::vector<int> row_cols;
  for (int i = 0; i < rows; ++i) {
    row_cols.clear();
    for (int ka = a.row_ptr()[i]; ka < a.row_ptr()[i + 1]; ++ka) {
      const int k = a.col_idx()[ka];
      const double av = a.values()[ka];
      for (int kb = b.row_ptr()[k]; kb < b.row_ptr()[k + 1]; ++kb) {
        const int j = b.col_idx()[kb];
        if (marker[j] != i) {
          marker[j] = i;
          accum[j] = 0.0;
          row_cols.push_back(j);
        }
        accum[j] += av * b.values()[kb];
      }
    }
    std::sort(row_cols.begin(), row_cols.end());
    for (int j : row_cols) {
      col.push_back(j);
      val.push_back(accum[j]);
    }
    ptr[i + 1] = int(col.size());
  }
  return SparseMatrix::from_csr(rows, cols, std::move(ptr), std::move(col), std::move(val));
}

// ---------------------------------------------------------------------------
// Matrix Market I/O
// ---------------------------------------------------------------------------

inline void write_matrix_market(const SparseMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
  out << std::setprecision(17);
  for (int i = 0; i < m.rows(); ++i)
    for (int k = m.row_ptr()[i]; k < m.row_ptr()[i + 1]; ++k)
      out << i + 1 << " " << m.col_idx()[k] + 1 << " " << m.values()[k] << "\n";
  if (!out) throw io_error("write failed: " + path);
}

inline void write_matrix_market(const std::vector<double>& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  out << std::setprecision(17);
  for (double x : v) out << x << "\n";
  if (!out) throw io_error("write failed: " + path);
}

inline SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw parse_error(path + ": missing MatrixMarket header");
  const bool coordinate = line.find("coordinate") != std::string::npos;
  while (std::getline(in, line) && (line.empty() || line[0] == '%')) {}
  std::istringstream hdr(line);
  if (coordinate) {
    int rows, cols;
    std::size_t nnz;
    if (!(hdr >> rows >> cols >> nnz)) throw parse_error(path + ": bad size line");
    Triplets t(rows, cols);
    for (std::size_t k = 0; k < nnz; ++k) {
      int i, j;
      double v;
      if (!(in >> i >> j >> v)) throw parse_error(path + ": truncated entries");
      t.add(i - 1, j - 1, v);
    }
    return t.to_csr();
  }
  int rows, cols;
  if (!(hdr >> rows >> cols)) throw parse_error(path + ": bad size line");
  Triplets t(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      double v;
      if (!(in >> v)) throw parse_error(path + ": truncated entries");
      if (v != 0.0) t.add(i, j, v);
    }
  return t.to_csr();
}

inline std::vector<double> read_matrix_market_vector(const std::string& path) {
  SparseMatrix m = read_matrix_market(path);
  if (m.cols() != 1) throw parse_error(path + ": expected a single-column vector");
  std::vector<double> v(m.rows(), 0.0);
  for (int i = 0; i < m.rows(); ++i) v[i] = m(i, 0);
  return v;
}

}  // namespace mdflow

#endif  // MDFLOW_SPARSE_HPP
