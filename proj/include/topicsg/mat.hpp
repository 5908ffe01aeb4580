#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "topicsg/common.hpp"

namespace tsg {

// Dense row-major matrix of doubles. Column vectors are (n x 1).
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> d;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), d(static_cast<size_t>(r) * c, 0.0) {}
  Mat(int r, int c, std::initializer_list<double> vals) : rows(r), cols(c), d(vals) {
    if (static_cast<int>(d.size()) != r * c) throw UsageError("Mat: initializer size mismatch");
  }

  static Mat col(std::initializer_list<double> vals) {
    Mat m(static_cast<int>(vals.size()), 1);
    m.d.assign(vals);
    return m;
  }

  double& at(int r, int c) { return d[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return d[static_cast<size_t>(r) * cols + c]; }

  size_t size() const { return d.size(); }
  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

  void fill(double v) { std::fill(d.begin(), d.end(), v); }

  void fill_uniform(Rng& rng, double lo, double hi) {
    for (double& x : d) x = rng.uniform(lo, hi);
  }
  void fill_normal(Rng& rng, double stddev) {
    for (double& x : d) x = stddev * rng.normal();
  }
};

inline Mat matmul_plain(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw ConfigError("matmul: inner dimension mismatch");
  Mat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = &a.d[static_cast<size_t>(i) * a.cols];
    double* crow = &c.d[static_cast<size_t>(i) * c.cols];
    for (int k = 0; k < a.cols; ++k) {
      double av = arow[k];
      if (av == 0.0) continue;
      const double* brow = &b.d[static_cast<size_t>(k) * b.cols];
      for (int j = 0; j < b.cols; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

// a + b, allowing b to be a column vector broadcast over a's columns
inline Mat add_plain(const Mat& a, const Mat& b) {
  Mat c = a;
  if (a.same_shape(b)) {
    for (size_t i = 0; i < c.d.size(); ++i) c.d[i] += b.d[i];
  } else if (b.cols == 1 && b.rows == a.rows) {
    for (int i = 0; i < a.rows; ++i)
      for (int j = 0; j < a.cols; ++j) c.at(i, j) += b.d[i];
  } else {
    throw ConfigError("add: shape mismatch");
  }
  return c;
}

inline Mat mean_cols_plain(const Mat& a) {
  Mat m(a.rows, 1);
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += a.at(i, j);
    m.d[i] = s / a.cols;
  }
  return m;
}

// numerically stable column-wise softmax
inline Mat softmax_cols_plain(const Mat& a) {
  Mat y(a.rows, a.cols);
  for (int j = 0; j < a.cols; ++j) {
    double mx = a.at(0, j);
    for (int i = 1; i < a.rows; ++i) mx = std::max(mx, a.at(i, j));
    double z = 0.0;
    for (int i = 0; i < a.rows; ++i) z += std::exp(a.at(i, j) - mx);
    for (int i = 0; i < a.rows; ++i) y.at(i, j) = std::exp(a.at(i, j) - mx) / z;
  }
  return y;
}

inline Mat concat_rows_plain(const std::vector<const Mat*>& parts) {
  int rows = 0;
  int cols = parts.empty() ? 0 : parts[0]->cols;
  for (const Mat* p : parts) {
    if (p->cols != cols) throw ConfigError("concat_rows: column mismatch");
    rows += p->rows;
  }
  Mat out(rows, cols);
  int r0 = 0;
  for (const Mat* p : parts) {
    for (int i = 0; i < p->rows; ++i)
      for (int j = 0; j < cols; ++j) out.at(r0 + i, j) = p->at(i, j);
    r0 += p->rows;
  }
  return out;
}

inline Mat select_col_plain(const Mat& a, int j) {
  Mat v(a.rows, 1);
  for (int i = 0; i < a.rows; ++i) v.d[i] = a.at(i, j);
  return v;
}

}  // namespace tsg
