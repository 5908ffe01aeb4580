#include "topicsg/tape.hpp"

#include <cmath>

namespace tsg {

Tape::Var Tape::push(Mat value, std::vector<Var> parents, std::function<void(Tape&, Var)> back) {
  Node n;
  n.owned = std::move(value);
  n.parents = std::move(parents);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<Var>(nodes_.size() - 1);
}

Tape::Var Tape::input(Mat v) { return push(std::move(v), {}, nullptr); }

Tape::Var Tape::param(const Mat* external) {
  Node n;
  n.external = external;
  nodes_.push_back(std::move(n));
  return static_cast<Var>(nodes_.size() - 1);
}

const Mat& Tape::val(Var i) const { return v(i); }
const Mat& Tape::grad(Var i) const { return nodes_[i].grad; }
double Tape::scalar(Var i) const { return v(i).d[0]; }

void Tape::backward(Var root) {
  if (v(root).rows != 1 || v(root).cols != 1)
    throw UsageError("backward: root must be scalar");
  for (auto& n : nodes_) {
    const Mat& value = n.external ? *n.external : n.owned;
    n.grad = Mat(value.rows, value.cols);
  }
  nodes_[root].grad.d[0] = 1.0;
  for (Var i = root; i >= 0; --i) {
    if (nodes_[i].back) nodes_[i].back(*this, i);
  }
}

Tape::Var Tape::matmul(Var a, Var b) {
  Mat c = matmul_plain(v(a), v(b));
  return push(std::move(c), {a, b}, [a, b](Tape& t, Var self) {
    const Mat& dc = t.g(self);
    const Mat& av = t.v(a);
    const Mat& bv = t.v(b);
    Mat& da = t.g(a);
    Mat& db = t.g(b);
    // da += dc * b^T
    for (int i = 0; i < av.rows; ++i)
      for (int k = 0; k < av.cols; ++k) {
        double s = 0.0;
        for (int j = 0; j < bv.cols; ++j) s += dc.at(i, j) * bv.at(k, j);
        da.at(i, k) += s;
      }
    // db += a^T * dc
    for (int k = 0; k < bv.rows; ++k)
      for (int j = 0; j < bv.cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < av.rows; ++i) s += av.at(i, k) * dc.at(i, j);
        db.at(k, j) += s;
      }
  });
}

Tape::Var Tape::add(Var a, Var b) {
  Mat c = add_plain(v(a), v(b));
  bool broadcast = !v(a).same_shape(v(b));
  return push(std::move(c), {a, b}, [a, b, broadcast](Tape& t, Var self) {
    const Mat& dc = t.g(self);
    Mat& da = t.g(a);
    Mat& db = t.g(b);
    for (size_t i = 0; i < dc.d.size(); ++i) da.d[i] += dc.d[i];
    if (!broadcast) {
      for (size_t i = 0; i < dc.d.size(); ++i) db.d[i] += dc.d[i];
    } else {
      for (int i = 0; i < dc.rows; ++i)
        for (int j = 0; j < dc.cols; ++j) db.d[i] += dc.at(i, j);
    }
  });
}

Tape::Var Tape::sub(Var a, Var b) {
  const Mat& av = v(a);
  const Mat& bv = v(b);
  if (!av.same_shape(bv)) throw ConfigError("sub: shape mismatch");
  Mat c = av;
  for (size_t i = 0; i < c.d.size(); ++i) c.d[i] -= bv.d[i];
  return push(std::move(c), {a, b}, [a, b](Tape& t, Var self) {
    const Mat& dc = t.g(self);
    Mat& da = t.g(a);
    Mat& db = t.g(b);
    for (size_t i = 0; i < dc.d.size(); ++i) {
      da.d[i] += dc.d[i];
      db.d[i] -= dc.d[i];
    }
  });
}

Tape::Var Tape::hadamard(Var a, Var b) {
  const Mat& av = v(a);
  const Mat& bv = v(b);
  if (!av.same_shape(bv)) throw ConfigError("hadamard: shape mismatch");
  Mat c = av;
  for (size_t i = 0; i < c.d.size(); ++i) c.d[i] *= bv.d[i];
  return push(std::move(c), {a, b}, [a, b](Tape& t, Var self) {
    const Mat& dc = t.g(self);
    const Mat& av2 = t.v(a);
    const Mat& bv2 = t.v(b);
    Mat& da = t.g(a);
    Mat& db = t.g(b);
    for (size_t i = 0; i < dc.d.size(); ++i) {
      da.d[i] += dc.d[i] * bv2.d[i];
      db.d[i] += dc.d[i] * av2.d[i];
    }
  });
}

Tape::Var Tape::scale(Var a, double c) {
  Mat y = v(a);
  for (double& x : y.d) x *= c;
  return push(std::move(y), {a}, [a, c](Tape& t, Var self) {
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (size_t i = 0; i < dy.d.size(); ++i) da.d[i] += c * dy.d[i];
  });
}

Tape::Var Tape::tanh_(Var a) {
  Mat y = v(a);
  for (double& x : y.d) x = std::tanh(x);
  return push(std::move(y), {a}, [a](Tape& t, Var self) {
    const Mat& yv = t.v(self);
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (size_t i = 0; i < dy.d.size(); ++i) da.d[i] += dy.d[i] * (1.0 - yv.d[i] * yv.d[i]);
  });
}

Tape::Var Tape::sigmoid_(Var a) {
  Mat y = v(a);
  for (double& x : y.d) x = 1.0 / (1.0 + std::exp(-x));
  return push(std::move(y), {a}, [a](Tape& t, Var self) {
    const Mat& yv = t.v(self);
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (size_t i = 0; i < dy.d.size(); ++i) da.d[i] += dy.d[i] * yv.d[i] * (1.0 - yv.d[i]);
  });
}

Tape::Var Tape::relu_(Var a) {
  Mat y = v(a);
  for (double& x : y.d) x = x > 0.0 ? x : 0.0;
  return push(std::move(y), {a}, [a](Tape& t, Var self) {
    const Mat& av = t.v(a);
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (size_t i = 0; i < dy.d.size(); ++i)
      if (av.d[i] > 0.0) da.d[i] += dy.d[i];
  });
}

Tape::Var Tape::log_(Var a) {
  Mat y = v(a);
  for (double& x : y.d) x = std::log(x);
  return push(std::move(y), {a}, [a](Tape& t, Var self) {
    const Mat& av = t.v(a);
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (size_t i = 0; i < dy.d.size(); ++i) da.d[i] += dy.d[i] / av.d[i];
  });
}

Tape::Var Tape::softmax_cols(Var a) {
  Mat y = softmax_cols_plain(v(a));
  return push(std::move(y), {a}, [a](Tape& t, Var self) {
    const Mat& yv = t.v(self);
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (int j = 0; j < yv.cols; ++j) {
      double inner = 0.0;
      for (int i = 0; i < yv.rows; ++i) inner += yv.at(i, j) * dy.at(i, j);
      for (int i = 0; i < yv.rows; ++i)
        da.at(i, j) += yv.at(i, j) * (dy.at(i, j) - inner);
    }
  });
}

Tape::Var Tape::concat_rows(const std::vector<Var>& parts) {
  std::vector<const Mat*> ptrs;
  for (Var p : parts) ptrs.push_back(&v(p));
  Mat out = concat_rows_plain(ptrs);
  return push(std::move(out), parts, [parts](Tape& t, Var self) {
    const Mat& dy = t.g(self);
    int r0 = 0;
    for (Var p : parts) {
      Mat& dp = t.g(p);
      for (int i = 0; i < dp.rows; ++i)
        for (int j = 0; j < dp.cols; ++j) dp.at(i, j) += dy.at(r0 + i, j);
      r0 += dp.rows;
    }
  });
}

Tape::Var Tape::concat_cols(const std::vector<Var>& parts) {
  int rows = v(parts[0]).rows;
  int cols = 0;
  for (Var p : parts) {
    if (v(p).rows != rows) throw ConfigError("concat_cols: row mismatch");
    cols += v(p).cols;
  }
  Mat out(rows, cols);
  int c0 = 0;
  for (Var p : parts) {
    const Mat& m = v(p);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < m.cols; ++j) out.at(i, c0 + j) = m.at(i, j);
    c0 += m.cols;
  }
  return push(std::move(out), parts, [parts](Tape& t, Var self) {
    const Mat& dy = t.g(self);
    int c0 = 0;
    for (Var p : parts) {
      Mat& dp = t.g(p);
      for (int i = 0; i < dp.rows; ++i)
        for (int j = 0; j < dp.cols; ++j) dp.at(i, j) += dy.at(i, c0 + j);
      c0 += dp.cols;
    }
  });
}

Tape::Var Tape::slice_rows(Var a, int r0, int r1) {
  const Mat& av = v(a);
  Mat out(r1 - r0, av.cols);
  for (int i = r0; i < r1; ++i)
    for (int j = 0; j < av.cols; ++j) out.at(i - r0, j) = av.at(i, j);
  return push(std::move(out), {a}, [a, r0](Tape& t, Var self) {
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (int i = 0; i < dy.rows; ++i)
      for (int j = 0; j < dy.cols; ++j) da.at(r0 + i, j) += dy.at(i, j);
  });
}

Tape::Var Tape::select_col(Var a, int j) {
  Mat out = select_col_plain(v(a), j);
  return push(std::move(out), {a}, [a, j](Tape& t, Var self) {
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (int i = 0; i < dy.rows; ++i) da.at(i, j) += dy.d[i];
  });
}

Tape::Var Tape::mean_cols(Var a) {
  Mat out = mean_cols_plain(v(a));
  int n = v(a).cols;
  return push(std::move(out), {a}, [a, n](Tape& t, Var self) {
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (int i = 0; i < da.rows; ++i)
      for (int j = 0; j < da.cols; ++j) da.at(i, j) += dy.d[i] / n;
  });
}

Tape::Var Tape::transpose(Var a) {
  const Mat& av = v(a);
  Mat out(av.cols, av.rows);
  for (int i = 0; i < av.rows; ++i)
    for (int j = 0; j < av.cols; ++j) out.at(j, i) = av.at(i, j);
  return push(std::move(out), {a}, [a](Tape& t, Var self) {
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    for (int i = 0; i < da.rows; ++i)
      for (int j = 0; j < da.cols; ++j) da.at(i, j) += dy.at(j, i);
  });
}

Tape::Var Tape::sum(Var a) {
  double s = 0.0;
  for (double x : v(a).d) s += x;
  Mat out(1, 1);
  out.d[0] = s;
  return push(std::move(out), {a}, [a](Tape& t, Var self) {
    double dy = t.g(self).d[0];
    Mat& da = t.g(a);
    for (double& x : da.d) x += dy;
  });
}

Tape::Var Tape::dot(Var a, Var b) {
  const Mat& av = v(a);
  const Mat& bv = v(b);
  if (av.cols != 1 || bv.cols != 1 || av.rows != bv.rows)
    throw ConfigError("dot: expects equal-length column vectors");
  double s = 0.0;
  for (int i = 0; i < av.rows; ++i) s += av.d[i] * bv.d[i];
  Mat out(1, 1);
  out.d[0] = s;
  return push(std::move(out), {a, b}, [a, b](Tape& t, Var self) {
    double dy = t.g(self).d[0];
    const Mat& av2 = t.v(a);
    const Mat& bv2 = t.v(b);
    Mat& da = t.g(a);
    Mat& db = t.g(b);
    for (int i = 0; i < av2.rows; ++i) {
      da.d[i] += dy * bv2.d[i];
      db.d[i] += dy * av2.d[i];
    }
  });
}

Tape::Var Tape::layer_norm_cols(Var a, Var gain, Var bias, double eps) {
  const Mat& av = v(a);
  Mat y(av.rows, av.cols);
  for (int j = 0; j < av.cols; ++j) {
    double mu = 0.0;
    for (int i = 0; i < av.rows; ++i) mu += av.at(i, j);
    mu /= av.rows;
    double var = 0.0;
    for (int i = 0; i < av.rows; ++i) {
      double dxi = av.at(i, j) - mu;
      var += dxi * dxi;
    }
    var /= av.rows;
    double inv = 1.0 / std::sqrt(var + eps);
    for (int i = 0; i < av.rows; ++i)
      y.at(i, j) = (av.at(i, j) - mu) * inv * v(gain).d[i] + v(bias).d[i];
  }
  return push(std::move(y), {a, gain, bias}, [a, gain, bias, eps](Tape& t, Var self) {
    const Mat& av2 = t.v(a);
    const Mat& gv = t.v(gain);
    const Mat& dy = t.g(self);
    Mat& da = t.g(a);
    Mat& dg = t.g(gain);
    Mat& db = t.g(bias);
    int n = av2.rows;
    for (int j = 0; j < av2.cols; ++j) {
      double mu = 0.0;
      for (int i = 0; i < n; ++i) mu += av2.at(i, j);
      mu /= n;
      double var = 0.0;
      for (int i = 0; i < n; ++i) {
        double dxi = av2.at(i, j) - mu;
        var += dxi * dxi;
      }
      var /= n;
      double inv = 1.0 / std::sqrt(var + eps);
      double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
      std::vector<double> xhat(n), dxhat(n);
      for (int i = 0; i < n; ++i) {
        xhat[i] = (av2.at(i, j) - mu) * inv;
        dxhat[i] = dy.at(i, j) * gv.d[i];
        sum_dxhat += dxhat[i];
        sum_dxhat_xhat += dxhat[i] * xhat[i];
        dg.d[i] += dy.at(i, j) * xhat[i];
        db.d[i] += dy.at(i, j);
      }
      for (int i = 0; i < n; ++i)
        da.at(i, j) += inv * (dxhat[i] - sum_dxhat / n - xhat[i] * sum_dxhat_xhat / n);
    }
  });
}

Tape::Var Tape::pick_neg_log_softmax(Var logits_col, int index) {
  const Mat& lv = v(logits_col);
  if (lv.cols != 1) throw UsageError("pick_neg_log_softmax: expects column vector");
  if (index < 0 || index >= lv.rows) throw UsageError("pick_neg_log_softmax: index out of range");
  double mx = lv.d[0];
  for (int i = 1; i < lv.rows; ++i) mx = std::max(mx, lv.d[i]);
  double z = 0.0;
  for (int i = 0; i < lv.rows; ++i) z += std::exp(lv.d[i] - mx);
  Mat out(1, 1);
  out.d[0] = -(lv.d[index] - mx - std::log(z));
  return push(std::move(out), {logits_col}, [logits_col, index](Tape& t, Var self) {
    double dy = t.g(self).d[0];
    const Mat& lv2 = t.v(logits_col);
    Mat& dl = t.g(logits_col);
    double mx = lv2.d[0];
    for (int i = 1; i < lv2.rows; ++i) mx = std::max(mx, lv2.d[i]);
    double z = 0.0;
    for (int i = 0; i < lv2.rows; ++i) z += std::exp(lv2.d[i] - mx);
    for (int i = 0; i < lv2.rows; ++i) {
      double p = std::exp(lv2.d[i] - mx) / z;
      dl.d[i] += dy * (p - (i == index ? 1.0 : 0.0));
    }
  });
}

}  // namespace tsg
