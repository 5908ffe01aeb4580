#pragma once

#include <functional>
#include <vector>

#include "topicsg/mat.hpp"

namespace tsg {

// Reverse-mode autodiff over Mat values. One Tape per loss evaluation;
// nodes are created in topological order, so backward() is a reverse sweep.
//
// Leaves come in two flavors: input() copies a Mat onto the tape, param()
// aliases an external Mat (typically a ParamStore tensor) so gradients can
// be read back after backward().
class Tape {
 public:
  using Var = int32_t;

  Var input(Mat v);
  Var param(const Mat* external);

  const Mat& val(Var v) const;
  const Mat& grad(Var v) const;
  double scalar(Var v) const;

  // --- ops ---
  Var matmul(Var a, Var b);
  Var add(Var a, Var b);  // same shape, or b = column vector broadcast
  Var sub(Var a, Var b);
  Var hadamard(Var a, Var b);
  Var scale(Var a, double c);
  Var tanh_(Var a);
  Var sigmoid_(Var a);
  Var relu_(Var a);
  Var log_(Var a);
  Var softmax_cols(Var a);
  Var concat_rows(const std::vector<Var>& parts);
  Var concat_cols(const std::vector<Var>& parts);
  Var slice_rows(Var a, int r0, int r1);  // half-open [r0, r1)
  Var select_col(Var a, int j);
  Var mean_cols(Var a);
  Var transpose(Var a);
  Var sum(Var a);            // 1x1
  Var dot(Var a, Var b);     // column vectors -> 1x1
  Var layer_norm_cols(Var a, Var gain, Var bias, double eps = 1e-5);
  // -log softmax(logits_col)[index]; the cross-entropy workhorse
  Var pick_neg_log_softmax(Var logits_col, int index);

  void backward(Var root);

  size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Mat owned;                 // value storage unless external
    const Mat* external = nullptr;
    Mat grad;
    std::function<void(Tape&, Var)> back;  // nullptr for leaves
    std::vector<Var> parents;
  };

  const Mat& v(Var i) const { return nodes_[i].external ? *nodes_[i].external : nodes_[i].owned; }
  Mat& g(Var i) { return nodes_[i].grad; }

  Var push(Mat value, std::vector<Var> parents, std::function<void(Tape&, Var)> back);

  std::vector<Node> nodes_;
};

}  // namespace tsg
