#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "topicsg/config.hpp"
#include "topicsg/mat.hpp"

namespace tsg {

// Named trainable tensors with aligned gradient slots. Insertion order is
// fixed at construction time, which pins parameter-init RNG consumption and
// the checkpoint blob layout.
class ParamStore {
 public:
  Mat& add(const std::string& name, int rows, int cols);
  bool has(const std::string& name) const;
  Mat& tensor(const std::string& name);
  const Mat& tensor(const std::string& name) const;
  Mat& grad(const std::string& name);
  const std::vector<std::string>& names() const { return order_; }

  void zero_grads();
  // global-norm clipping over the filtered subset, then SGD update
  void sgd_step(double lr, double clip_norm,
                const std::function<bool(const std::string&)>& trainable);
  double grad_norm(const std::function<bool(const std::string&)>& trainable) const;

  // order-sensitive content hash of the filtered subset (frozen-blob checks)
  uint64_t content_hash(const std::function<bool(const std::string&)>& filter) const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, size_t> index_;
  std::vector<Mat> tensors_;
  std::vector<Mat> grads_;
};

// Builds every parameter the toolkit can train: feature projections, the
// shared embedding, both captioning backbones, and the importance head.
// Weights uniform(-0.1, 0.1) from config.seed, biases zero, norm gains one.
ParamStore make_params(const ModelConfig& config, int vocab_size);

inline bool is_head_param(const std::string& name) { return name.rfind("head.", 0) == 0; }

// Checkpoint archive: <path> is a JSON manifest; the float32 blob lives in a
// sibling file named in the manifest. Round-trips bit-exactly.
void save_checkpoint(const std::string& manifest_path, const ParamStore& params,
                     const Config& config, const std::string& stage);
struct Checkpoint {
  ParamStore params;
  Config config;
  std::string stage;
  int vocab_size = 0;
};
Checkpoint load_checkpoint(const std::string& manifest_path);

}  // namespace tsg
