#pragma once

#include <map>
#include <string>

#include "topicsg/common.hpp"

namespace tsg {

enum class Backbone { kUpDown, kTransformer };
enum class FeatureMode { kU, kSO, kSOU, kSOUS };
enum class Pooling { kMax, kMean };
enum class Supervision { kDistill, kLabel };

std::string to_string(Backbone b);
std::string to_string(FeatureMode m);
std::string to_string(Pooling p);
std::string to_string(Supervision s);
Backbone backbone_from_string(const std::string& s);
FeatureMode feature_mode_from_string(const std::string& s);
Pooling pooling_from_string(const std::string& s);
Supervision supervision_from_string(const std::string& s);

// Model dimensions and shared knobs. Defaults are desk-scale; the geometry
// projection width (64) is fixed elsewhere as a modeling constant.
struct ModelConfig {
  int d_v = 64;    // raw visual dim
  int d_l = 32;    // projected dim
  int d_h = 64;    // recurrent hidden dim
  int d_a = 32;    // attention dim
  int d_e = 32;    // word embedding dim
  int d_u = 64;    // union raw dim
  int d_s = 32;    // importance query/key dim
  int d_sem = 16;  // category embedding dim
  int d_tr = 64;   // transformer model dim
  int n_heads = 4;
  int n_enc_layers = 2;
  int n_dec_layers = 2;
  int d_ff = 128;          // transformer feed-forward dim
  int cross_attn_layer = -1;  // decoder layer whose cross-attention feeds distillation; -1 = last
  double lambda = 0.7;     // balance parameter of the mixed CE loss
  uint64_t seed = 7;
  Backbone backbone = Backbone::kUpDown;
  int t_max = 20;   // greedy/beam decode cap
  int beam_k = 3;
  double feature_noise = 0.25;  // synthetic per-object noise scale

  void validate() const;
};

struct TrainConfig {
  double lambda = 0.7;
  double stage1_lr = 0.1;
  double stage2_lr = 0.5;
  int stage1_epochs = 30;
  int stage2_epochs = 15;
  int batch_size = 1;  // images per update; softmaxes are per-image regardless
  double grad_clip = 5.0;
  uint64_t seed = 7;
  Supervision supervision = Supervision::kDistill;
  FeatureMode feature_mode = FeatureMode::kSOUS;
  Pooling pooling = Pooling::kMax;
  bool mask_non_nouns = false;
  bool attn_free_decode = false;  // collect distillation attention from greedy decode instead of teacher forcing

  void validate() const;
};

struct GenConfig {
  int num_train = 500;
  int num_val = 50;
  int num_test = 100;
  int n_min = 7;
  int n_max = 10;
  int rel_min = 6;
  int rel_max = 20;
  int mention_min = 3;
  int mention_max = 5;
  double attr_prob = 0.3;
  uint64_t seed = 7;

  void validate() const;
};

// Flat key-value config file: one `key = value` per line, '#' comments.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
std::map<std::string, std::string> parse_kv_text(const std::string& text);

// Full config bundle resolved from defaults + file + overrides (later wins).
struct Config {
  ModelConfig model;
  TrainConfig train;
  GenConfig gen;

  static Config resolve(const std::map<std::string, std::string>& kv);
  // apply one key; throws ConfigError for unknown keys or bad values
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_kv() const;
};

}  // namespace tsg
