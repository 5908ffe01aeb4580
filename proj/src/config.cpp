#include "topicsg/config.hpp"

#include <fstream>
#include <sstream>

namespace tsg {

std::string to_string(Backbone b) { return b == Backbone::kUpDown ? "ud" : "transformer"; }
std::string to_string(FeatureMode m) {
  switch (m) {
    case FeatureMode::kU: return "U";
    case FeatureMode::kSO: return "SO";
    case FeatureMode::kSOU: return "SOU";
    default: return "SOUS";
  }
}
std::string to_string(Pooling p) { return p == Pooling::kMax ? "max" : "mean"; }
std::string to_string(Supervision s) { return s == Supervision::kDistill ? "distill" : "label"; }

Backbone backbone_from_string(const std::string& s) {
  if (s == "ud") return Backbone::kUpDown;
  if (s == "transformer") return Backbone::kTransformer;
  throw ConfigError("unknown backbone '" + s + "' (expected ud|transformer)");
}
FeatureMode feature_mode_from_string(const std::string& s) {
  if (s == "U") return FeatureMode::kU;
  if (s == "SO") return FeatureMode::kSO;
  if (s == "SOU") return FeatureMode::kSOU;
  if (s == "SOUS") return FeatureMode::kSOUS;
  throw ConfigError("unknown feature mode '" + s + "' (expected U|SO|SOU|SOUS)");
}
Pooling pooling_from_string(const std::string& s) {
  if (s == "max") return Pooling::kMax;
  if (s == "mean") return Pooling::kMean;
  throw ConfigError("unknown pooling '" + s + "' (expected max|mean)");
}
Supervision supervision_from_string(const std::string& s) {
  if (s == "distill") return Supervision::kDistill;
  if (s == "label") return Supervision::kLabel;
  throw ConfigError("unknown supervision mode '" + s + "' (expected distill|label)");
}

void ModelConfig::validate() const {
  auto pos = [](int v, const char* name) {
    if (v <= 0) throw ConfigError(std::string("model config: ") + name + " must be positive");
  };
  pos(d_v, "d_v"); pos(d_l, "d_l"); pos(d_h, "d_h"); pos(d_a, "d_a");
  pos(d_e, "d_e"); pos(d_u, "d_u"); pos(d_s, "d_s"); pos(d_sem, "d_sem");
  pos(d_tr, "d_tr"); pos(n_heads, "heads"); pos(n_enc_layers, "enc_layers");
  pos(n_dec_layers, "dec_layers"); pos(d_ff, "d_ff"); pos(t_max, "t_max");
  if (lambda < 0.0) throw ConfigError("model config: lambda must be >= 0");
  if (d_tr % n_heads != 0) throw ConfigError("model config: heads must divide d_tr");
  if (cross_attn_layer < -1 || cross_attn_layer >= n_dec_layers)
    throw ConfigError("model config: cross_attn_layer out of range");
  if (beam_k < 1) throw ConfigError("model config: beam_k must be >= 1");
}

void TrainConfig::validate() const {
  if (lambda < 0.0) throw ConfigError("train config: lambda must be >= 0");
  if (stage1_epochs < 1 || stage2_epochs < 1)
    throw ConfigError("train config: epochs must be >= 1");
  if (stage1_lr <= 0.0 || stage2_lr <= 0.0)
    throw ConfigError("train config: learning rates must be positive");
}

void GenConfig::validate() const {
  if (n_min < 2) throw ConfigError("gen config: n_min must be >= 2");
  if (n_max < n_min || rel_max < rel_min || mention_max < mention_min)
    throw ConfigError("gen config: empty range");
  if (mention_max > n_max) throw ConfigError("gen config: mention count must be <= n_max");
  if (mention_min < 0 || attr_prob < 0.0 || attr_prob > 1.0)
    throw ConfigError("gen config: bad value");
  if (num_train < 0 || num_val < 0 || num_test < 0)
    throw ConfigError("gen config: negative split size");
}

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = val;
  }
  return kv;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_kv_text(buf.str());
}

namespace {
int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return out;
  } catch (...) {
    throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
  }
}
double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return out;
  } catch (...) {
    throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
  }
}
uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    uint64_t out = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return out;
  } catch (...) {
    throw ConfigError("config key '" + key + "': expected unsigned integer, got '" + v + "'");
  }
}
bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected true|false, got '" + v + "'");
}
}  // namespace

void Config::set(const std::string& k, const std::string& v) {
  if (k == "d_v") model.d_v = to_int(k, v);
  else if (k == "d_l") model.d_l = to_int(k, v);
  else if (k == "d_h") model.d_h = to_int(k, v);
  else if (k == "d_a") model.d_a = to_int(k, v);
  else if (k == "d_e") model.d_e = to_int(k, v);
  else if (k == "d_u") model.d_u = to_int(k, v);
  else if (k == "d_s") model.d_s = to_int(k, v);
  else if (k == "d_sem") model.d_sem = to_int(k, v);
  else if (k == "d_tr") model.d_tr = to_int(k, v);
  else if (k == "d_ff") model.d_ff = to_int(k, v);
  else if (k == "heads") model.n_heads = to_int(k, v);
  else if (k == "enc_layers") model.n_enc_layers = to_int(k, v);
  else if (k == "dec_layers") model.n_dec_layers = to_int(k, v);
  else if (k == "cross_attn_layer") model.cross_attn_layer = to_int(k, v);
  else if (k == "t_max") model.t_max = to_int(k, v);
  else if (k == "beam_k") model.beam_k = to_int(k, v);
  else if (k == "feature_noise") model.feature_noise = to_double(k, v);
  else if (k == "backbone") model.backbone = backbone_from_string(v);
  else if (k == "lambda") { model.lambda = to_double(k, v); train.lambda = model.lambda; }
  else if (k == "seed") { model.seed = to_u64(k, v); train.seed = model.seed; gen.seed = model.seed; }
  else if (k == "stage1_lr") train.stage1_lr = to_double(k, v);
  else if (k == "stage2_lr") train.stage2_lr = to_double(k, v);
  else if (k == "stage1_epochs") train.stage1_epochs = to_int(k, v);
  else if (k == "stage2_epochs") train.stage2_epochs = to_int(k, v);
  else if (k == "batch_size") train.batch_size = to_int(k, v);
  else if (k == "grad_clip") train.grad_clip = to_double(k, v);
  else if (k == "supervision_mode") train.supervision = supervision_from_string(v);
  else if (k == "feature_mode") train.feature_mode = feature_mode_from_string(v);
  else if (k == "pooling") train.pooling = pooling_from_string(v);
  else if (k == "mask_non_nouns") train.mask_non_nouns = to_bool(k, v);
  else if (k == "attn_free_decode") train.attn_free_decode = to_bool(k, v);
  else if (k == "gen_train") gen.num_train = to_int(k, v);
  else if (k == "gen_val") gen.num_val = to_int(k, v);
  else if (k == "gen_test") gen.num_test = to_int(k, v);
  else if (k == "gen_n_min") gen.n_min = to_int(k, v);
  else if (k == "gen_n_max") gen.n_max = to_int(k, v);
  else if (k == "gen_rel_min") gen.rel_min = to_int(k, v);
  else if (k == "gen_rel_max") gen.rel_max = to_int(k, v);
  else if (k == "gen_mention_min") gen.mention_min = to_int(k, v);
  else if (k == "gen_mention_max") gen.mention_max = to_int(k, v);
  else if (k == "gen_attr_prob") gen.attr_prob = to_double(k, v);
  else throw ConfigError("unknown config key '" + k + "'");
}

Config Config::resolve(const std::map<std::string, std::string>& kv) {
  Config c;
  for (const auto& [k, v] : kv) c.set(k, v);
  c.model.validate();
  c.train.validate();
  c.gen.validate();
  return c;
}

std::map<std::string, std::string> Config::to_kv() const {
  std::map<std::string, std::string> kv;
  auto num = [](double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
  };
  kv["d_v"] = std::to_string(model.d_v);
  kv["d_l"] = std::to_string(model.d_l);
  kv["d_h"] = std::to_string(model.d_h);
  kv["d_a"] = std::to_string(model.d_a);
  kv["d_e"] = std::to_string(model.d_e);
  kv["d_u"] = std::to_string(model.d_u);
  kv["d_s"] = std::to_string(model.d_s);
  kv["d_sem"] = std::to_string(model.d_sem);
  kv["d_tr"] = std::to_string(model.d_tr);
  kv["d_ff"] = std::to_string(model.d_ff);
  kv["heads"] = std::to_string(model.n_heads);
  kv["enc_layers"] = std::to_string(model.n_enc_layers);
  kv["dec_layers"] = std::to_string(model.n_dec_layers);
  kv["cross_attn_layer"] = std::to_string(model.cross_attn_layer);
  kv["t_max"] = std::to_string(model.t_max);
  kv["beam_k"] = std::to_string(model.beam_k);
  kv["feature_noise"] = num(model.feature_noise);
  kv["backbone"] = to_string(model.backbone);
  kv["lambda"] = num(model.lambda);
  kv["seed"] = std::to_string(model.seed);
  kv["stage1_lr"] = num(train.stage1_lr);
  kv["stage2_lr"] = num(train.stage2_lr);
  kv["stage1_epochs"] = std::to_string(train.stage1_epochs);
  kv["stage2_epochs"] = std::to_string(train.stage2_epochs);
  kv["batch_size"] = std::to_string(train.batch_size);
  kv["grad_clip"] = num(train.grad_clip);
  kv["supervision_mode"] = to_string(train.supervision);
  kv["feature_mode"] = to_string(train.feature_mode);
  kv["pooling"] = to_string(train.pooling);
  kv["mask_non_nouns"] = train.mask_non_nouns ? "true" : "false";
  kv["attn_free_decode"] = train.attn_free_decode ? "true" : "false";
  kv["gen_train"] = std::to_string(gen.num_train);
  kv["gen_val"] = std::to_string(gen.num_val);
  kv["gen_test"] = std::to_string(gen.num_test);
  kv["gen_n_min"] = std::to_string(gen.n_min);
  kv["gen_n_max"] = std::to_string(gen.n_max);
  kv["gen_rel_min"] = std::to_string(gen.rel_min);
  kv["gen_rel_max"] = std::to_string(gen.rel_max);
  kv["gen_mention_min"] = std::to_string(gen.mention_min);
  kv["gen_mention_max"] = std::to_string(gen.mention_max);
  kv["gen_attr_prob"] = num(gen.attr_prob);
  return kv;
}

}  // namespace tsg
