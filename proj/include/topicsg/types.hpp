#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "topicsg/common.hpp"

namespace tsg {

// Axis-aligned box in center form. Corner form only appears at the IoU
// boundary and in files.
struct Box {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  Box() = default;
  Box(double cx_, double cy_, double w_, double h_);

  static Box from_corners(double x1, double y1, double x2, double y2);
  double x1() const { return cx - w / 2.0; }
  double y1() const { return cy - h / 2.0; }
  double x2() const { return cx + w / 2.0; }
  double y2() const { return cy + h / 2.0; }
  double area() const { return w * h; }
};

double box_iou(const Box& a, const Box& b);

class Vocabulary {
 public:
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr int kPad = 2;
  static constexpr int kUnk = 3;

  Vocabulary() = default;
  // tokens must start with the four reserved entries <bos> <eos> <pad> <unk>
  static Vocabulary from_tokens(std::vector<std::string> tokens);
  // convenience: prepends the reserved entries
  static Vocabulary from_words(const std::vector<std::string>& words);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(int index) const;
  // -1 when absent
  int index(const std::string& token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

struct SceneObject {
  int id = 0;
  Box box;
  int category = 0;                 // vocabulary index
  std::vector<int> attribute_words;  // vocabulary indices, may be empty
};

struct RelationalCaption {
  int subject_id = 0;
  int object_id = 0;
  std::vector<int> words;  // ends with EOS
};

struct SceneRecord {
  std::string image_id;
  std::vector<SceneObject> objects;
  std::vector<RelationalCaption> relations;
  std::vector<int> image_caption;     // ends with EOS
  std::vector<bool> important_flags;  // evaluation-only, length == relations.size()

  const SceneObject* find_object(int id) const;
  // throws SchemaError naming the offending field
  void validate(const Vocabulary& vocab) const;
};

// lowercase, strip .,!?;: and collapse whitespace
std::string normalize_text(const std::string& text);
// unknown words map to UNK; output ends with EOS; empty input -> UsageError
std::vector<int> tokenize(const std::string& text, const Vocabulary& vocab);
// inverse of tokenize on in-vocabulary text; skips BOS/EOS/PAD
std::string detokenize(const std::vector<int>& tokens, const Vocabulary& vocab);
std::vector<std::string> token_strings(const std::vector<int>& tokens, const Vocabulary& vocab);

}  // namespace tsg
