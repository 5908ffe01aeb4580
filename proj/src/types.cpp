#include "topicsg/types.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace tsg {

Box::Box(double cx_, double cy_, double w_, double h_) : cx(cx_), cy(cy_), w(w_), h(h_) {
  if (!(w > 0.0) || !(h > 0.0)) throw SchemaError("Box: width and height must be positive");
}

Box Box::from_corners(double x1, double y1, double x2, double y2) {
  return Box((x1 + x2) / 2.0, (y1 + y2) / 2.0, x2 - x1, y2 - y1);
}

double box_iou(const Box& a, const Box& b) {
  double ix = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  double iy = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  double inter = ix * iy;
  double uni = a.area() + b.area() - inter;
  return inter / uni;
}

namespace {
const char* kReserved[] = {"<bos>", "<eos>", "<pad>", "<unk>"};
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 4) throw SchemaError("vocabulary: missing reserved tokens");
  for (int i = 0; i < 4; ++i) {
    if (tokens[i] != kReserved[i])
      throw SchemaError("vocabulary: reserved token slot " + std::to_string(i) +
                        " must be " + kReserved[i]);
  }
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  for (size_t i = 0; i < v.tokens_.size(); ++i) {
    auto [_, fresh] = v.index_.emplace(v.tokens_[i], static_cast<int>(i));
    if (!fresh) throw SchemaError("vocabulary: duplicate token '" + v.tokens_[i] + "'");
  }
  return v;
}

Vocabulary Vocabulary::from_words(const std::vector<std::string>& words) {
  std::vector<std::string> tokens(kReserved, kReserved + 4);
  tokens.insert(tokens.end(), words.begin(), words.end());
  return from_tokens(std::move(tokens));
}

const std::string& Vocabulary::token(int index) const {
  if (index < 0 || index >= size()) throw UsageError("vocabulary: index out of range");
  return tokens_[index];
}

int Vocabulary::index(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

std::string normalize_text(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':') continue;
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::vector<int> tokenize(const std::string& text, const Vocabulary& vocab) {
  std::string norm = normalize_text(text);
  if (norm.empty()) throw UsageError("empty caption");
  std::vector<int> out;
  std::istringstream ss(norm);
  std::string word;
  while (ss >> word) {
    int ix = vocab.index(word);
    out.push_back(ix < 0 ? Vocabulary::kUnk : ix);
  }
  out.push_back(Vocabulary::kEos);
  return out;
}

std::string detokenize(const std::vector<int>& tokens, const Vocabulary& vocab) {
  std::string out;
  for (int t : tokens) {
    if (t == Vocabulary::kBos || t == Vocabulary::kEos || t == Vocabulary::kPad) continue;
    if (!out.empty()) out.push_back(' ');
    out += vocab.token(t);
  }
  return out;
}

std::vector<std::string> token_strings(const std::vector<int>& tokens, const Vocabulary& vocab) {
  std::vector<std::string> out;
  for (int t : tokens) {
    if (t == Vocabulary::kBos || t == Vocabulary::kEos || t == Vocabulary::kPad) continue;
    out.push_back(vocab.token(t));
  }
  return out;
}

const SceneObject* SceneRecord::find_object(int id) const {
  for (const auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

void SceneRecord::validate(const Vocabulary& vocab) const {
  std::set<int> ids;
  for (const auto& o : objects) {
    if (!ids.insert(o.id).second)
      throw SchemaError("record " + image_id + ": duplicate object id " + std::to_string(o.id));
    if (o.category < 0 || o.category >= vocab.size())
      throw SchemaError("record " + image_id + ": object " + std::to_string(o.id) +
                        " has invalid category index");
    for (int a : o.attribute_words)
      if (a < 0 || a >= vocab.size())
        throw SchemaError("record " + image_id + ": invalid attribute index");
  }
  for (size_t k = 0; k < relations.size(); ++k) {
    const auto& r = relations[k];
    if (r.subject_id == r.object_id)
      throw SchemaError("record " + image_id + ": relation " + std::to_string(k) +
                        " has subject == object");
    if (!find_object(r.subject_id) || !find_object(r.object_id))
      throw SchemaError("record " + image_id + ": relation " + std::to_string(k) +
                        " references unknown object id");
    if (r.words.empty() || r.words.back() != Vocabulary::kEos)
      throw SchemaError("record " + image_id + ": relation " + std::to_string(k) +
                        " caption must end with EOS");
  }
  if (image_caption.empty() || image_caption.back() != Vocabulary::kEos)
    throw SchemaError("record " + image_id + ": image caption must be non-empty and EOS-terminated");
  if (important_flags.size() != relations.size())
    throw SchemaError("record " + image_id + ": important_flags length mismatch");
}

}  // namespace tsg
