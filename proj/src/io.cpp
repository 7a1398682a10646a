// Copyright 2026 The CharGround Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "charground/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "charground/error.hpp"

namespace charground {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return os.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

namespace {

[[noreturn]] void schema_error(const std::string& message) {
  throw Error(ErrorCode::kSchema, message);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Field access with the JSON path of the value kept for error messages.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  bool has(const char* key) const {
    return j_.is_object() && j_.contains(key) && !j_.at(key).is_null();
  }
  Node operator[](const char* key) const {
    if (!j_.is_object()) schema_error(path_ + ": expected an object");
    if (!j_.contains(key)) schema_error("missing field '" + child_path(key) + "'");
    return Node(j_.at(key), child_path(key));
  }
  std::vector<Node> items() const {
    if (!j_.is_array()) schema_error(path_ + ": expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_.size(); ++i) {
      out.emplace_back(j_[i], path_ + "[" + std::to_string(i) + "]");
    }
    return out;
  }
  std::string str() const {
    if (!j_.is_string()) schema_error(path_ + ": expected a string");
    return j_.get<std::string>();
  }
  double number() const {
    if (!j_.is_number()) schema_error(path_ + ": expected a number");
    return j_.get<double>();
  }
  std::size_t index() const {
    if (j_.is_number_unsigned()) return j_.get<std::size_t>();
    if (j_.is_number_integer() && j_.get<long long>() >= 0) return j_.get<std::size_t>();
    schema_error(path_ + ": expected a non-negative integer");
  }
  long long integer() const {
    if (j_.is_number_integer()) return j_.get<long long>();
    if (j_.is_number_float()) {
      const double v = j_.get<double>();
      if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
        return static_cast<long long>(v);
      }
    }
    schema_error(path_ + ": expected an integer");
  }

 private:
  std::string child_path(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  const Json& j_;
  std::string path_;
};

void check_version(const Json& doc) {
  if (!doc.is_object()) schema_error("document root must be an object");
  if (!doc.contains("format_version")) return;
  const Json& v = doc.at("format_version");
  if (!v.is_number_integer() || v.get<long long>() != kFormatVersion) {
    schema_error("unsupported format_version " + v.dump());
  }
}

Json box_json(const BoundingBox& b) { return Json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}; }

BoundingBox read_box(const Node& n) {
  return {n["x"].number(), n["y"].number(), n["w"].number(), n["h"].number()};
}

Json vector_json(const std::vector<float>& v) {
  Json out = Json::array();
  for (float x : v) out.push_back(static_cast<double>(x));
  return out;
}

std::vector<float> read_vector(const Node& n) {
  std::vector<float> out;
  for (const Node& item : n.items()) {
    const double v = item.number();
    const auto f = static_cast<float>(v);
    if (!std::isfinite(v) || !std::isfinite(f)) {
      schema_error(item.path() + ": non-finite embedding value");
    }
    out.push_back(f);
  }
  return out;
}

void throw_violations(const std::string& what, const std::vector<std::string>& violations) {
  if (violations.empty()) return;
  std::string message = what + ": " + violations.front();
  for (std::size_t i = 1; i < violations.size(); ++i) message += "; " + violations[i];
  schema_error(message);
}

std::vector<fs::path> json_files(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) return {path};
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(path, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(entry.path());
    }
  }
  if (ec) throw Error(ErrorCode::kIo, "cannot list " + path.string());
  std::sort(out.begin(), out.end());
  return out;
}

// Prefix load errors with the file name.
template <typename F>
auto with_path(const fs::path& path, F&& f) {
  const std::string text = read_file(path);
  try {
    return f(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Stories

Json mention_json(const Mention& m) {
  return Json{{"sentence_index", m.sentence_index},
              {"token_start", m.token_start},
              {"token_end", m.token_end},
              {"text", m.surface}};
}

MentionKind kind_of(const AnnotatedStory& story, const Mention& m) {
  if (m.sentence_index >= story.sentences.size()) return MentionKind::kNoun;
  const auto& tokens = story.sentences[m.sentence_index].tokens;
  if (m.token_start >= m.token_end || m.token_end > tokens.size()) return MentionKind::kNoun;
  for (std::size_t t = m.token_start; t < m.token_end; ++t) {
    if (is_noun_tag(tokens[t].pos)) return MentionKind::kNoun;
  }
  for (std::size_t t = m.token_start; t < m.token_end; ++t) {
    if (is_pronoun_tag(tokens[t].pos)) return MentionKind::kPronoun;
  }
  return MentionKind::kNoun;
}

Number read_number(const Node& n) {
  const auto number = parse_number(n.str());
  if (!number) schema_error(n.path() + ": unknown number class '" + n.str() + "'");
  return *number;
}

GoldAnnotation read_gold(const Node& g, const AnnotatedStory& story) {
  GoldAnnotation gold;
  if (g.has("text_chains")) {
    for (const Node& c : g["text_chains"].items()) {
      TextChain chain;
      chain.chain_id = c["chain_id"].str();
      chain.number = read_number(c["number"]);
      for (const Node& m : c["mentions"].items()) {
        Mention mention;
        mention.sentence_index = m["sentence_index"].index();
        mention.token_start = m["token_start"].index();
        mention.token_end = m["token_end"].index();
        mention.surface = m["text"].str();
        mention.number = chain.number;
        mention.kind = kind_of(story, mention);
        chain.mentions.push_back(std::move(mention));
      }
      gold.text_chains.push_back(std::move(chain));
    }
  }
  if (g.has("visual_chains")) {
    for (const Node& c : g["visual_chains"].items()) {
      VisualChain chain;
      chain.chain_id = c["chain_id"].str();
      for (const Node& b : c["boxes"].items()) {
        FaceInstance face;
        face.image_index = b["image_index"].index();
        face.box = read_box(b);
        chain.faces.push_back(std::move(face));
      }
      gold.visual_chains.push_back(std::move(chain));
    }
  }
  if (g.has("alignment")) {
    for (const Node& a : g["alignment"].items()) {
      gold.alignment.emplace_back(a["text_chain_id"].str(), a["visual_chain_id"].str());
    }
  }
  if (g.has("importance")) {
    for (const Node& i : g["importance"].items()) {
      const std::string id = i["chain_id"].str();
      const Node stars = i["stars"];
      if (!stars.json().is_number()) schema_error(stars.path() + ": expected a number");
      const double v = stars.number();
      if (!(v >= 1 && v <= 5)) schema_error("stars out of range: " + id);
      if (v != std::floor(v)) schema_error("stars must be an integer: " + id);
      if (!gold.importance.emplace(id, static_cast<int>(v)).second) {
        schema_error("duplicate importance entry: " + id);
      }
    }
  }
  return gold;
}

// ---------------------------------------------------------------------------
// Predictions

Json text_chain_json(const TextChain& c) {
  Json mentions = Json::array();
  for (const Mention& m : c.mentions) {
    Json j = mention_json(m);
    j["number"] = to_string(m.number);
    j["kind"] = to_string(m.kind);
    mentions.push_back(std::move(j));
  }
  return Json{{"chain_id", c.chain_id}, {"number", to_string(c.number)}, {"mentions", mentions}};
}

Json visual_chain_json(const VisualChain& c) {
  Json faces = Json::array();
  for (const FaceInstance& f : c.faces) {
    Json j{{"image_index", f.image_index}, {"box", box_json(f.box)}};
    if (!f.embedding.empty()) j["vector"] = vector_json(f.embedding);
    faces.push_back(std::move(j));
  }
  return Json{{"chain_id", c.chain_id}, {"faces", faces}};
}

MentionKind read_kind(const Node& n) {
  const std::string s = n.str();
  if (s == "noun") return MentionKind::kNoun;
  if (s == "pronoun") return MentionKind::kPronoun;
  schema_error(n.path() + ": unknown mention kind '" + s + "'");
}

}  // namespace

AnnotatedStory parse_story(std::string_view text) {
  const Json doc = parse_json(text);
  check_version(doc);
  const Node root(doc, "");
  AnnotatedStory story;
  story.story_id = root["story_id"].str();
  try {
    for (const Node& s : root["sentences"].items()) {
      Sentence sentence;
      sentence.index = s["index"].index();
      sentence.text = s["text"].str();
      for (const Node& t : s["tokens"].items()) {
        sentence.tokens.push_back(Token{t["text"].str(), t["pos"].str(),
                                        t["char_start"].index(), t["char_end"].index()});
      }
      story.sentences.push_back(std::move(sentence));
    }
    for (const Node& i : root["images"].items()) {
      const long long w = i["width"].integer();
      const long long h = i["height"].integer();
      if (w > std::numeric_limits<int>::max() || h > std::numeric_limits<int>::max() ||
          w < std::numeric_limits<int>::min() || h < std::numeric_limits<int>::min()) {
        schema_error(i.path() + ": image size out of range");
      }
      story.images.push_back({i["index"].index(), static_cast<int>(w), static_cast<int>(h)});
    }
    if (root.has("gold")) story.gold = read_gold(root["gold"], story);
  } catch (const Error& e) {
    throw Error(e.code(), "story " + story.story_id + ": " + e.what());
  }
  throw_violations("story " + story.story_id, validate_story(story));
  return story;
}

std::string story_to_json(const AnnotatedStory& story) {
  Json sentences = Json::array();
  for (const Sentence& s : story.sentences) {
    Json tokens = Json::array();
    for (const Token& t : s.tokens) {
      tokens.push_back(Json{{"text", t.text}, {"pos", t.pos},
                            {"char_start", t.char_start}, {"char_end", t.char_end}});
    }
    sentences.push_back(Json{{"index", s.index}, {"text", s.text}, {"tokens", tokens}});
  }
  Json images = Json::array();
  for (const ImageDesc& i : story.images) {
    images.push_back(Json{{"index", i.index}, {"width", i.width}, {"height", i.height}});
  }
  Json doc{{"format_version", kFormatVersion},
           {"story_id", story.story_id},
           {"sentences", sentences},
           {"images", images}};
  if (story.gold) {
    const GoldAnnotation& g = *story.gold;
    Json text_chains = Json::array();
    for (const TextChain& c : g.text_chains) {
      Json mentions = Json::array();
      for (const Mention& m : c.mentions) mentions.push_back(mention_json(m));
      text_chains.push_back(Json{{"chain_id", c.chain_id},
                                 {"number", to_string(c.number)},
                                 {"mentions", mentions}});
    }
    Json visual_chains = Json::array();
    for (const VisualChain& c : g.visual_chains) {
      Json boxes = Json::array();
      for (const FaceInstance& f : c.faces) {
        Json b{{"image_index", f.image_index}};
        b.update(box_json(f.box));
        boxes.push_back(std::move(b));
      }
      visual_chains.push_back(Json{{"chain_id", c.chain_id}, {"boxes", boxes}});
    }
    Json alignment = Json::array();
    for (const auto& [t, v] : g.alignment) {
      alignment.push_back(Json{{"text_chain_id", t}, {"visual_chain_id", v}});
    }
    Json importance = Json::array();
    for (const auto& [id, stars] : g.importance) {
      importance.push_back(Json{{"chain_id", id}, {"stars", stars}});
    }
    doc["gold"] = Json{{"text_chains", text_chains},
                       {"visual_chains", visual_chains},
                       {"alignment", alignment},
                       {"importance", importance}};
  }
  return dump(doc);
}

AnnotatedStory load_story(const fs::path& path) {
  return with_path(path, [](const std::string& text) { return parse_story(text); });
}

std::vector<AnnotatedStory> load_corpus(const fs::path& path) {
  std::vector<AnnotatedStory> out;
  for (const fs::path& file : json_files(path)) out.push_back(load_story(file));
  return out;
}

EmbeddingTable parse_embeddings(std::string_view text) {
  const Json doc = parse_json(text);
  check_version(doc);
  const Node root(doc, "");
  EmbeddingTable table;
  table.dim = root["dim"].index();
  if (table.dim == 0) schema_error("embedding dim must be positive");

  auto checked = [&](const Node& n, const std::string& entry) {
    std::vector<float> v = read_vector(n);
    if (v.size() != table.dim) {
      schema_error(entry + ": vector length " + std::to_string(v.size()) +
                   " does not match dim " + std::to_string(table.dim));
    }
    return v;
  };
  if (root.has("faces")) {
    for (const Node& f : root["faces"].items()) {
      const std::size_t image = f["image_index"].index();
      const BoundingBox box = read_box(f["box"]);
      std::vector<float> v = checked(f["vector"], f.path());
      if (!table.faces.emplace(EmbeddingTable::key(image, box), std::move(v)).second) {
        schema_error(f.path() + ": duplicate face entry for image " + std::to_string(image));
      }
    }
  }
  if (root.has("mentions")) {
    for (const Node& m : root["mentions"].items()) {
      std::string surface = m["surface"].str();
      std::vector<float> v = checked(m["vector"], m.path() + " ('" + surface + "')");
      if (!table.mentions.emplace(surface, std::move(v)).second) {
        schema_error(m.path() + ": duplicate mention entry '" + surface + "'");
      }
    }
  }
  return table;
}

std::string embeddings_to_json(const EmbeddingTable& table) {
  Json faces = Json::array();
  for (const auto& [key, v] : table.faces) {
    const auto& [image, x, y, w, h] = key;
    faces.push_back(Json{{"image_index", image},
                         {"box", box_json({x, y, w, h})},
                         {"vector", vector_json(v)}});
  }
  Json mentions = Json::array();
  for (const auto& [surface, v] : table.mentions) {
    mentions.push_back(Json{{"surface", surface}, {"vector", vector_json(v)}});
  }
  return dump(Json{{"format_version", kFormatVersion},
                   {"dim", table.dim},
                   {"faces", faces},
                   {"mentions", mentions}});
}

EmbeddingTable load_embeddings(const fs::path& path) {
  return with_path(path, [](const std::string& text) { return parse_embeddings(text); });
}

ExternalCoref parse_external_coref(std::string_view text) {
  const Json doc = parse_json(text);
  check_version(doc);
  const Node root(doc, "");
  ExternalCoref out;
  for (const Node& chain : root["chains"].items()) {
    std::vector<ExternalCoref::TokenRef> refs;
    for (const Node& r : chain.items()) {
      refs.push_back({r["sentence_index"].index(), r["token_index"].index()});
    }
    if (refs.empty()) schema_error(chain.path() + ": empty chain");
    out.chains.push_back(std::move(refs));
  }
  return out;
}

std::string external_coref_to_json(const ExternalCoref& coref) {
  Json chains = Json::array();
  for (const auto& chain : coref.chains) {
    Json refs = Json::array();
    for (const auto& r : chain) {
      refs.push_back(Json{{"sentence_index", r.sentence_index}, {"token_index", r.token_index}});
    }
    chains.push_back(std::move(refs));
  }
  return dump(Json{{"format_version", kFormatVersion}, {"chains", chains}});
}

ExternalCoref load_external_coref(const fs::path& path) {
  return with_path(path, [](const std::string& text) { return parse_external_coref(text); });
}

Prediction parse_prediction(std::string_view text) {
  const Json doc = parse_json(text);
  check_version(doc);
  const Node root(doc, "");
  Prediction pred;
  pred.story_id = root["story_id"].str();

  std::map<std::string, std::size_t> text_index;
  std::map<std::string, std::size_t> visual_index;
  // both chain lists are always present, possibly empty
  for (const Node& c : root["text_chains"].items()) {
    TextChain chain;
    chain.chain_id = c["chain_id"].str();
    chain.number = read_number(c["number"]);
    for (const Node& m : c["mentions"].items()) {
      Mention mention;
      mention.sentence_index = m["sentence_index"].index();
      mention.token_start = m["token_start"].index();
      mention.token_end = m["token_end"].index();
      mention.surface = m["text"].str();
      mention.number = read_number(m["number"]);
      mention.kind = read_kind(m["kind"]);
      chain.mentions.push_back(std::move(mention));
    }
    if (chain.number != chain_number(chain.mentions)) {
      schema_error(c.path() + ": chain number inconsistent with mentions");
    }
    if (!text_index.emplace(chain.chain_id, pred.text_chains.size()).second) {
      schema_error("duplicate chain id: " + chain.chain_id);
    }
    pred.text_chains.push_back(std::move(chain));
  }
  for (const Node& c : root["visual_chains"].items()) {
    VisualChain chain;
    chain.chain_id = c["chain_id"].str();
    for (const Node& f : c["faces"].items()) {
      FaceInstance face;
      face.image_index = f["image_index"].index();
      face.box = read_box(f["box"]);
      if (f.has("vector")) face.embedding = read_vector(f["vector"]);
      chain.faces.push_back(std::move(face));
    }
    if (text_index.count(chain.chain_id) ||
        !visual_index.emplace(chain.chain_id, pred.visual_chains.size()).second) {
      schema_error("duplicate chain id: " + chain.chain_id);
    }
    pred.visual_chains.push_back(std::move(chain));
  }

  auto text_of = [&](const Node& n) {
    auto it = text_index.find(n.str());
    if (it == text_index.end()) schema_error(n.path() + ": unknown text chain '" + n.str() + "'");
    return it->second;
  };
  auto visual_of = [&](const Node& n) {
    auto it = visual_index.find(n.str());
    if (it == visual_index.end()) {
      schema_error(n.path() + ": unknown visual chain '" + n.str() + "'");
    }
    return it->second;
  };

  if (root.has("alignment")) {
    const Node a = root["alignment"];
    Alignment alignment;
    for (const Node& p : a["pairs"].items()) {
      alignment.pairs.push_back(
          {text_of(p["text_chain_id"]), visual_of(p["visual_chain_id"]), p["score"].number()});
    }
    for (const Node& p : a["plural_attachments"].items()) {
      alignment.plural_attachments.push_back(
          {visual_of(p["visual_chain_id"]), text_of(p["text_chain_id"]), p["score"].number()});
    }
    pred.alignment = std::move(alignment);
  }
  if (root.has("ranking_modality")) {
    const Node m = root["ranking_modality"];
    const auto modality = parse_modality(m.str());
    if (!modality) schema_error(m.path() + ": unknown modality '" + m.str() + "'");
    pred.ranking_modality = modality;
  }
  if (root.has("characters")) {
    for (const Node& c : root["characters"].items()) {
      std::optional<TextChain> text;
      if (c.has("text_chain_id")) text = pred.text_chains[text_of(c["text_chain_id"])];
      std::vector<const VisualChain*> visual;
      for (const Node& v : c["visual_chain_ids"].items()) {
        visual.push_back(&pred.visual_chains[visual_of(v)]);
      }
      MultiModalChain chain = make_multimodal(c["chain_id"].str(), std::move(text), visual);
      if (c["importance"].index() != chain.importance) {
        schema_error(c.path() + ": importance does not match chain lengths");
      }
      pred.characters.push_back(std::move(chain));
    }
  }
  return pred;
}

std::string prediction_to_json(const Prediction& pred) {
  Json text_chains = Json::array();
  for (const TextChain& c : pred.text_chains) text_chains.push_back(text_chain_json(c));
  Json visual_chains = Json::array();
  for (const VisualChain& c : pred.visual_chains) visual_chains.push_back(visual_chain_json(c));

  Json doc{{"format_version", kFormatVersion},
           {"story_id", pred.story_id},
           {"text_chains", text_chains},
           {"visual_chains", visual_chains}};
  auto text_id = [&](std::size_t i) {
    if (i >= pred.text_chains.size()) throw_parameter("alignment index out of range");
    return pred.text_chains[i].chain_id;
  };
  auto visual_id = [&](std::size_t i) {
    if (i >= pred.visual_chains.size()) throw_parameter("alignment index out of range");
    return pred.visual_chains[i].chain_id;
  };
  if (pred.alignment) {
    Json pairs = Json::array();
    for (const auto& p : pred.alignment->pairs) {
      pairs.push_back(Json{{"text_chain_id", text_id(p.text_index)},
                           {"visual_chain_id", visual_id(p.visual_index)},
                           {"score", p.score}});
    }
    Json attachments = Json::array();
    for (const auto& a : pred.alignment->plural_attachments) {
      attachments.push_back(Json{{"text_chain_id", text_id(a.text_index)},
                                 {"visual_chain_id", visual_id(a.visual_index)},
                                 {"score", a.score}});
    }
    doc["alignment"] = Json{{"pairs", pairs}, {"plural_attachments", attachments}};
  } else {
    doc["alignment"] = nullptr;
  }
  doc["ranking_modality"] =
      pred.ranking_modality ? Json(to_string(*pred.ranking_modality)) : Json(nullptr);
  Json characters = Json::array();
  for (const MultiModalChain& c : pred.characters) {
    characters.push_back(Json{{"chain_id", c.chain_id},
                              {"text_chain_id", c.text ? Json(c.text->chain_id) : Json(nullptr)},
                              {"visual_chain_ids", c.visual_chain_ids},
                              {"importance", c.importance}});
  }
  doc["characters"] = characters;
  return dump(doc);
}

Prediction load_prediction(const fs::path& path) {
  return with_path(path, [](const std::string& text) { return parse_prediction(text); });
}

std::vector<Prediction> load_predictions(const fs::path& path) {
  std::vector<Prediction> out;
  for (const fs::path& file : json_files(path)) out.push_back(load_prediction(file));
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_value(const MetricEntry& m) {
  if (!m.value) return "";
  char buf[64];
  if (m.integral) {
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(std::llround(*m.value)));
  } else {
    std::snprintf(buf, sizeof buf, "%.4f", *m.value);
  }
  return buf;
}

}  // namespace

std::string report_to_string(const EvaluationReport& report, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    std::string out = "scope,metric,value\n";
    for (const ReportSection& s : report.sections) {
      for (const MetricEntry& m : s.metrics) {
        out += csv_field(s.scope) + "," + csv_field(m.name) + "," + csv_value(m) + "\n";
      }
    }
    return out;
  }
  Json sections = Json::array();
  for (const ReportSection& s : report.sections) {
    Json metrics = Json::object();
    for (const MetricEntry& m : s.metrics) {
      if (!m.value) {
        metrics[m.name] = nullptr;
      } else if (m.integral) {
        metrics[m.name] = std::llround(*m.value);
      } else {
        metrics[m.name] = *m.value;
      }
    }
    sections.push_back(Json{{"scope", s.scope}, {"metrics", metrics}});
  }
  return dump(Json{{"format_version", kFormatVersion},
                   {"kind", report.kind},
                   {"sections", sections}});
}

void write_report(const EvaluationReport& report, const fs::path& path, ReportFormat format) {
  write_file(path, report_to_string(report, format));
}

EvaluationReport parse_report(std::string_view text) {
  const Json doc = parse_json(text);
  check_version(doc);
  const Node root(doc, "");
  EvaluationReport report;
  report.kind = root["kind"].str();
  for (const Node& s : root["sections"].items()) {
    ReportSection section;
    section.scope = s["scope"].str();
    const Node metrics = s["metrics"];
    if (!metrics.json().is_object()) schema_error(metrics.path() + ": expected an object");
    for (const auto& [name, value] : metrics.json().items()) {
      MetricEntry entry{name, std::nullopt, false};
      if (value.is_number_integer()) {
        entry.value = value.get<double>();
        entry.integral = true;
      } else if (value.is_number()) {
        entry.value = value.get<double>();
      } else if (!value.is_null()) {
        schema_error(metrics.path() + "." + name + ": expected a number or null");
      }
      section.metrics.push_back(std::move(entry));
    }
    report.sections.push_back(std::move(section));
  }
  return report;
}

}  // namespace charground
