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

// chargnd: command-line front end of the character grounding library.
//
// Exit codes: 0 success, 2 usage or parameter error, 3 data, schema or I/O
// error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "charground/charground.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

// Thrown from command bodies after a failed library call.
struct Failure {
  int exit_code;
};

void check(cg_status status) {
  if (status == CG_OK) return;
  std::cerr << "chargnd: " << cg_status_string(status) << ": " << cg_last_error() << "\n";
  throw Failure{status == CG_ERR_PARAMETER ? kExitUsage : kExitData};
}

[[noreturn]] void usage_error(const std::string& message) {
  std::cerr << "chargnd: usage error: " << message << "\n";
  throw Failure{kExitUsage};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Story = std::unique_ptr<cg_story, Deleter<cg_story, cg_story_free>>;
using Corpus = std::unique_ptr<cg_corpus, Deleter<cg_corpus, cg_corpus_free>>;
using Lexicon = std::unique_ptr<cg_lexicon, Deleter<cg_lexicon, cg_lexicon_free>>;
using Embeddings = std::unique_ptr<cg_embeddings, Deleter<cg_embeddings, cg_embeddings_free>>;
using Pred = std::unique_ptr<cg_prediction, Deleter<cg_prediction, cg_prediction_free>>;
using Report = std::unique_ptr<cg_report, Deleter<cg_report, cg_report_free>>;

Story load_story(const std::string& path) {
  cg_story* s = nullptr;
  check(cg_story_load(path.c_str(), &s));
  return Story(s);
}

Corpus load_corpus(const std::string& path) {
  cg_corpus* c = nullptr;
  check(cg_corpus_load(path.c_str(), &c));
  return Corpus(c);
}

Embeddings load_embeddings(const std::string& path) {
  cg_embeddings* e = nullptr;
  check(cg_embeddings_load(path.c_str(), &e));
  return Embeddings(e);
}

Pred load_prediction(const std::string& path) {
  cg_prediction* p = nullptr;
  check(cg_prediction_load(path.c_str(), &p));
  return Pred(p);
}

void write_text(const std::string& out, const char* text) {
  if (out.empty() || out == "-") {
    std::fwrite(text, 1, std::char_traits<char>::length(text), stdout);
    std::fflush(stdout);
    return;
  }
  std::FILE* f = std::fopen(out.c_str(), "wb");
  if (!f) {
    std::cerr << "chargnd: i/o error: cannot open " << out << " for writing\n";
    throw Failure{kExitData};
  }
  const std::size_t n = std::char_traits<char>::length(text);
  const bool ok = std::fwrite(text, 1, n, f) == n;
  if (std::fclose(f) != 0 || !ok) {
    std::cerr << "chargnd: i/o error: cannot write " << out << "\n";
    throw Failure{kExitData};
  }
}

void emit_prediction(const cg_prediction* pred, const std::string& out) {
  char* json = nullptr;
  check(cg_prediction_to_json(pred, &json));
  std::unique_ptr<char, void (*)(char*)> guard(json, cg_string_free);
  write_text(out, json);
}

void emit_report(const cg_report* report, const std::string& format, const std::string& out) {
  char* text = nullptr;
  check(cg_report_to_string(report, format == "csv" ? CG_FORMAT_CSV : CG_FORMAT_JSON, &text));
  std::unique_ptr<char, void (*)(char*)> guard(text, cg_string_free);
  write_text(out, text);
}

// --- options shared between subcommands -------------------------------------

struct DetectOptions {
  std::string lexicon = CHARGROUND_DEFAULT_DATA_DIR "/lexicon/characters.txt";
  std::string group_words = CHARGROUND_DEFAULT_DATA_DIR "/lexicon/group_words.txt";
  std::string coref = "heuristic";

  void add(CLI::App* cmd) {
    cmd->add_option("--lexicon", lexicon, "Character noun lexicon")->capture_default_str();
    cmd->add_option("--group-words", group_words, "Group word list")->capture_default_str();
    cmd->add_option("--coref", coref, "heuristic or external:PATH")->capture_default_str();
  }

  // Path of the external coref file; nullopt for the heuristic resolver.
  std::optional<std::string> coref_path() const {
    if (coref == "heuristic") return std::nullopt;
    const std::string prefix = "external:";
    if (coref.rfind(prefix, 0) == 0 && coref.size() > prefix.size()) {
      return coref.substr(prefix.size());
    }
    usage_error("--coref must be 'heuristic' or 'external:PATH'");
  }
};

struct ClusterOptions {
  cg_cluster_config config{};
  CLI::Option* seed_flag = nullptr;

  void add(CLI::App* cmd) {
    cg_cluster_config_init(&config);
    cmd->add_option("--k-min", config.k_min, "Smallest cluster count")->capture_default_str();
    cmd->add_option("--k-max", config.k_max, "Largest cluster count")->capture_default_str();
    seed_flag = cmd->add_option("--seed", config.seed, "k-means seed (default "
                                "CHARGROUND_SEED or 0)");
    cmd->add_option("--restarts", config.restarts, "k-means++ restarts per k")
        ->capture_default_str();
  }

  // Applies CHARGROUND_SEED and rejects unusable settings before any file is
  // read.
  void finalize() {
    if (seed_flag->count() == 0) {
      if (const char* env = std::getenv("CHARGROUND_SEED"); env && *env) {
        try {
          std::size_t used = 0;
          config.seed = std::stoull(env, &used);
          if (env[used] != '\0') throw std::invalid_argument(env);
        } catch (const std::exception&) {
          usage_error(std::string("CHARGROUND_SEED is not an unsigned integer: ") + env);
        }
      }
    }
    check(cg_cluster_config_validate(&config));
  }
};

struct GroundOptions {
  std::string method = "dist";
  double plural_threshold = 0.6;
  bool keep_zero = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--method", method, "Similarity: dist or embed")
        ->check(CLI::IsMember({"dist", "embed"}))
        ->capture_default_str();
    cmd->add_option("--plural-threshold", plural_threshold,
                    "Minimum similarity to attach a visual chain to a plural/group chain")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_flag("--keep-zero", keep_zero, "Keep matched pairs with similarity 0");
  }

  cg_ground_config config() const {
    cg_ground_config c;
    cg_ground_config_init(&c);
    c.method = method == "embed" ? CG_METHOD_EMBED : CG_METHOD_DIST;
    c.plural_threshold = plural_threshold;
    c.keep_zero = keep_zero ? 1 : 0;
    return c;
  }
};

cg_modality parse_modality(const std::string& m) {
  if (m == "text") return CG_MODALITY_TEXT;
  if (m == "image") return CG_MODALITY_IMAGE;
  return CG_MODALITY_MULTI;
}

Pred start_prediction(const cg_story* story, const std::string& in) {
  if (!in.empty()) return load_prediction(in);
  cg_prediction* p = nullptr;
  check(cg_prediction_create(story, &p));
  return Pred(p);
}

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

std::vector<std::string> prediction_files(const std::string& path) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) return {path};
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(path, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      out.push_back(entry.path().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Character detection, grounding and ranking for visual stories"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cg_version());

  std::string story_path;
  std::string in_path;
  std::string out_path;
  std::string embeddings_path;
  std::string format = "json";
  std::function<void()> run;

  // detect-text
  DetectOptions detect;
  {
    auto* cmd = app.add_subcommand("detect-text", "Detect textual characters and chains");
    cmd->add_option("--story", story_path, "Story file")->required();
    cmd->add_option("--out", out_path, "Prediction output (default stdout)");
    detect.add(cmd);
    cmd->callback([&] {
      run = [&] {
        const auto coref = detect.coref_path();
        Story story = load_story(story_path);
        cg_lexicon* lex = nullptr;
        check(cg_lexicon_load(detect.lexicon.c_str(), detect.group_words.c_str(), &lex));
        Lexicon lexicon(lex);
        Pred pred = start_prediction(story.get(), "");
        check(cg_detect_text(story.get(), lexicon.get(), coref ? coref->c_str() : nullptr,
                             pred.get()));
        emit_prediction(pred.get(), out_path);
      };
    });
  }

  // cluster
  ClusterOptions cluster;
  {
    auto* cmd = app.add_subcommand("cluster", "Cluster face embeddings into visual chains");
    cmd->add_option("--story", story_path, "Story file")->required();
    cmd->add_option("--embeddings", embeddings_path, "Embedding file")->required();
    cmd->add_option("--in", in_path, "Prediction to extend");
    cmd->add_option("--out", out_path, "Prediction output (default stdout)");
    cluster.add(cmd);
    cmd->callback([&] {
      run = [&] {
        cluster.finalize();
        Story story = load_story(story_path);
        Embeddings emb = load_embeddings(embeddings_path);
        Pred pred = start_prediction(story.get(), in_path);
        check(cg_cluster(story.get(), emb.get(), &cluster.config, pred.get()));
        emit_prediction(pred.get(), out_path);
      };
    });
  }

  // ground
  GroundOptions ground;
  bool gold_input = false;
  {
    auto* cmd = app.add_subcommand("ground", "Align text chains with visual chains");
    cmd->add_option("--story", story_path, "Story file")->required();
    auto* in = cmd->add_option("--in", in_path, "Prediction with text and visual chains");
    cmd->add_flag("--gold-input", gold_input, "Ground the gold chains of the story")
        ->excludes(in);
    cmd->add_option("--embeddings", embeddings_path, "Embedding file (needed by embed)");
    cmd->add_option("--out", out_path, "Prediction output (default stdout)");
    ground.add(cmd);
    cmd->callback([&] {
      run = [&] {
        if (!gold_input && in_path.empty()) usage_error("ground needs --in or --gold-input");
        if (ground.method == "embed" && embeddings_path.empty()) {
          usage_error("--method embed needs --embeddings");
        }
        Story story = load_story(story_path);
        Embeddings emb;
        if (!embeddings_path.empty()) emb = load_embeddings(embeddings_path);
        Pred pred;
        if (gold_input) {
          cg_prediction* p = nullptr;
          check(cg_prediction_from_gold(story.get(), &p));
          pred.reset(p);
        } else {
          pred = load_prediction(in_path);
        }
        const cg_ground_config cfg = ground.config();
        check(cg_ground(story.get(), emb.get(), &cfg, pred.get()));
        emit_prediction(pred.get(), out_path);
      };
    });
  }

  // rank
  std::string modality = "multi";
  {
    auto* cmd = app.add_subcommand("rank", "Rank characters by importance");
    cmd->add_option("--in", in_path, "Prediction file")->required();
    cmd->add_option("--modality", modality, "text, image or multi")
        ->check(CLI::IsMember({"text", "image", "multi"}))
        ->capture_default_str();
    cmd->add_option("--out", out_path, "Prediction output (default stdout)");
    cmd->callback([&] {
      run = [&] {
        Pred pred = load_prediction(in_path);
        check(cg_rank(parse_modality(modality), pred.get()));
        emit_prediction(pred.get(), out_path);
      };
    });
  }

  // eval
  std::string pred_path;
  std::string gold_path;
  std::string metrics = "detection,bcubed,exact,grounding,pk,pearson";
  std::vector<std::size_t> ks = {1, 3, 5};
  {
    auto* cmd = app.add_subcommand("eval", "Score predictions against gold annotations");
    cmd->add_option("--pred", pred_path, "Prediction file or directory")->required();
    cmd->add_option("--gold", gold_path, "Gold story file or directory")->required();
    cmd->add_option("--metrics", metrics, "Comma-separated metric families")
        ->capture_default_str();
    cmd->add_option("--k", ks, "Precision@k cut-offs")->delimiter(',')->capture_default_str();
    cmd->add_option("--out", out_path, "Report output (default stdout)");
    add_format(cmd, format);
    cmd->callback([&] {
      run = [&] {
        cg_eval_config cfg;
        cg_eval_config_init(&cfg);
        check(cg_parse_metrics(metrics.c_str(), &cfg.metrics));
        cfg.ks = ks.data();
        cfg.num_ks = ks.size();
        Corpus gold = load_corpus(gold_path);
        std::vector<Pred> preds;
        for (const std::string& f : prediction_files(pred_path)) {
          preds.push_back(load_prediction(f));
        }
        std::vector<const cg_prediction*> ptrs;
        for (const Pred& p : preds) ptrs.push_back(p.get());
        cg_report* r = nullptr;
        check(cg_evaluate(ptrs.data(), ptrs.size(), gold.get(), &cfg, &r));
        emit_report(Report(r).get(), format, out_path);
      };
    });
  }

  // agreement
  std::string a_path;
  std::string b_path;
  {
    auto* cmd = app.add_subcommand("agreement", "Inter-annotator agreement of two annotations");
    cmd->add_option("--a", a_path, "Reference annotation (file or directory)")->required();
    cmd->add_option("--b", b_path, "Compared annotation (file or directory)")->required();
    cmd->add_option("--out", out_path, "Report output (default stdout)");
    add_format(cmd, format);
    cmd->callback([&] {
      run = [&] {
        Corpus a = load_corpus(a_path);
        Corpus b = load_corpus(b_path);
        cg_report* r = nullptr;
        check(cg_agreement(a.get(), b.get(), &r));
        emit_report(Report(r).get(), format, out_path);
      };
    });
  }

  // stats
  {
    auto* cmd = app.add_subcommand("stats", "Dataset statistics of a gold corpus");
    cmd->add_option("--gold", gold_path, "Gold story file or directory")->required();
    cmd->add_option("--out", out_path, "Report output (default stdout)");
    add_format(cmd, format);
    cmd->callback([&] {
      run = [&] {
        Corpus corpus = load_corpus(gold_path);
        cg_report* r = nullptr;
        check(cg_stats(corpus.get(), &r));
        emit_report(Report(r).get(), format, out_path);
      };
    });
  }

  // pipeline
  std::string report_path;
  {
    auto* cmd = app.add_subcommand(
        "pipeline", "detect-text, cluster, ground and rank in one run, plus a report");
    cmd->add_option("--story", story_path, "Story file")->required();
    cmd->add_option("--embeddings", embeddings_path, "Embedding file (no faces if absent)");
    cmd->add_option("--out", out_path, "Prediction output (default stdout)");
    cmd->add_option("--report", report_path,
                    "Report output: evaluation if the story has gold, else a summary");
    cmd->add_option("--modality", modality, "Ranking modality")
        ->check(CLI::IsMember({"text", "image", "multi"}))
        ->capture_default_str();
    add_format(cmd, format);
    detect.add(cmd);
    cluster.add(cmd);
    ground.add(cmd);
    cmd->callback([&] {
      run = [&] {
        const auto coref = detect.coref_path();
        cluster.finalize();
        if (ground.method == "embed" && embeddings_path.empty()) {
          usage_error("--method embed needs --embeddings");
        }
        Story story = load_story(story_path);
        cg_lexicon* lex = nullptr;
        check(cg_lexicon_load(detect.lexicon.c_str(), detect.group_words.c_str(), &lex));
        Lexicon lexicon(lex);
        Embeddings emb;
        if (!embeddings_path.empty()) emb = load_embeddings(embeddings_path);

        Pred pred = start_prediction(story.get(), "");
        check(cg_detect_text(story.get(), lexicon.get(), coref ? coref->c_str() : nullptr,
                             pred.get()));
        if (emb) check(cg_cluster(story.get(), emb.get(), &cluster.config, pred.get()));
        const cg_ground_config gcfg = ground.config();
        check(cg_ground(story.get(), emb.get(), &gcfg, pred.get()));
        check(cg_rank(parse_modality(modality), pred.get()));
        emit_prediction(pred.get(), out_path);

        if (report_path.empty()) return;
        cg_report* r = nullptr;
        if (cg_story_has_gold(story.get())) {
          cg_corpus* c = nullptr;
          check(cg_corpus_create(&c));
          Corpus gold(c);
          check(cg_corpus_add(gold.get(), story.get()));
          cg_eval_config ecfg;
          cg_eval_config_init(&ecfg);
          const cg_prediction* one = pred.get();
          check(cg_evaluate(&one, 1, gold.get(), &ecfg, &r));
        } else {
          check(cg_summary(pred.get(), &r));
        }
        emit_report(Report(r).get(), format, report_path);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run) run();
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return 0;
}
