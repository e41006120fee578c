// Copyright 2026 The OpenIME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// openime: corpus preparation, training, evaluation, experiments, serving.
//
// Settings resolve as flags > --config JSON > --profile defaults.
// Exit codes: 0 ok, 2 usage, 3 data, 4 runtime or numeric.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <memory>
#include <string>
#include <vector>

#include "openime/checkpoint.h"
#include "openime/engine.h"
#include "openime/error.h"
#include "openime/experiments.h"
#include "openime/metrics.h"
#include "openime/trainer.h"
#include "openime/utf8.h"
#include "openime/vocab.h"

#ifdef OPENIME_WITH_SERVICE
#include <csignal>

#include "openime/service.h"
#endif

namespace {

using nlohmann::json;
using namespace openime;

enum ExitCode { kOk = 0, kUsage = 2, kData = 3, kRuntime = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  Profile profile = PaperProfile();
  std::string profile_name = "paper";
  std::uint64_t seed = 1;

  std::string syllables_path, dict_path, lexicon_path;
  std::string model_checkpoint, vocab_path;

  int port = 8601;
  bool serve_ui = false;
  std::string static_dir;
  std::string host = "127.0.0.1";
};

// Every setting has one JSON key; subcommands expose the ones they use as
// flags. Flags are parsed into holders and copied over after the config
// file has been applied.
class Registry {
 public:
  explicit Registry(Settings& s) : s_(s) {
    auto& m = s.profile.model;
    auto& t = s.profile.train;
    auto& o = s.profile.online;
    Key("syllables_path", &s.syllables_path, "--syllables", "Syllable inventory, one per line");
    Key("dict_path", &s.dict_path, "--dict", "Character pinyin TSV");
    Key("lexicon_path", &s.lexicon_path, "--lexicon", "Word list used for segmentation");
    Key("model_checkpoint", &s.model_checkpoint, "--checkpoint", "Model checkpoint");
    Key("vocab_path", &s.vocab_path, "--vocab", "Vocabulary TSV");
    Key("layers", &m.layers, "--layers", "LSTM layers");
    Key("hidden", &m.hidden, "--hidden", "LSTM width");
    Key("ED", &m.embed, "--ed", "Embedding width");
    Key("char_hidden", &m.char_hidden, "--char-hidden", "Composer GRU width");
    Key("dropout", &m.dropout, "--dropout", "Dropout rate");
    Key("filter_ratio", &m.filter_ratio, "--filter-ratio", "Share of words with a word-table row");
    Key("common_words", &m.common_words, "--common-words", "Always-available target words");
    Key("init_range", &m.init_range, "--init-range", "Uniform init half-width");
    Key("lr", &t.learning_rate, "--lr", "Initial learning rate");
    Key("lr_halve_after", &t.halve_after, "--lr-halve-after", "Halve the rate after this epoch");
    Key("epochs", &t.epochs, "--epochs", "Training epochs");
    Key("batch", &t.batch, "--batch", "Minibatch size");
    Key("clip_norm", &t.clip_norm, "--clip-norm", "Gradient norm clip");
    Key("beam", &o.decode.beam, "--beam", "Beam width");
    Key("K", &o.decode.top_k, "--top-k", "Candidates returned");
    Key("train_every", &o.train_every, "--train-every", "Online training period in turns");
    Key("online_lr", &o.learning_rate, "--online-lr", "Online learning rate");
    Key("online_epochs", &o.online_epochs, "--online-epochs", "Passes per online flush");
    Key("freeze_encoder", &o.freeze_encoder, "--freeze-encoder", "Keep encoder fixed online");
    Key("port", &s.port, "--port", "Listen port");
    Key("host", &s.host, "--host", "Listen address");
    Key("serve_ui", &s.serve_ui, "--serve-ui", "Serve static files under /");
    Key("static_dir", &s.static_dir, "--static-dir", "UI bundle directory");
  }

  // Adds --config, --profile, --seed and the named keys as flags.
  void Expose(CLI::App* app, const std::vector<const char*>& keys) {
    app->add_option("--config", config_path_, "JSON settings file");
    profile_flags_.push_back(Bind(app, "--profile", &s_.profile_name, "desk or paper"));
    seed_flags_.push_back(Bind(app, "--seed", &s_.seed, "Random seed"));
    for (const char* k : keys) {
      auto it = keys_.find(k);
      if (it == keys_.end()) throw std::logic_error(std::string("no key ") + k);
      it->second.expose(app);
    }
  }

  // Called after parsing.
  void Resolve() {
    json config = json::object();
    if (!config_path_.empty()) {
      std::ifstream in(config_path_);
      if (!in) throw UsageError("cannot open config " + config_path_);
      try {
        config = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError(config_path_ + ": " + e.what());
      }
      if (!config.is_object()) throw UsageError(config_path_ + ": expected a JSON object");
    }
    if (!ApplyFlags(profile_flags_) && config.contains("profile"))
      s_.profile_name = Get<std::string>(config["profile"], "profile");
    try {
      s_.profile = ProfileByName(s_.profile_name);
    } catch (const ContractError& e) {
      throw UsageError(e.what());
    }
    if (config.contains("seed")) s_.seed = Get<std::uint64_t>(config["seed"], "seed");
    for (auto& [key, value] : config.items()) {
      if (key == "profile" || key == "seed") continue;
      auto it = keys_.find(key);
      if (it == keys_.end()) throw UsageError(config_path_ + ": unknown key '" + key + "'");
      it->second.from_json(value);
    }
    ApplyFlags(seed_flags_);
    ApplyFlags(flag_appliers_);
    s_.profile.model.seed = s_.seed;
    s_.profile.train.seed = s_.seed;
    s_.profile.online.seed = s_.seed;
  }

 private:
  struct Entry {
    std::function<void(const json&)> from_json;
    std::function<void(CLI::App*)> expose;
  };

  template <class T>
  static T Get(const json& j, const std::string& key) {
    bool ok;
    if constexpr (std::is_same_v<T, bool>) ok = j.is_boolean();
    else if constexpr (std::is_unsigned_v<T>) ok = j.is_number_unsigned();
    else if constexpr (std::is_integral_v<T>) ok = j.is_number_integer();
    else if constexpr (std::is_floating_point_v<T>) ok = j.is_number();
    else ok = j.is_string();
    if (!ok) throw UsageError("config key '" + key + "' has the wrong type");
    return j.get<T>();
  }

  // Returns true when the flag was given.
  using Applier = std::function<bool()>;

  static bool ApplyFlags(const std::vector<Applier>& appliers) {
    bool any = false;
    for (const auto& apply : appliers) any = apply() || any;
    return any;
  }

  template <class T>
  Applier Bind(CLI::App* app, const std::string& flag, T* target, const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt;
    if constexpr (std::is_same_v<T, bool>) opt = app->add_flag(flag, *holder, help);
    else opt = app->add_option(flag, *holder, help);
    return [opt, holder, target] {
      if (opt->count() == 0) return false;
      *target = *holder;
      return true;
    };
  }

  template <class T>
  void Key(const std::string& key, T* target, const std::string& flag, const std::string& help) {
    keys_[key] = Entry{
        [key, target](const json& j) { *target = Get<T>(j, key); },
        [this, flag, target, help](CLI::App* app) {
          flag_appliers_.push_back(Bind(app, flag, target, help));
        }};
  }

  Settings& s_;
  std::string config_path_;
  std::map<std::string, Entry> keys_;
  // Only the active subcommand's options can have been given.
  std::vector<Applier> flag_appliers_, profile_flags_, seed_flags_;
};

std::string Require(const std::string& value, const char* what) {
  if (value.empty()) throw UsageError(std::string(what) + " is required");
  return value;
}

struct TextData {
  SyllableInventory inventory;
  CharPinyinDict dict;
};

TextData LoadText(const Settings& s) {
  TextData d;
  d.inventory = SyllableInventory::Load(Require(s.syllables_path, "--syllables"));
  d.dict = CharPinyinDict::Load(Require(s.dict_path, "--dict"), &d.inventory);
  return d;
}

std::string VocabFor(const Settings& s) {
  return s.vocab_path.empty() ? VocabPathFor(s.model_checkpoint) : s.vocab_path;
}

void PrintEvaluation(const Evaluation& e, const std::string& label) {
  std::cout << fmt::format("{:<16}{:>8}{:>8}{:>8}{:>8}{:>8}\n", "config", "top1", "top5", "top10",
                           "kyss", "items");
  std::cout << fmt::format("{:<16}{:>8.4f}{:>8.4f}{:>8.4f}{:>8.4f}{:>8}\n", label, e.top1, e.top5,
                           e.top10, e.kyss, e.items.size());
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

// --- subcommands ---

struct PrepareArgs {
  std::string corpus, out_parallel, out_vocab;
  std::size_t max_words = 60;
};

int Prepare(const Settings& s, const PrepareArgs& a) {
  TextData d = LoadText(s);
  auto lexicon = ReadLines(Require(s.lexicon_path, "--lexicon"));
  Vocabulary segmenter = VocabularyFromLexicon(lexicon, d.dict);
  std::ifstream in(a.corpus);
  if (!in) throw DataError("cannot open " + a.corpus);
  CorpusStats stats;
  CorpusOptions options;
  options.max_words = a.max_words;
  auto corpus = BuildParallelCorpus(in, d.dict, segmenter.hanzi_trie(), options, &stats);
  Vocabulary vocab = BuildInitialVocabulary(corpus, lexicon, d.dict);
  SaveParallelCorpus(corpus, a.out_parallel);
  SaveVocabulary(vocab, a.out_vocab);
  spdlog::info("prepare: {} lines, {} skipped, {} sentences -> {}, {} vocabulary entries -> {}",
               stats.lines, stats.skipped, corpus.size(), a.out_parallel, vocab.size(),
               a.out_vocab);
  return kOk;
}

struct TrainArgs {
  std::string train, out, dev, log, word_vectors;
  double stop_at = 0;
  std::size_t eval_every = 5;
};

int TrainCmd(const Settings& s, const TrainArgs& a) {
  TextData d = LoadText(s);
  auto corpus = LoadParallelCorpus(a.train);
  Vocabulary vocab = LoadVocabulary(Require(s.vocab_path, "--vocab"));
  P2CModel model(s.profile.model, d.inventory, d.dict, vocab);
  if (!a.word_vectors.empty())
    spdlog::info("word vectors: {} rows seeded", LoadWordVectors(model, a.word_vectors));
  spdlog::info("train: {} sentences, |V| {}, {} parameters, profile {}", corpus.size(),
               vocab.size(), model.ParameterCount(), s.profile.name);

  std::vector<EvalItem> dev;
  if (!a.dev.empty()) dev = ItemsFromLines(ReadLines(a.dev), d.dict);
  std::unique_ptr<std::ofstream> log;
  if (!a.log.empty()) {
    log = std::make_unique<std::ofstream>(OpenOut(a.log));
    *log << "epoch,learning_rate,loss,word_loss,seconds,dev_top1\n";
  }
  Train(model, corpus, vocab, d.dict, s.profile.train,
        [&](const EpochLog& e, const P2CModel& m) {
          std::string top1;
          bool go_on = true;
          if (!dev.empty() && a.eval_every > 0 && e.epoch % static_cast<int>(a.eval_every) == 0) {
            double t = Evaluate(m, vocab, d.dict, dev, s.profile.online.decode).top1;
            top1 = fmt::format("{:.4f}", t);
            go_on = a.stop_at <= 0 || t < a.stop_at;
          }
          spdlog::info("epoch {} lr {:.4g} loss {:.4f} word {:.4f} {:.1f}s{}", e.epoch,
                       e.learning_rate, e.loss, e.word_loss, e.seconds,
                       top1.empty() ? "" : " dev top1 " + top1);
          if (log)
            *log << fmt::format("{},{},{},{},{},{}\n", e.epoch, e.learning_rate, e.loss,
                                e.word_loss, e.seconds, top1);
          return go_on;
        });
  SaveModelAndVocab(model, vocab, a.out);
  spdlog::info("wrote {} and {}", a.out, VocabPathFor(a.out));
  return kOk;
}

struct EvalArgs {
  std::string test, out;
  double keep_fraction = 1.0;
};

int EvalCmd(const Settings& s, const EvalArgs& a) {
  TextData d = LoadText(s);
  P2CModel model = LoadCheckpoint(Require(s.model_checkpoint, "--checkpoint"));
  Vocabulary vocab = LoadVocabulary(VocabFor(s));
  auto items = ItemsFromLines(ReadLines(a.test), d.dict);
  DecodeOptions options = s.profile.online.decode;
  options.keep_fraction = a.keep_fraction;
  KyssConfig kyss;
  kyss.max_candidates = options.top_k;
  Evaluation e = Evaluate(model, vocab, d.dict, std::move(items), options, kyss);
  const std::string label = std::filesystem::path(s.model_checkpoint).stem().string();
  PrintEvaluation(e, label);
  if (!a.out.empty()) {
    auto out = OpenOut(a.out);
    WriteMetricsCsv(out, EvaluationRows(e, label));
  }
  return kOk;
}

std::vector<ParallelSentence> RawToParallel(const std::string& path, const CharPinyinDict& dict,
                                            const Vocabulary& segmenter) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return BuildParallelCorpus(in, dict, segmenter.hanzi_trie());
}

struct InterlaceArgs {
  std::string domain_a, domain_b, out_dir;
  std::size_t segment = 12, group = 4;
};

int InterlaceCmd(const Settings& s, const InterlaceArgs& a) {
  TextData d = LoadText(s);
  P2CModel model = LoadCheckpoint(Require(s.model_checkpoint, "--checkpoint"));
  Vocabulary vocab = LoadVocabulary(VocabFor(s));
  Vocabulary segmenter = s.lexicon_path.empty()
                             ? vocab
                             : VocabularyFromLexicon(ReadLines(s.lexicon_path), d.dict);
  auto pa = RawToParallel(a.domain_a, d.dict, segmenter);
  auto pb = RawToParallel(a.domain_b, d.dict, segmenter);
  auto segments = InterlaceSegments(pa, "A", pb, "B", a.segment);
  InterlacedRun run =
      InterlacedEval(model, vocab, d.inventory, d.dict, s.profile.online, segments, a.group);
  std::cout << fmt::format("{:>5} {:>7} {:>8} {:>8} {:>8}\n", "group", "segment", "online",
                           "frozen", "|V|");
  for (std::size_t i = 0; i < run.online.size(); ++i)
    std::cout << fmt::format("{:>5} {:>7} {:>8.3f} {:>8.3f} {:>8}\n", i,
                             run.online[i].segment_label, run.online[i].top1, run.frozen[i].top1,
                             run.online[i].vocab_size);
  std::cout << fmt::format("post-switch advantage {:.4f}\n", PostSwitchAdvantage(run));
  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    auto on = OpenOut(a.out_dir + "/online.csv");
    WriteInterlacedCsv(on, run.online);
    auto fr = OpenOut(a.out_dir + "/frozen.csv");
    WriteInterlacedCsv(fr, run.frozen);
  }
  return kOk;
}

struct BenchArgs {
  std::string test, out;
  std::vector<double> fractions{1.0, 0.889, 0.75, 0.5};
  std::size_t reps = 5;
};

int BenchCmd(const Settings& s, const BenchArgs& a) {
  TextData d = LoadText(s);
  P2CModel model = LoadCheckpoint(Require(s.model_checkpoint, "--checkpoint"));
  Vocabulary vocab = LoadVocabulary(VocabFor(s));
  auto items = ItemsFromLines(ReadLines(a.test), d.dict);
  auto rows = PruneBench(model, vocab, d.dict, items, a.fractions, a.reps, s.profile.online.decode);
  WritePruneCsv(std::cout, rows);
  if (!a.out.empty()) {
    auto out = OpenOut(a.out);
    WritePruneCsv(out, rows);
  }
  return kOk;
}

struct SweepArgs {
  std::string train, test, out;
  std::vector<double> ratios{0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
};

int SweepCmd(const Settings& s, const SweepArgs& a) {
  TextData d = LoadText(s);
  auto corpus = LoadParallelCorpus(a.train);
  Vocabulary vocab = LoadVocabulary(Require(s.vocab_path, "--vocab"));
  auto items = ItemsFromLines(ReadLines(a.test), d.dict);
  std::unique_ptr<std::ofstream> out;
  if (!a.out.empty()) {
    out = std::make_unique<std::ofstream>(OpenOut(a.out));
    *out << "ratio,top1,top5\n";
  }
  FilterRatioSweep(corpus, vocab, d.inventory, d.dict, items, s.profile, a.ratios,
                   [&](const SweepRow& r) {
                     std::cout << fmt::format("ratio {:.3f} top1 {:.4f} top5 {:.4f}\n", r.ratio,
                                              r.top1, r.top5);
                     if (out) *out << fmt::format("{},{},{}\n", r.ratio, r.top1, r.top5) << std::flush;
                   });
  return kOk;
}

struct EngineArgs {
  std::string state_dir, turn_log;
};

std::unique_ptr<OnlineEngine> MakeEngine(const Settings& s, const EngineArgs& a) {
  TextData d = LoadText(s);
  if (!a.state_dir.empty() && std::filesystem::exists(a.state_dir + "/state.json")) {
    spdlog::info("resuming engine state from {}", a.state_dir);
    return OnlineEngine::Load(a.state_dir, std::move(d.inventory), std::move(d.dict),
                              s.profile.online);
  }
  return std::make_unique<OnlineEngine>(
      LoadCheckpoint(Require(s.model_checkpoint, "--checkpoint")), LoadVocabulary(VocabFor(s)),
      std::move(d.inventory), std::move(d.dict), s.profile.online);
}

constexpr std::size_t kPage = 5;

void ShowPage(const PendingTurn& turn, std::size_t page) {
  const std::size_t begin = page * kPage;
  const std::size_t end = std::min(turn.shown.size(), begin + kPage);
  std::cout << fmt::format("[{}] page {}/{}:", turn.turn_id, page + 1,
                           (turn.shown.size() + kPage - 1) / kPage);
  for (std::size_t i = begin; i < end; ++i)
    std::cout << fmt::format("  {}.{}", i - begin + 1, U32ToUtf8(turn.shown[i].text));
  std::cout << '\n';
}

int ReplCmd(const Settings& s, const EngineArgs& a) {
  auto engine = MakeEngine(s, a);
  std::unique_ptr<std::ofstream> log;
  if (!a.turn_log.empty()) {
    log = std::make_unique<std::ofstream>(OpenOut(a.turn_log));
    WriteTurnLogHeader(*log);
  }
  std::cout << "pinyin converts; 1-5 selects; n/p pages; =text types a choice; :stats; :q\n";
  std::optional<PendingTurn> turn;
  std::size_t page = 0;
  auto submit = [&](const HanziSeq& text) {
    SessionTurn done = engine->Submit(turn->turn_id, text);
    std::string added;
    for (const auto& e : done.update.added) added += " " + U32ToUtf8(e.hanzi);
    std::cout << fmt::format("committed {} |V| {}{}{}\n", U32ToUtf8(text), done.vocab_size,
                             added.empty() ? "" : " added:" + added,
                             done.flushed ? " (trained)" : "");
    if (log) WriteTurnLogRow(*log, done);
    turn.reset();
  };
  for (std::string line; std::cout << "> " << std::flush, std::getline(std::cin, line);) {
    if (line == ":q") break;
    if (line.empty()) continue;
    try {
      if (line == ":stats") {
        EngineStats st = engine->stats();
        std::cout << fmt::format("|V| {} turns {} flushes {} buffered {}\n", st.vocab_size,
                                 st.turns, st.flushes, st.buffered);
      } else if (turn && line == "n") {
        if ((page + 1) * kPage < turn->shown.size()) ++page;
        ShowPage(*turn, page);
      } else if (turn && line == "p") {
        if (page > 0) --page;
        ShowPage(*turn, page);
      } else if (turn && line.size() == 1 && line[0] >= '1' && line[0] <= '5') {
        std::size_t idx = page * kPage + static_cast<std::size_t>(line[0] - '1');
        if (idx >= turn->shown.size()) {
          std::cout << "no such candidate\n";
        } else {
          submit(turn->shown[idx].text);
        }
      } else if (turn && line[0] == '=') {
        submit(Utf8ToU32(line.substr(1)));
      } else {
        turn = engine->Convert(line);
        page = 0;
        ShowPage(*turn, page);
      }
    } catch (const InputError& e) {
      std::cout << fmt::format("cannot segment at {}: {}\n", e.offset(), e.what());
    } catch (const ContractError& e) {
      std::cout << e.what() << '\n';
    }
  }
  if (!a.state_dir.empty()) engine->Save(a.state_dir);
  return kOk;
}

#ifdef OPENIME_WITH_SERVICE
int ServeCmd(const Settings& s, const EngineArgs& a) {
  auto engine = MakeEngine(s, a);
  ServiceConfig config;
  config.host = s.host;
  config.port = s.port;
  config.serve_ui = s.serve_ui;
  config.static_dir = s.static_dir;
  ImeService service(*engine, config);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  try {
    service.Start();
  } catch (const std::runtime_error& e) {
    spdlog::error("{}", e.what());
    return kRuntime;
  }
  int sig = 0;
  sigwait(&signals, &sig);
  spdlog::info("signal {}, shutting down", sig);
  service.Stop();
  if (!a.state_dir.empty()) engine->Save(a.state_dir);
  return kOk;
}
#endif

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("openime"));
  spdlog::set_pattern("[%H:%M:%S] %^%l%$ %v");

  CLI::App app{"Neural pinyin-to-character input method"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only log warnings and errors");

  Settings settings;
  Registry reg(settings);
  std::function<int()> run;

  PrepareArgs prep;
  auto* c = app.add_subcommand("prepare", "Hanzi corpus to parallel TSV and initial vocabulary");
  reg.Expose(c, {"syllables_path", "dict_path", "lexicon_path"});
  c->add_option("--corpus", prep.corpus, "Raw hanzi text, one sentence per line")->required();
  c->add_option("--out-parallel", prep.out_parallel, "Parallel TSV to write")->required();
  c->add_option("--out-vocab", prep.out_vocab, "Vocabulary TSV to write")->required();
  c->add_option("--max-words", prep.max_words, "Split sentences longer than this");
  c->callback([&] { run = [&] { return Prepare(settings, prep); }; });

  const std::vector<const char*> model_keys = {
      "syllables_path", "dict_path", "vocab_path", "layers", "hidden", "ED", "char_hidden",
      "dropout", "filter_ratio", "common_words", "init_range", "lr", "lr_halve_after", "epochs",
      "batch", "clip_norm", "beam", "K"};

  TrainArgs train;
  c = app.add_subcommand("train", "Train a model on a parallel corpus");
  reg.Expose(c, model_keys);
  c->add_option("--train", train.train, "Parallel TSV")->required();
  c->add_option("--out", train.out, "Checkpoint to write")->required();
  c->add_option("--dev", train.dev, "Raw hanzi lines evaluated during training");
  c->add_option("--eval-every", train.eval_every, "Epochs between dev evaluations");
  c->add_option("--stop-at", train.stop_at, "Stop once dev top-1 reaches this");
  c->add_option("--log", train.log, "Epoch CSV");
  c->add_option("--word-vectors", train.word_vectors, "Text vectors seeding target word rows");
  c->callback([&] { run = [&] { return TrainCmd(settings, train); }; });

  const std::vector<const char*> decode_keys = {
      "syllables_path", "dict_path", "model_checkpoint", "vocab_path", "beam", "K"};

  EvalArgs ev;
  c = app.add_subcommand("eval", "Top-K accuracy and KySS on raw hanzi lines");
  reg.Expose(c, decode_keys);
  c->add_option("--test", ev.test, "Raw hanzi lines")->required();
  c->add_option("--out", ev.out, "metric,config,value CSV");
  c->add_option("--keep-fraction", ev.keep_fraction, "Target vocabulary share kept");
  c->callback([&] { run = [&] { return EvalCmd(settings, ev); }; });

  const std::vector<const char*> online_keys = {
      "syllables_path", "dict_path", "lexicon_path", "model_checkpoint", "vocab_path", "beam",
      "K", "train_every", "online_lr", "online_epochs", "freeze_encoder"};

  InterlaceArgs il;
  c = app.add_subcommand("interlace", "Online versus frozen engine on an A/B interlaced stream");
  reg.Expose(c, online_keys);
  c->add_option("--domain-a", il.domain_a, "Raw hanzi lines, first domain")->required();
  c->add_option("--domain-b", il.domain_b, "Raw hanzi lines, second domain")->required();
  c->add_option("--segment-size", il.segment, "Sentences per segment");
  c->add_option("--group-size", il.group, "Sentences per accuracy point");
  c->add_option("--out-dir", il.out_dir, "Writes online.csv and frozen.csv");
  c->callback([&] { run = [&] { return InterlaceCmd(settings, il); }; });

  BenchArgs bench;
  c = app.add_subcommand("bench", "Decode time and accuracy by kept target-vocabulary share");
  reg.Expose(c, decode_keys);
  c->add_option("--test", bench.test, "Raw hanzi lines")->required();
  c->add_option("--fractions", bench.fractions, "Kept fractions")->delimiter(',');
  c->add_option("--reps", bench.reps, "Timing repetitions (median)");
  c->add_option("--out", bench.out, "CSV");
  c->callback([&] { run = [&] { return BenchCmd(settings, bench); }; });

  SweepArgs sweep;
  c = app.add_subcommand("sweep-filter", "Train and evaluate one model per filter ratio");
  reg.Expose(c, model_keys);
  c->add_option("--train", sweep.train, "Parallel TSV")->required();
  c->add_option("--test", sweep.test, "Raw hanzi lines")->required();
  c->add_option("--ratios", sweep.ratios, "Filter ratios")->delimiter(',');
  c->add_option("--out", sweep.out, "CSV");
  c->callback([&] { run = [&] { return SweepCmd(settings, sweep); }; });

  EngineArgs eng;
#ifdef OPENIME_WITH_SERVICE
  c = app.add_subcommand("serve", "HTTP API over an online engine");
  std::vector<const char*> serve_keys = online_keys;
  serve_keys.insert(serve_keys.end(), {"port", "host", "serve_ui", "static_dir"});
  reg.Expose(c, serve_keys);
  c->add_option("--state-dir", eng.state_dir, "Resume from and save engine state here");
  c->callback([&] { run = [&] { return ServeCmd(settings, eng); }; });
#endif

  c = app.add_subcommand("repl", "Line-mode convert and select loop");
  reg.Expose(c, online_keys);
  c->add_option("--state-dir", eng.state_dir, "Resume from and save engine state here");
  c->add_option("--turn-log", eng.turn_log, "Turn CSV");
  c->callback([&] { run = [&] { return ReplCmd(settings, eng); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (quiet) spdlog::set_level(spdlog::level::warn);

  try {
    reg.Resolve();
    return run();
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kUsage;
  } catch (const DataError& e) {
    spdlog::error("{}", e.what());
    return kData;
  } catch (const InputError& e) {
    spdlog::error("{} (offset {})", e.what(), e.offset());
    return kData;
  } catch (const NumericError& e) {
    spdlog::error("{}", e.what());
    return kRuntime;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntime;
  }
}
