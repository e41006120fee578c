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

#include "openime/checkpoint.h"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "openime/error.h"
#include "openime/utf8.h"

namespace openime {
inline namespace OPENIME_NN_NS {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint payloads assume little-endian");

using nlohmann::json;

json ConfigToJson(const ModelConfig& c) {
  return json{{"layers", c.layers},         {"hidden", c.hidden},
              {"embed", c.embed},           {"char_hidden", c.char_hidden},
              {"dropout", c.dropout},       {"filter_ratio", c.filter_ratio},
              {"common_words", c.common_words}, {"init_range", c.init_range},
              {"seed", c.seed}};
}

ModelConfig ConfigFromJson(const json& j) {
  ModelConfig c;
  c.layers = j.at("layers").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::size_t>();
  c.embed = j.at("embed").get<std::size_t>();
  c.char_hidden = j.at("char_hidden").get<std::size_t>();
  c.dropout = j.at("dropout").get<double>();
  c.filter_ratio = j.at("filter_ratio").get<double>();
  c.common_words = j.at("common_words").get<std::size_t>();
  c.init_range = j.value("init_range", 0.08);
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

void WriteHeader(std::ostream& out, const std::string& name, const Shape& shape) {
  out << name << '\n' << shape.size() << '\n';
  for (std::size_t i = 0; i < shape.size(); ++i) out << (i ? " " : "") << shape[i];
  out << '\n';
}

std::string ReadLine(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": truncated checkpoint");
  return line;
}

Shape ReadShape(std::istream& in, const std::string& source, const std::string& name) {
  const std::string rank_line = ReadLine(in, source);
  const std::string dims_line = ReadLine(in, source);
  std::size_t rank = 0;
  try {
    rank = std::stoul(rank_line);
  } catch (const std::exception&) {
    throw DataError(source + ": bad rank for section " + name);
  }
  Shape shape;
  std::istringstream dims(dims_line);
  std::size_t d;
  while (dims >> d) shape.push_back(d);
  if (shape.size() != rank) throw DataError(source + ": bad dims for section " + name);
  return shape;
}

}  // namespace

std::string ModelConfigJson(const ModelConfig& config) { return ConfigToJson(config).dump(); }

void SaveCheckpoint(const P2CModel& model, std::ostream& out) {
  json meta;
  meta["config"] = ConfigToJson(model.config());
  const ModelKeys& keys = model.keys();
  meta["syllables"] = keys.syllables;
  json chars = json::array();
  for (char32_t c : keys.chars) chars.push_back(U32ToUtf8(c));
  meta["chars"] = chars;
  json pinyin = json::array();
  for (const auto& w : keys.pinyin_words) pinyin.push_back(JoinSyllables(w));
  meta["pinyin_words"] = pinyin;
  json hanzi = json::array();
  for (const auto& w : keys.hanzi_words) hanzi.push_back(U32ToUtf8(std::u32string_view(w)));
  meta["hanzi_words"] = hanzi;
  json names = json::array();
  for (const Parameter* p : model.Parameters()) names.push_back(p->name);
  meta["parameters"] = names;
  const std::string meta_bytes = meta.dump();

  out.write(kCheckpointMagic, 5);
  out.put(static_cast<char>(kCheckpointVersion));
  out.put(static_cast<char>(sizeof(Real)));
  WriteHeader(out, "meta", {meta_bytes.size()});
  out.write(meta_bytes.data(), static_cast<std::streamsize>(meta_bytes.size()));
  for (const Parameter* p : model.Parameters()) {
    WriteHeader(out, p->name, p->value.shape());
    out.write(reinterpret_cast<const char*>(p->value.data().data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(Real)));
  }
  if (!out) throw DataError("checkpoint write failed");
}

void SaveCheckpoint(const P2CModel& model, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(path + ": cannot open for writing");
    SaveCheckpoint(model, out);
    out.flush();
    if (!out) throw DataError(path + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

P2CModel LoadCheckpoint(std::istream& in, const std::string& source) {
  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, kCheckpointMagic, 5) != 0) {
    throw DataError(source + ": not a checkpoint (bad magic)");
  }
  const int version = in.get();
  if (version != kCheckpointVersion) {
    throw DataError(source + ": unsupported checkpoint version " + std::to_string(version));
  }
  const int width = in.get();
  if (width != 4 && width != 8) throw DataError(source + ": bad scalar width");

  if (ReadLine(in, source) != "meta") throw DataError(source + ": missing meta section");
  const Shape meta_shape = ReadShape(in, source, "meta");
  if (meta_shape.size() != 1) throw DataError(source + ": bad meta section");
  std::string meta_bytes(meta_shape[0], '\0');
  if (!in.read(meta_bytes.data(), static_cast<std::streamsize>(meta_bytes.size()))) {
    throw DataError(source + ": truncated checkpoint");
  }
  json meta;
  ModelConfig config;
  ModelKeys keys;
  std::vector<std::string> names;
  try {
    meta = json::parse(meta_bytes);
    config = ConfigFromJson(meta.at("config"));
    keys.syllables = meta.at("syllables").get<std::vector<std::string>>();
    for (const auto& c : meta.at("chars")) {
      const auto u = Utf8ToU32(c.get<std::string>());
      if (u.size() != 1) throw DataError(source + ": bad character key");
      keys.chars.push_back(u[0]);
    }
    for (const auto& w : meta.at("pinyin_words")) keys.pinyin_words.push_back(SplitSyllables(w.get<std::string>()));
    for (const auto& w : meta.at("hanzi_words")) keys.hanzi_words.push_back(Utf8ToU32(w.get<std::string>()));
    names = meta.at("parameters").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw DataError(source + ": bad checkpoint meta: " + e.what());
  }

  P2CModel model(config, std::move(keys));
  auto params = model.Parameters();
  if (params.size() != names.size()) throw DataError(source + ": parameter count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    const std::string name = ReadLine(in, source);
    if (name != p.name || names[i] != p.name) {
      throw DataError(source + ": expected section " + p.name + ", found " + name);
    }
    const Shape shape = ReadShape(in, source, name);
    if (shape != p.value.shape()) {
      throw DataError(source + ": section " + name + " has shape " + ShapeString(shape) +
                      ", expected " + ShapeString(p.value.shape()));
    }
    const std::size_t n = p.value.size();
    if (static_cast<std::size_t>(width) == sizeof(Real)) {
      if (!in.read(reinterpret_cast<char*>(p.value.data().data()),
                   static_cast<std::streamsize>(n * sizeof(Real)))) {
        throw DataError(source + ": truncated checkpoint in section " + name);
      }
    } else if (width == 4) {
      std::vector<float> buf(n);
      if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n * 4))) {
        throw DataError(source + ": truncated checkpoint in section " + name);
      }
      for (std::size_t k = 0; k < n; ++k) p.value[k] = static_cast<Real>(buf[k]);
    } else {
      std::vector<double> buf(n);
      if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n * 8))) {
        throw DataError(source + ": truncated checkpoint in section " + name);
      }
      for (std::size_t k = 0; k < n; ++k) p.value[k] = static_cast<Real>(buf[k]);
    }
    p.grad = Tensor(p.value.shape());
  }
  if (in.peek() != std::char_traits<char>::eof()) throw DataError(source + ": trailing bytes after last section");
  return model;
}

P2CModel LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open checkpoint");
  return LoadCheckpoint(in, path);
}

std::string VocabPathFor(const std::string& checkpoint_path) { return checkpoint_path + ".vocab.tsv"; }

void SaveModelAndVocab(const P2CModel& model, const Vocabulary& vocab, const std::string& path) {
  SaveCheckpoint(model, path);
  SaveVocabulary(vocab, VocabPathFor(path));
}

std::size_t LoadWordVectors(P2CModel& model, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  Tensor& table = model.target_bank.word_table.value;
  const std::size_t dim = table.cols();
  std::size_t replaced = 0;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<double> values;
    for (std::string tok; fields >> tok;) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
    }
    if (lineno == 1 && values.size() == 1) continue;  // word2vec header
    if (values.size() != dim)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                      " values, got " + std::to_string(values.size()));
    const std::int64_t r = model.TargetWordRow(Utf8ToU32(word));
    if (r < 0) continue;
    for (std::size_t j = 0; j < dim; ++j) table.data()[r * dim + j] = static_cast<Real>(values[j]);
    ++replaced;
  }
  return replaced;
}

}  // namespace OPENIME_NN_NS
}  // namespace openime
