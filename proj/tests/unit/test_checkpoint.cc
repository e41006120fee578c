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


#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "openime/checkpoint.h"
#include "openime/error.h"
#include "toy.h"

namespace openime {
namespace {

using testing::H;

P2CModel ToyModel(const testing::Toy& toy, std::uint64_t seed = 5) {
  ModelConfig c;
  c.layers = 2;
  c.hidden = 6;
  c.embed = 5;
  c.char_hidden = 3;
  c.filter_ratio = 0.5;
  c.common_words = 2;
  c.init_range = 0.3;
  c.seed = seed;
  return P2CModel(c, toy.inventory, toy.dict, toy.vocab);
}

std::string Bytes(const P2CModel& m) {
  std::ostringstream out;
  SaveCheckpoint(m, out);
  return out.str();
}

void ExpectSameModel(const P2CModel& a, const P2CModel& b) {
  EXPECT_EQ(a.config(), b.config());
  EXPECT_EQ(a.keys(), b.keys());
  const auto pa = a.Parameters(), pb = b.Parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i]->name, pb[i]->name);
    EXPECT_EQ(pa[i]->value, pb[i]->value) << pa[i]->name;
  }
}

TEST(Checkpoint, RoundTripPreservesParametersAndDecoding) {
  auto toy = testing::MakeToy();
  const P2CModel model = ToyModel(toy);
  std::istringstream in(Bytes(model));
  const P2CModel loaded = LoadCheckpoint(in, "mem");
  ExpectSameModel(model, loaded);

  const SyllableSeq input{"bei", "jing", "huan", "ying", "ni"};
  const auto a = model.Decode(input, toy.vocab, toy.dict);
  const auto b = loaded.Decode(input, toy.vocab, toy.dict);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].text, b[i].text);
    EXPECT_EQ(a[i].score, b[i].score);
  }
  EXPECT_EQ(Bytes(loaded), Bytes(model));
}

TEST(Checkpoint, FileRoundTripAndVocabulary) {
  auto toy = testing::MakeToy();
  const P2CModel model = ToyModel(toy);
  const auto path = (std::filesystem::temp_directory_path() / "openime_ckpt_test.oime").string();
  SaveModelAndVocab(model, toy.vocab, path);
  ExpectSameModel(model, LoadCheckpoint(path));
  const Vocabulary v = LoadVocabulary(VocabPathFor(path));
  EXPECT_EQ(v.size(), toy.vocab.size());
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
  std::filesystem::remove(VocabPathFor(path));
}

TEST(Checkpoint, BadMagicIsDataError) {
  std::istringstream in("NOPE!\x01\x08meta\n");
  try {
    LoadCheckpoint(in, "x.oime");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("x.oime"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("magic"), std::string::npos);
  }
}

TEST(Checkpoint, EveryTruncationIsDataError) {
  auto toy = testing::MakeToy();
  const std::string bytes = Bytes(ToyModel(toy));
  // Cutting anywhere must fail cleanly; step through the file.
  for (std::size_t cut = 0; cut < bytes.size(); cut += 1 + bytes.size() / 300) {
    std::istringstream in(bytes.substr(0, cut));
    EXPECT_THROW(LoadCheckpoint(in, "t"), DataError) << "cut at " << cut;
  }
}

TEST(Checkpoint, UnknownVersionIsDataError) {
  auto toy = testing::MakeToy();
  std::string bytes = Bytes(ToyModel(toy));
  bytes[5] = 99;
  std::istringstream in(bytes);
  EXPECT_THROW(LoadCheckpoint(in, "v"), DataError);
}

// Rewrites a checkpoint with 4-byte payloads, parsing the layout
// independently of the loader.
std::string Narrow(const std::string& wide) {
  std::istringstream in(wide);
  std::string out(wide.substr(0, 7));
  out[6] = 4;
  in.seekg(7);
  auto line = [&] {
    std::string l;
    std::getline(in, l);
    out += l + "\n";
    return l;
  };
  bool meta = true;
  while (in.peek() != EOF) {
    line();
    line();
    std::istringstream dims(line());
    std::size_t n = 1, d;
    while (dims >> d) n *= d;
    if (meta) {
      std::string payload(n, '\0');
      in.read(payload.data(), static_cast<std::streamsize>(n));
      out += payload;
      meta = false;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double x;
      in.read(reinterpret_cast<char*>(&x), 8);
      const float f = static_cast<float>(x);
      out.append(reinterpret_cast<const char*>(&f), 4);
    }
  }
  return out;
}

TEST(Checkpoint, LoadsOtherScalarWidth) {
  static_assert(sizeof(Real) == 8, "this test runs in the double build");
  auto toy = testing::MakeToy();
  const P2CModel model = ToyModel(toy);
  std::istringstream in(Narrow(Bytes(model)));
  const P2CModel loaded = LoadCheckpoint(in, "narrow");
  const auto pa = model.Parameters(), pb = loaded.Parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = 0; j < pa[i]->value.size(); ++j) {
      EXPECT_EQ(pb[i]->value[j], static_cast<double>(static_cast<float>(pa[i]->value[j])));
    }
  }
}

TEST(Checkpoint, ConfigJsonNamesEveryField) {
  const std::string j = ModelConfigJson(ModelConfig{});
  for (const char* key : {"layers", "hidden", "embed", "char_hidden", "dropout", "filter_ratio",
                          "common_words", "init_range", "seed"})
    EXPECT_NE(j.find(std::string("\"") + key + "\""), std::string::npos) << key;
}

class WordVectors : public ::testing::Test {
 protected:
  void Write(const std::string& text) {
    std::ofstream(path_) << text;
  }
  void TearDown() override { std::filesystem::remove(path_); }
  std::string path_ = (std::filesystem::temp_directory_path() / "openime_vectors.txt").string();
};

TEST_F(WordVectors, SeedsKnownRowsOnly) {
  auto toy = testing::MakeToy();
  P2CModel model = ToyModel(toy);
  const std::size_t ed = model.config().embed;
  const std::int64_t row = model.TargetWordRow(H("北京"));
  ASSERT_GE(row, 0);
  Write("2 5\n北京 1 2 3 4 5\n不在 9 9 9 9 9\n");
  EXPECT_EQ(LoadWordVectors(model, path_), 1u);
  const Tensor& t = model.target_bank.word_table.value;
  for (std::size_t j = 0; j < ed; ++j) EXPECT_EQ(t[row * ed + j], static_cast<double>(j + 1));
}

TEST_F(WordVectors, DimensionMismatchNamesLine) {
  auto toy = testing::MakeToy();
  P2CModel model = ToyModel(toy);
  Write("北京 1 2 3 4 5\n你 1 2 3\n");
  try {
    LoadWordVectors(model, path_);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  Write("北京 1 2 x 4 5\n");
  EXPECT_THROW(LoadWordVectors(model, path_), DataError);
}

}  // namespace
}  // namespace openime
