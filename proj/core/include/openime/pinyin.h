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

// Pinyin syllables, the character-to-pinyin dictionary, MIU extraction and
// construction of the pinyin-character parallel corpus.

#ifndef OPENIME_PINYIN_H_
#define OPENIME_PINYIN_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "openime/trie.h"
#include "openime/utf8.h"

namespace openime {

/// Toneless pinyin syllables, lowercase a-z.
using SyllableSeq = std::vector<std::string>;
/// A run of CJK ideographs.
using HanziSeq = std::u32string;

std::string JoinSyllables(const SyllableSeq& syllables, char sep = '\'');
SyllableSeq SplitSyllables(std::string_view text, char sep = '\'');
std::size_t LetterCount(const SyllableSeq& syllables);

/// The legal syllable inventory.
class SyllableInventory {
 public:
  SyllableInventory() = default;

  /// One syllable per line; blank lines are ignored. Throws DataError naming
  /// the offending line for anything that is not [a-z]{1,6}.
  static SyllableInventory Load(const std::string& path);
  static SyllableInventory Parse(std::istream& in, const std::string& source);
  static SyllableInventory FromList(const std::vector<std::string>& syllables);

  bool Contains(std::string_view syllable) const;
  std::size_t size() const { return syllables_.size(); }
  const std::set<std::string, std::less<>>& syllables() const { return syllables_; }

  /// Splits raw letters into syllables by greedy longest match. Apostrophes
  /// force a boundary. Throws InputError carrying the byte offset where no
  /// syllable starts.
  SyllableSeq Segment(std::string_view letters) const;

 private:
  std::set<std::string, std::less<>> syllables_;
  std::size_t max_length_ = 0;
};

/// character -> pronunciations, most frequent first.
class CharPinyinDict {
 public:
  CharPinyinDict() = default;

  /// TSV `<character>\t<syllable>[ <syllable>...]`. When `inventory` is
  /// given every syllable must belong to it.
  static CharPinyinDict Load(const std::string& path,
                             const SyllableInventory* inventory = nullptr);
  static CharPinyinDict Parse(std::istream& in, const std::string& source,
                              const SyllableInventory* inventory = nullptr);

  void Add(char32_t ch, SyllableSeq pronunciations);

  /// nullptr when the character is unknown.
  const SyllableSeq* Pronunciations(char32_t ch) const;
  /// Characters that list `syllable` among their pronunciations, in
  /// dictionary order.
  const std::vector<char32_t>& CharsFor(std::string_view syllable) const;

  std::size_t size() const { return order_.size(); }
  const std::vector<char32_t>& chars() const { return order_; }

 private:
  std::unordered_map<char32_t, SyllableSeq> map_;
  std::vector<char32_t> order_;
  std::unordered_map<std::string, std::vector<char32_t>> reverse_;
};

/// One syllable per CJK character (first-listed pronunciation); other
/// characters are skipped. Throws InputError with the code point offset of
/// the first character missing from `dict`.
SyllableSeq AnnotatePinyin(std::u32string_view line, const CharPinyinDict& dict,
                           CjkRange range = {});
SyllableSeq AnnotatePinyin(std::string_view utf8_line, const CharPinyinDict& dict,
                           CjkRange range = {});

/// A maximal run of CJK characters. Offsets are code point positions in the
/// source line, [begin, end).
struct Miu {
  HanziSeq chars;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<Miu> SplitMius(std::u32string_view line, CjkRange range = {});
std::vector<Miu> SplitMius(std::string_view utf8_line, CjkRange range = {});

/// Aligned pinyin and hanzi words sharing one segmentation.
struct ParallelSentence {
  std::vector<SyllableSeq> pinyin_words;
  std::vector<HanziSeq> hanzi_words;

  SyllableSeq Syllables() const;
  HanziSeq Hanzi() const;
  /// Throws ContractError when the alignment invariant does not hold.
  void Validate() const;
  bool operator==(const ParallelSentence&) const = default;
};

/// `<pinyin words joined by space, syllables by '>\t<hanzi words joined by space>`
std::string FormatParallel(const ParallelSentence& sentence);
ParallelSentence ParseParallel(std::string_view line);
std::vector<ParallelSentence> LoadParallelCorpus(const std::string& path);
void SaveParallelCorpus(const std::vector<ParallelSentence>& corpus,
                        const std::string& path);

struct CorpusOptions {
  std::size_t max_words = 60;
  CjkRange cjk;
};

struct CorpusStats {
  std::size_t lines = 0;
  std::size_t sentences = 0;
  std::size_t skipped = 0;
  std::size_t words = 0;
  std::size_t mius = 0;
};

/// Annotates and segments every line of a hanzi corpus. Each MIU is
/// segmented by maximum matching against `segmenter`; pinyin words follow
/// the same boundaries. Lines that fail annotation are skipped with a
/// warning. Sentences longer than `max_words` are split at MIU boundaries.
void BuildParallelCorpus(std::istream& corpus, const CharPinyinDict& dict,
                         const Trie<char32_t>& segmenter,
                         const CorpusOptions& options, CorpusStats* stats,
                         const std::function<void(ParallelSentence)>& sink);
std::vector<ParallelSentence> BuildParallelCorpus(
    std::istream& corpus, const CharPinyinDict& dict,
    const Trie<char32_t>& segmenter, const CorpusOptions& options = {},
    CorpusStats* stats = nullptr);

/// Reads a UTF-8 text file line by line, stripping a trailing '\r'.
std::vector<std::string> ReadLines(const std::string& path);

}  // namespace openime

#endif  // OPENIME_PINYIN_H_
