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

// The adaptive pinyin-hanzi bilingual vocabulary.

#ifndef OPENIME_VOCAB_H_
#define OPENIME_VOCAB_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "openime/pinyin.h"
#include "openime/trie.h"

namespace openime {

struct BilingualEntry {
  SyllableSeq pinyin;
  HanziSeq hanzi;
  std::uint64_t freq = 0;
  std::uint64_t born = 0;  // turn index that created the entry, 0 if initial

  bool operator==(const BilingualEntry&) const = default;
};

/// A candidate returned by prefix lookup. Fallback candidates come from the
/// character dictionary, not from the vocabulary.
struct PrefixCandidate {
  BilingualEntry entry;
  bool fallback = false;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Adds an entry unless (pinyin, hanzi) is already present. Returns false
  /// for duplicates. Throws ContractError if lengths differ or are zero.
  bool Add(BilingualEntry entry);

  const BilingualEntry* Find(const SyllableSeq& pinyin, std::u32string_view hanzi) const;
  bool ContainsHanzi(std::u32string_view hanzi) const;
  /// Sum of frequencies over entries spelling `hanzi`.
  std::uint64_t HanziFrequency(std::u32string_view hanzi) const;
  void Increment(const SyllableSeq& pinyin, std::u32string_view hanzi, std::uint64_t by = 1);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<BilingualEntry>& entries() const { return entries_; }
  const BilingualEntry& entry(std::size_t id) const { return entries_[id]; }

  /// Entries whose pinyin is a prefix of `remaining`, longest first, then by
  /// frequency descending, ties by hanzi.
  std::vector<const BilingualEntry*> PrefixMatches(std::span<const std::string> remaining) const;
  /// Entry ids at the pinyin trie node for exactly `pinyin`, frequency order.
  std::vector<const BilingualEntry*> Homophones(const SyllableSeq& pinyin) const;

  /// Distinct hanzi words ordered by total frequency descending, ties by
  /// hanzi. `n == 0` returns all of them.
  std::vector<HanziSeq> MostFrequentWords(std::size_t n = 0) const;
  /// Distinct pinyin words ordered the same way.
  std::vector<SyllableSeq> MostFrequentPinyin(std::size_t n = 0) const;

  const Trie<std::string>& pinyin_trie() const { return pinyin_trie_; }
  const Trie<char32_t>& hanzi_trie() const { return hanzi_trie_; }

  /// Drops the lowest (freq, born) entries until size() <= max_size.
  /// Returns the number removed.
  std::size_t EvictTo(std::size_t max_size);

  /// Verifies tries, frequency index and entry set agree. For tests.
  bool CheckConsistency() const;

  /// Order-insensitive comparison of entry sets.
  bool operator==(const Vocabulary& other) const;

 private:
  void IndexEntry(std::size_t id);
  void SortCandidates(int pinyin_node);
  void Rebuild();

  std::vector<BilingualEntry> entries_;
  Trie<std::string> pinyin_trie_;
  Trie<char32_t> hanzi_trie_;
  std::unordered_map<std::u32string, std::uint64_t> hanzi_freq_;
  // (-freq, hanzi) over distinct hanzi words.
  std::set<std::pair<std::int64_t, std::u32string>> by_freq_;
};

/// Maximum-matching segmentation of hanzi or syllables over a trie.
std::vector<HanziSeq> MaxMatchSegment(std::u32string_view text, const Trie<char32_t>& trie);
std::vector<SyllableSeq> MaxMatchSegment(const SyllableSeq& syllables,
                                         const Trie<std::string>& trie);

/// Aligned segmentation of (pinyin, hanzi): at each position takes the
/// longest n such that (pinyin[i:i+n], hanzi[i:i+n]) is a vocabulary entry,
/// single units otherwise.
ParallelSentence SegmentAligned(const Vocabulary& vocab, const SyllableSeq& pinyin,
                                std::u32string_view hanzi);

/// Prefix-match lookup D(x) followed by single-character dictionary fallback
/// for remaining[0] (characters not already returned as one-syllable entries).
std::vector<PrefixCandidate> CandidatesForPrefix(const Vocabulary& vocab,
                                                 const CharPinyinDict& dict,
                                                 std::span<const std::string> remaining);

struct UpdateReport {
  std::vector<BilingualEntry> added;
  std::size_t examined_ngrams = 0;
  std::uint64_t turn = 0;
};

struct UpdateOptions {
  std::size_t max_ngram = 6;
  std::size_t min_ngram = 2;
  std::size_t max_vocab = 0;  // 0 disables eviction
};

/// Online vocabulary update for one turn. `predicted` is the converter's
/// top-1 (Cm), `chosen` the user's selection (Cu); all three sequences must
/// have equal length. Windows of length max_ngram..min_ngram whose first and
/// last characters both differ from the prediction are added as new words,
/// longest first; windows inside an already accepted window are skipped.
/// Frequencies of vocabulary words in the aligned segmentation of the choice
/// are then incremented.
UpdateReport UpdateVocabulary(Vocabulary& vocab, const SyllableSeq& pinyin,
                              std::u32string_view predicted, std::u32string_view chosen,
                              std::uint64_t turn, const UpdateOptions& options = {});

/// TSV rows `<syllables joined by '>\t<hanzi>\t<freq>\t<born_turn>`, sorted
/// by hanzi then pinyin.
void SaveVocabulary(const Vocabulary& vocab, std::ostream& out);
void SaveVocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary LoadVocabulary(std::istream& in, const std::string& source);
Vocabulary LoadVocabulary(const std::string& path);

/// Builds a vocabulary from a hanzi word list, annotating pinyin with the
/// dictionary. Frequencies start at zero.
Vocabulary VocabularyFromLexicon(const std::vector<std::string>& words,
                                 const CharPinyinDict& dict);
/// Counts every word of a parallel corpus.
Vocabulary VocabularyFromCorpus(const std::vector<ParallelSentence>& corpus);
// Corpus counts, plus every lexicon word and every dictionary character
// (first reading) the corpus never used, at frequency 0.
Vocabulary BuildInitialVocabulary(const std::vector<ParallelSentence>& corpus,
                                  const std::vector<std::string>& lexicon,
                                  const CharPinyinDict& dict);

}  // namespace openime

#endif  // OPENIME_VOCAB_H_
