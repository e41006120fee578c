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

#include "openime/vocab.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "openime/error.h"

namespace openime {

namespace {

std::span<const std::string> AsSpan(const SyllableSeq& s) { return {s.data(), s.size()}; }
std::span<const char32_t> AsSpan(std::u32string_view s) { return {s.data(), s.size()}; }

bool CandidateBefore(const BilingualEntry& a, const BilingualEntry& b) {
  if (a.freq != b.freq) return a.freq > b.freq;
  if (a.hanzi != b.hanzi) return a.hanzi < b.hanzi;
  return a.pinyin < b.pinyin;
}

std::uint64_t ParseCount(std::string_view s, const std::string& where) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(where + ": expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

bool Vocabulary::Add(BilingualEntry entry) {
  if (entry.pinyin.empty() || entry.pinyin.size() != entry.hanzi.size()) {
    throw ContractError("vocabulary entry needs one syllable per character");
  }
  if (Find(entry.pinyin, entry.hanzi) != nullptr) return false;
  entries_.push_back(std::move(entry));
  IndexEntry(entries_.size() - 1);
  return true;
}

void Vocabulary::IndexEntry(std::size_t id) {
  const BilingualEntry& e = entries_[id];
  const int pnode = pinyin_trie_.Insert(AsSpan(e.pinyin));
  pinyin_trie_.MutableIds(pnode).push_back(id);
  SortCandidates(pnode);
  hanzi_trie_.Add(AsSpan(e.hanzi), id);

  auto& total = hanzi_freq_[e.hanzi];
  by_freq_.erase({-static_cast<std::int64_t>(total), e.hanzi});
  total += e.freq;
  by_freq_.insert({-static_cast<std::int64_t>(total), e.hanzi});
}

void Vocabulary::SortCandidates(int pinyin_node) {
  auto& ids = pinyin_trie_.MutableIds(pinyin_node);
  std::sort(ids.begin(), ids.end(), [this](std::size_t a, std::size_t b) {
    return CandidateBefore(entries_[a], entries_[b]);
  });
}

const BilingualEntry* Vocabulary::Find(const SyllableSeq& pinyin,
                                       std::u32string_view hanzi) const {
  const int node = pinyin_trie_.Find(AsSpan(pinyin));
  if (node == Trie<std::string>::kNone) return nullptr;
  for (std::size_t id : pinyin_trie_.Ids(node)) {
    if (entries_[id].hanzi == hanzi) return &entries_[id];
  }
  return nullptr;
}

bool Vocabulary::ContainsHanzi(std::u32string_view hanzi) const {
  const int node = hanzi_trie_.Find(AsSpan(hanzi));
  return node != Trie<char32_t>::kNone && hanzi_trie_.IsTerminal(node);
}

std::uint64_t Vocabulary::HanziFrequency(std::u32string_view hanzi) const {
  auto it = hanzi_freq_.find(std::u32string(hanzi));
  return it == hanzi_freq_.end() ? 0 : it->second;
}

void Vocabulary::Increment(const SyllableSeq& pinyin, std::u32string_view hanzi,
                           std::uint64_t by) {
  const int node = pinyin_trie_.Find(AsSpan(pinyin));
  if (node == Trie<std::string>::kNone) return;
  for (std::size_t id : pinyin_trie_.Ids(node)) {
    if (entries_[id].hanzi != hanzi) continue;
    entries_[id].freq += by;
    SortCandidates(node);
    const std::u32string key(hanzi);
    auto& total = hanzi_freq_[key];
    by_freq_.erase({-static_cast<std::int64_t>(total), key});
    total += by;
    by_freq_.insert({-static_cast<std::int64_t>(total), key});
    return;
  }
}

std::vector<const BilingualEntry*> Vocabulary::PrefixMatches(
    std::span<const std::string> remaining) const {
  std::vector<int> nodes;
  pinyin_trie_.ForEachPrefix(remaining, 0, [&](std::size_t, int node) { nodes.push_back(node); });
  std::vector<const BilingualEntry*> out;
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    for (std::size_t id : pinyin_trie_.Ids(*it)) out.push_back(&entries_[id]);
  }
  return out;
}

std::vector<const BilingualEntry*> Vocabulary::Homophones(const SyllableSeq& pinyin) const {
  std::vector<const BilingualEntry*> out;
  const int node = pinyin_trie_.Find(AsSpan(pinyin));
  if (node == Trie<std::string>::kNone) return out;
  for (std::size_t id : pinyin_trie_.Ids(node)) out.push_back(&entries_[id]);
  return out;
}

std::vector<HanziSeq> Vocabulary::MostFrequentWords(std::size_t n) const {
  std::vector<HanziSeq> out;
  for (const auto& [neg, hanzi] : by_freq_) {
    if (n != 0 && out.size() >= n) break;
    out.push_back(hanzi);
  }
  return out;
}

std::vector<SyllableSeq> Vocabulary::MostFrequentPinyin(std::size_t n) const {
  std::map<SyllableSeq, std::uint64_t> totals;
  for (const auto& e : entries_) totals[e.pinyin] += e.freq;
  std::vector<std::pair<std::uint64_t, SyllableSeq>> sorted;
  for (auto& [py, f] : totals) sorted.emplace_back(f, py);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<SyllableSeq> out;
  for (auto& [f, py] : sorted) {
    if (n != 0 && out.size() >= n) break;
    out.push_back(std::move(py));
  }
  return out;
}

std::size_t Vocabulary::EvictTo(std::size_t max_size) {
  if (entries_.size() <= max_size) return 0;
  std::vector<std::size_t> order(entries_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    const auto& ea = entries_[a];
    const auto& eb = entries_[b];
    return std::tie(eb.freq, eb.born) < std::tie(ea.freq, ea.born);
  });
  order.resize(max_size);
  std::sort(order.begin(), order.end());
  std::vector<BilingualEntry> kept;
  kept.reserve(max_size);
  for (std::size_t id : order) kept.push_back(std::move(entries_[id]));
  const std::size_t removed = entries_.size() - kept.size();
  entries_ = std::move(kept);
  Rebuild();
  return removed;
}

void Vocabulary::Rebuild() {
  pinyin_trie_.Clear();
  hanzi_trie_.Clear();
  hanzi_freq_.clear();
  by_freq_.clear();
  for (std::size_t id = 0; id < entries_.size(); ++id) IndexEntry(id);
}

bool Vocabulary::CheckConsistency() const {
  if (pinyin_trie_.IdCount() != entries_.size()) return false;
  if (hanzi_trie_.IdCount() != entries_.size()) return false;
  std::unordered_map<std::u32string, std::uint64_t> totals;
  for (std::size_t id = 0; id < entries_.size(); ++id) {
    const auto& e = entries_[id];
    const int pnode = pinyin_trie_.Find(AsSpan(e.pinyin));
    if (pnode == Trie<std::string>::kNone) return false;
    const auto& pids = pinyin_trie_.Ids(pnode);
    if (std::find(pids.begin(), pids.end(), id) == pids.end()) return false;
    if (!std::is_sorted(pids.begin(), pids.end(), [this](std::size_t a, std::size_t b) {
          return CandidateBefore(entries_[a], entries_[b]);
        })) {
      return false;
    }
    const int hnode = hanzi_trie_.Find(AsSpan(e.hanzi));
    if (hnode == Trie<char32_t>::kNone) return false;
    const auto& hids = hanzi_trie_.Ids(hnode);
    if (std::find(hids.begin(), hids.end(), id) == hids.end()) return false;
    totals[e.hanzi] += e.freq;
  }
  if (totals != hanzi_freq_ || by_freq_.size() != totals.size()) return false;
  for (const auto& [neg, hanzi] : by_freq_) {
    auto it = totals.find(hanzi);
    if (it == totals.end() || -neg != static_cast<std::int64_t>(it->second)) return false;
  }
  return true;
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  auto sorted = [](std::vector<BilingualEntry> v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return std::tie(a.hanzi, a.pinyin, a.freq, a.born) <
             std::tie(b.hanzi, b.pinyin, b.freq, b.born);
    });
    return v;
  };
  return sorted(entries_) == sorted(other.entries_);
}

// --- segmentation ---

std::vector<HanziSeq> MaxMatchSegment(std::u32string_view text, const Trie<char32_t>& trie) {
  std::vector<HanziSeq> out;
  std::size_t pos = 0;
  for (std::size_t len : MaxMatchLengths(trie, AsSpan(text))) {
    out.emplace_back(text.substr(pos, len));
    pos += len;
  }
  return out;
}

std::vector<SyllableSeq> MaxMatchSegment(const SyllableSeq& syllables,
                                         const Trie<std::string>& trie) {
  std::vector<SyllableSeq> out;
  std::size_t pos = 0;
  for (std::size_t len : MaxMatchLengths(trie, AsSpan(syllables))) {
    out.emplace_back(syllables.begin() + pos, syllables.begin() + pos + len);
    pos += len;
  }
  return out;
}

ParallelSentence SegmentAligned(const Vocabulary& vocab, const SyllableSeq& pinyin,
                                std::u32string_view hanzi) {
  if (pinyin.size() != hanzi.size()) {
    throw ContractError("aligned segmentation needs one syllable per character");
  }
  ParallelSentence out;
  std::size_t pos = 0;
  const auto& trie = vocab.pinyin_trie();
  while (pos < pinyin.size()) {
    std::size_t best = 1;
    trie.ForEachPrefix(AsSpan(pinyin), pos, [&](std::size_t len, int node) {
      for (std::size_t id : trie.Ids(node)) {
        if (vocab.entry(id).hanzi == hanzi.substr(pos, len)) {
          best = std::max(best, len);
          break;
        }
      }
    });
    out.pinyin_words.emplace_back(pinyin.begin() + pos, pinyin.begin() + pos + best);
    out.hanzi_words.emplace_back(hanzi.substr(pos, best));
    pos += best;
  }
  return out;
}

std::vector<PrefixCandidate> CandidatesForPrefix(const Vocabulary& vocab,
                                                 const CharPinyinDict& dict,
                                                 std::span<const std::string> remaining) {
  std::vector<PrefixCandidate> out;
  if (remaining.empty()) return out;
  for (const BilingualEntry* e : vocab.PrefixMatches(remaining)) {
    out.push_back(PrefixCandidate{*e, false});
  }
  for (char32_t ch : dict.CharsFor(remaining[0])) {
    const HanziSeq hanzi(1, ch);
    const bool present = std::any_of(out.begin(), out.end(), [&](const PrefixCandidate& c) {
      return c.entry.hanzi.size() == 1 && c.entry.hanzi == hanzi;
    });
    if (present) continue;
    out.push_back(PrefixCandidate{BilingualEntry{{remaining[0]}, hanzi, 0, 0}, true});
  }
  return out;
}

// --- online update ---

UpdateReport UpdateVocabulary(Vocabulary& vocab, const SyllableSeq& pinyin,
                              std::u32string_view predicted, std::u32string_view chosen,
                              std::uint64_t turn, const UpdateOptions& options) {
  if (pinyin.size() != predicted.size() || pinyin.size() != chosen.size()) {
    throw ContractError("vocabulary update needs equal lengths: pinyin " +
                        std::to_string(pinyin.size()) + ", predicted " +
                        std::to_string(predicted.size()) + ", chosen " +
                        std::to_string(chosen.size()));
  }
  UpdateReport report;
  report.turn = turn;
  const std::size_t len = chosen.size();
  const bool any_mismatch = chosen != predicted;

  std::vector<std::pair<std::size_t, std::size_t>> accepted;  // [begin, end)
  if (any_mismatch) {
    const std::size_t top = std::min(options.max_ngram, len);
    for (std::size_t n = top; n >= options.min_ngram && n >= 1; --n) {
      for (std::size_t i = 0; i + n <= len; ++i) {
        ++report.examined_ngrams;
        const std::size_t last = i + n - 1;
        if (chosen[i] == predicted[i] || chosen[last] == predicted[last]) continue;
        const bool contained = std::any_of(accepted.begin(), accepted.end(), [&](const auto& w) {
          return w.first <= i && i + n <= w.second;
        });
        if (contained) continue;
        const auto window = chosen.substr(i, n);
        if (!std::all_of(window.begin(), window.end(), [](char32_t c) { return IsCjk(c); })) {
          continue;
        }
        accepted.emplace_back(i, i + n);
        BilingualEntry entry{SyllableSeq(pinyin.begin() + i, pinyin.begin() + i + n),
                             HanziSeq(window), 1, turn};
        if (vocab.Add(entry)) report.added.push_back(std::move(entry));
      }
    }
  }

  const ParallelSentence seg = SegmentAligned(vocab, pinyin, chosen);
  for (std::size_t w = 0; w < seg.hanzi_words.size(); ++w) {
    const bool fresh = std::any_of(report.added.begin(), report.added.end(), [&](const auto& e) {
      return e.pinyin == seg.pinyin_words[w] && e.hanzi == seg.hanzi_words[w];
    });
    if (!fresh) vocab.Increment(seg.pinyin_words[w], seg.hanzi_words[w]);
  }
  if (options.max_vocab != 0) vocab.EvictTo(options.max_vocab);
  return report;
}

// --- persistence ---

void SaveVocabulary(const Vocabulary& vocab, std::ostream& out) {
  std::vector<const BilingualEntry*> rows;
  for (const auto& e : vocab.entries()) rows.push_back(&e);
  std::sort(rows.begin(), rows.end(), [](const BilingualEntry* a, const BilingualEntry* b) {
    return std::tie(a->hanzi, a->pinyin) < std::tie(b->hanzi, b->pinyin);
  });
  for (const BilingualEntry* e : rows) {
    out << JoinSyllables(e->pinyin) << '\t' << U32ToUtf8(e->hanzi) << '\t' << e->freq << '\t'
        << e->born << '\n';
  }
}

void SaveVocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  SaveVocabulary(vocab, out);
  if (!out) throw DataError("write failed: " + path);
}

Vocabulary LoadVocabulary(std::istream& in, const std::string& source) {
  Vocabulary vocab;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    while (true) {
      const auto tab = rest.find('\t');
      cols.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (cols.size() != 4) throw DataError(where + ": expected 4 tab-separated columns");
    BilingualEntry e;
    e.pinyin = SplitSyllables(cols[0]);
    for (const auto& s : e.pinyin) {
      if (s.empty() || s.size() > 6 ||
          !std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
        throw DataError(where + ": malformed syllable '" + s + "'");
      }
    }
    try {
      e.hanzi = Utf8ToU32(cols[1]);
    } catch (const DataError& err) {
      throw DataError(where + ": " + err.what());
    }
    if (e.pinyin.empty() || e.pinyin.size() != e.hanzi.size()) {
      throw DataError(where + ": syllable count differs from character count");
    }
    e.freq = ParseCount(cols[2], where);
    e.born = ParseCount(cols[3], where);
    if (!vocab.Add(std::move(e))) throw DataError(where + ": duplicate entry");
  }
  return vocab;
}

Vocabulary LoadVocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return LoadVocabulary(in, path);
}

Vocabulary VocabularyFromLexicon(const std::vector<std::string>& words,
                                 const CharPinyinDict& dict) {
  Vocabulary vocab;
  for (const auto& w : words) {
    if (w.empty()) continue;
    const HanziSeq hanzi = Utf8ToU32(w);
    SyllableSeq pinyin = AnnotatePinyin(std::u32string_view(hanzi), dict);
    if (pinyin.size() != hanzi.size()) {
      throw DataError("lexicon word '" + w + "' contains non-CJK characters");
    }
    vocab.Add(BilingualEntry{std::move(pinyin), hanzi, 0, 0});
  }
  return vocab;
}

Vocabulary VocabularyFromCorpus(const std::vector<ParallelSentence>& corpus) {
  Vocabulary vocab;
  for (const auto& s : corpus) {
    for (std::size_t w = 0; w < s.hanzi_words.size(); ++w) {
      if (!vocab.Add(BilingualEntry{s.pinyin_words[w], s.hanzi_words[w], 1, 0})) {
        vocab.Increment(s.pinyin_words[w], s.hanzi_words[w]);
      }
    }
  }
  return vocab;
}

Vocabulary BuildInitialVocabulary(const std::vector<ParallelSentence>& corpus,
                                  const std::vector<std::string>& lexicon,
                                  const CharPinyinDict& dict) {
  Vocabulary vocab = VocabularyFromCorpus(corpus);
  const Vocabulary words = VocabularyFromLexicon(lexicon, dict);
  for (const auto& entry : words.entries()) vocab.Add(entry);
  for (char32_t c : dict.chars()) {
    vocab.Add(BilingualEntry{SyllableSeq{dict.Pronunciations(c)->front()}, HanziSeq(1, c), 0, 0});
  }
  return vocab;
}

}  // namespace openime
