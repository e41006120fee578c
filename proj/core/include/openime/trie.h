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

#ifndef OPENIME_TRIE_H_
#define OPENIME_TRIE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace openime {

// A trie over sequences of `Unit` whose terminal nodes carry a list of
// payload ids. Children are kept in ordered maps so traversal order is
// deterministic.
template <typename Unit>
class Trie {
 public:
  static constexpr int kNone = -1;

  Trie() : nodes_(1) {}

  // Returns the node id for `key`, creating the path if needed.
  int Insert(std::span<const Unit> key) {
    int node = 0;
    for (const Unit& u : key) {
      auto it = nodes_[node].children.find(u);
      if (it == nodes_[node].children.end()) {
        const int next = static_cast<int>(nodes_.size());
        nodes_[node].children.emplace(u, next);
        nodes_.emplace_back();
        node = next;
      } else {
        node = it->second;
      }
    }
    return node;
  }

  void Add(std::span<const Unit> key, std::size_t id) {
    nodes_[Insert(key)].ids.push_back(id);
  }

  int Find(std::span<const Unit> key) const {
    int node = 0;
    for (const Unit& u : key) {
      node = Child(node, u);
      if (node == kNone) return kNone;
    }
    return node;
  }

  int Child(int node, const Unit& u) const {
    const auto& children = nodes_[node].children;
    auto it = children.find(u);
    return it == children.end() ? kNone : it->second;
  }

  bool IsTerminal(int node) const { return !nodes_[node].ids.empty(); }
  const std::vector<std::size_t>& Ids(int node) const { return nodes_[node].ids; }
  std::vector<std::size_t>& MutableIds(int node) { return nodes_[node].ids; }

  // Length of the longest terminal key that is a prefix of `seq[pos:]`, or 0.
  std::size_t LongestMatch(std::span<const Unit> seq, std::size_t pos) const {
    int node = 0;
    std::size_t best = 0;
    for (std::size_t i = pos; i < seq.size(); ++i) {
      node = Child(node, seq[i]);
      if (node == kNone) break;
      if (IsTerminal(node)) best = i - pos + 1;
    }
    return best;
  }

  // Calls fn(length, node) for every terminal key that prefixes seq[pos:],
  // shortest first.
  template <typename Fn>
  void ForEachPrefix(std::span<const Unit> seq, std::size_t pos, Fn&& fn) const {
    int node = 0;
    for (std::size_t i = pos; i < seq.size(); ++i) {
      node = Child(node, seq[i]);
      if (node == kNone) return;
      if (IsTerminal(node)) fn(i - pos + 1, node);
    }
  }

  std::size_t NodeCount() const { return nodes_.size(); }

  // Number of (terminal node, id) pairs stored.
  std::size_t IdCount() const {
    std::size_t n = 0;
    for (const auto& node : nodes_) n += node.ids.size();
    return n;
  }

  void Clear() { nodes_.assign(1, Node{}); }

 private:
  struct Node {
    std::map<Unit, int> children;
    std::vector<std::size_t> ids;
  };
  std::vector<Node> nodes_;
};

// Greedy maximum-matching segmentation: at each position take the longest
// key present in `trie`; positions with no match become single units.
// Returns the word lengths, which sum to seq.size().
template <typename Unit>
std::vector<std::size_t> MaxMatchLengths(const Trie<Unit>& trie,
                                         std::span<const Unit> seq) {
  std::vector<std::size_t> lengths;
  std::size_t pos = 0;
  while (pos < seq.size()) {
    std::size_t len = trie.LongestMatch(seq, pos);
    if (len == 0) len = 1;
    lengths.push_back(len);
    pos += len;
  }
  return lengths;
}

}  // namespace openime

#endif  // OPENIME_TRIE_H_
