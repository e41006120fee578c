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

#ifndef OPENIME_EMBEDDING_H_
#define OPENIME_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "openime/autograd.h"
#include "openime/optim.h"

namespace openime {
inline namespace OPENIME_NN_NS {

// Word representations built from unit (character or syllable) sequences.
//
//   CE(w)  = P [gru_fwd(units); gru_bwd(units)] + p
//   CWE(w) = WE(w) * CE(w)   if w has a word-table row
//          = CE(w)           otherwise
//
// Unit row 0 is reserved for unknown units.
class EmbeddingBank {
 public:
  EmbeddingBank() = default;
  EmbeddingBank(const std::string& prefix, std::size_t units, std::size_t words,
                std::size_t embed, std::size_t hidden, Rng& rng, double init_range = 0.08);

  std::size_t embed() const { return word_table.value.cols(); }
  std::size_t hidden() const { return fwd_h.value.rows(); }
  std::size_t unit_count() const { return unit_table.value.rows(); }
  std::size_t word_count() const { return word_table.value.rows(); }

  // One ED-wide row per word, in input order. `word_rows[i] < 0` means the
  // word has no word-table row.
  Var Compose(Tape& tape, std::span<const std::vector<std::int32_t>> units,
              std::span<const std::int64_t> word_rows) const;
  // CE alone.
  Var ComposeChars(Tape& tape, std::span<const std::vector<std::int32_t>> units) const;

  std::vector<Parameter*> Parameters();
  std::vector<const Parameter*> Parameters() const;

  Parameter unit_table;  // units x ED
  Parameter word_table;  // words x ED
  Parameter fwd_x, fwd_h, fwd_b, fwd_bh;  // ED x 3G, G x 3G, 3G, 3G
  Parameter bwd_x, bwd_h, bwd_b, bwd_bh;
  Parameter proj, proj_b;  // 2G x ED, ED
};

}  // namespace OPENIME_NN_NS
}  // namespace openime

#endif  // OPENIME_EMBEDDING_H_
