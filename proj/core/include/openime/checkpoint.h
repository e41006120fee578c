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

// Checkpoint layout:
//
//   "OIME1" <version u8> <scalar bytes u8: 4 or 8>
//   then sections, each  <name>\n<rank>\n<dims separated by spaces>\n<payload>
//
// The first section is "meta": a rank-1 byte string holding JSON with the
// model config and key tables. Every parameter follows as little-endian
// scalars of the declared width. The vocabulary snapshot is written next to
// the checkpoint as <path>.vocab.tsv.

#ifndef OPENIME_CHECKPOINT_H_
#define OPENIME_CHECKPOINT_H_

#include <cstddef>
#include <iosfwd>
#include <string>

#include "openime/model.h"
#include "openime/vocab.h"

namespace openime {
inline namespace OPENIME_NN_NS {

inline constexpr char kCheckpointMagic[] = "OIME1";
inline constexpr unsigned char kCheckpointVersion = 1;

void SaveCheckpoint(const P2CModel& model, std::ostream& out);
// Writes to a temporary file and renames it into place.
void SaveCheckpoint(const P2CModel& model, const std::string& path);

// Throws DataError on bad magic, version, truncation or shape mismatch.
// Payloads of the other scalar width are converted.
P2CModel LoadCheckpoint(std::istream& in, const std::string& source);
P2CModel LoadCheckpoint(const std::string& path);

std::string VocabPathFor(const std::string& checkpoint_path);
void SaveModelAndVocab(const P2CModel& model, const Vocabulary& vocab, const std::string& path);

std::string ModelConfigJson(const ModelConfig& config);

// Text word vectors, `<word> <f1> ... <fED>` per line, with an optional
// `<count> <dim>` header. Rows for words that have a target word-table row
// replace that row; other words are skipped. Returns the rows replaced.
// Throws DataError on a dimension mismatch or a malformed number.
std::size_t LoadWordVectors(P2CModel& model, const std::string& path);

}  // namespace OPENIME_NN_NS
}  // namespace openime

#endif  // OPENIME_CHECKPOINT_H_
