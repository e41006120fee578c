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

#ifndef OPENIME_ERROR_H_
#define OPENIME_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace openime {

/// Malformed or unreadable input data (files, corpora, dictionaries).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (shape or length mismatch).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite loss or gradient during training.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input could not be split into legal pinyin syllables, or contains
/// characters the dictionary does not know. `offset` locates the failure
/// (byte offset for letter input, code point offset for hanzi input).
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// A turn id that was never issued, already consumed, or superseded.
class StaleTurnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace openime

#endif  // OPENIME_ERROR_H_
