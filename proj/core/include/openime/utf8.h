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

#ifndef OPENIME_UTF8_H_
#define OPENIME_UTF8_H_

#include <string>
#include <string_view>

namespace openime {

// Throws DataError on malformed sequences.
std::u32string Utf8ToU32(std::string_view text);
std::string U32ToUtf8(std::u32string_view text);
std::string U32ToUtf8(char32_t c);

struct CjkRange {
  bool extension_a = false;  // also accept U+3400..U+4DBF
};

inline bool IsCjk(char32_t c, CjkRange range = {}) {
  if (c >= 0x4E00 && c <= 0x9FFF) return true;
  return range.extension_a && c >= 0x3400 && c <= 0x4DBF;
}

}  // namespace openime

#endif  // OPENIME_UTF8_H_
