// Copyright 2026 The unitlang Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UNITLANG_SPAN_HPP
#define UNITLANG_SPAN_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unitlang/error.hpp"

namespace unitlang {

// Index of a discrete speech unit (a quantizer cluster id).
using UnitId = std::uint32_t;

// A contiguous run of units. Owning form and non-owning view.
using Span = std::vector<UnitId>;
using SpanView = std::span<const UnitId>;

// Transparent hash/equality so maps keyed by Span can be probed with a
// SpanView without allocating.
struct SpanHash {
  using is_transparent = void;

  std::size_t operator()(SpanView s) const noexcept {
    // 64-bit FNV-1a over whole units, then a final avalanche.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (UnitId u : s) {
      h ^= u;
      h *= 0x100000001b3ULL;
    }
    h ^= s.size();
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return static_cast<std::size_t>(h);
  }
  std::size_t operator()(const Span& s) const noexcept {
    return (*this)(SpanView(s));
  }
};

struct SpanEqual {
  using is_transparent = void;

  bool operator()(SpanView a, SpanView b) const noexcept {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
};

// Canonical ordering used for every serialized listing: shorter spans
// first, then lexicographic by unit id.
struct SpanLengthLexLess {
  bool operator()(SpanView a, SpanView b) const noexcept {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

// "535_271_930"
inline std::string format_span(SpanView s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out.push_back('_');
    out += std::to_string(s[i]);
  }
  return out;
}

// Parses an underscore-joined unit word. Throws ContractError on anything
// that is not a non-empty list of 32-bit unsigned decimals.
inline Span parse_span(std::string_view text) {
  Span out;
  if (text.empty()) throw ContractError("empty unit word");
  std::size_t pos = 0;
  while (true) {
    std::size_t end = text.find('_', pos);
    std::string_view piece = text.substr(pos, end == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : end - pos);
    UnitId value = 0;
    auto [ptr, ec] =
        std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (piece.empty() || ec != std::errc() ||
        ptr != piece.data() + piece.size()) {
      throw ContractError("malformed unit word '" + std::string(text) + "'");
    }
    out.push_back(value);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

// Words separated by single spaces, units inside a word joined by '_'.
inline std::string render_words(const std::vector<Span>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += format_span(words[i]);
  }
  return out;
}

// Inverse of render_words; tolerates runs of blanks.
inline std::vector<Span> parse_words(std::string_view line) {
  std::vector<Span> words;
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r') {
      ++pos;
      continue;
    }
    std::size_t end = line.find_first_of(" \t\r", pos);
    if (end == std::string_view::npos) end = line.size();
    words.push_back(parse_span(line.substr(pos, end - pos)));
    pos = end;
  }
  return words;
}

}  // namespace unitlang

#endif  // UNITLANG_SPAN_HPP
