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

#ifndef UNITLANG_CORPUS_HPP
#define UNITLANG_CORPUS_HPP

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "unitlang/error.hpp"
#include "unitlang/span.hpp"

namespace unitlang {

// One utterance. `id` is the 1-based source line unless set otherwise.
struct UnitSequence {
  std::vector<UnitId> units;
  std::size_t id = 0;

  std::size_t size() const noexcept { return units.size(); }
  bool empty() const noexcept { return units.empty(); }
  SpanView view() const noexcept { return units; }

  friend bool operator==(const UnitSequence&, const UnitSequence&) = default;
};

struct Corpus {
  std::vector<UnitSequence> sequences;
  std::size_t token_total = 0;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

inline Corpus make_corpus(std::vector<std::vector<UnitId>> lines) {
  Corpus corpus;
  corpus.sequences.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    corpus.token_total += lines[i].size();
    corpus.sequences.push_back({std::move(lines[i]), i + 1});
  }
  return corpus;
}

namespace detail {

inline bool is_blank(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

inline std::vector<UnitId> parse_unit_line(std::string_view line,
                                           std::size_t line_no) {
  std::vector<UnitId> units;
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (is_blank(line[pos])) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < line.size() && !is_blank(line[end])) ++end;
    std::string_view token = line.substr(pos, end - pos);
    const std::size_t column = pos + 1;
    if (token.front() == '-') {
      throw ParseError(line_no, column,
                       "negative unit id '" + std::string(token) + "'");
    }
    std::uint64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc::result_out_of_range ||
        (ec == std::errc() && ptr == token.data() + token.size() &&
         value > std::numeric_limits<UnitId>::max())) {
      throw ParseError(line_no, column,
                       "unit id '" + std::string(token) + "' exceeds 32 bits");
    }
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ParseError(line_no, column,
                       "malformed unit id '" + std::string(token) + "'");
    }
    units.push_back(static_cast<UnitId>(value));
    pos = end;
  }
  return units;
}

}  // namespace detail

// One sequence per input line, empty lines included.
inline Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    UnitSequence seq{detail::parse_unit_line(line, line_no), line_no};
    corpus.token_total += seq.size();
    corpus.sequences.push_back(std::move(seq));
  }
  if (in.bad()) throw Error("read failure while parsing corpus");
  return corpus;
}

inline Corpus parse_corpus(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in);
}

inline void write_sequence(std::ostream& out, SpanView units) {
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i) out << ' ';
    out << units[i];
  }
  out << '\n';
}

inline void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& seq : corpus.sequences) write_sequence(out, seq.units);
}

// Replaces each maximal run of equal adjacent units by one occurrence.
inline UnitSequence collapse_repetitions(const UnitSequence& seq) {
  UnitSequence out{{}, seq.id};
  out.units.reserve(seq.units.size());
  for (UnitId u : seq.units) {
    if (out.units.empty() || out.units.back() != u) out.units.push_back(u);
  }
  return out;
}

inline Corpus collapse_repetitions(const Corpus& corpus) {
  Corpus out;
  out.sequences.reserve(corpus.sequences.size());
  for (const auto& seq : corpus.sequences) {
    out.sequences.push_back(collapse_repetitions(seq));
    out.token_total += out.sequences.back().size();
  }
  return out;
}

}  // namespace unitlang

#endif  // UNITLANG_CORPUS_HPP
