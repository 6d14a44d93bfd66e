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

#ifndef UNITLANG_VOCAB_HPP
#define UNITLANG_VOCAB_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unitlang/error.hpp"
#include "unitlang/segmenter.hpp"
#include "unitlang/span.hpp"

namespace unitlang {

using WordId = std::uint32_t;
using WordCounts = std::unordered_map<Span, std::uint64_t, SpanHash, SpanEqual>;

// Size-capped bidirectional map between unit words and dense ids. Every
// single unit seen at build time has an id, so any word over known units
// can be encoded by falling back to its units.
class UnitWordVocabulary {
 public:
  UnitWordVocabulary() = default;

  // `words` in id order. Throws ContractError on duplicates.
  explicit UnitWordVocabulary(std::vector<Span> words) : words_(std::move(words)) {
    ids_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i].empty()) throw ContractError("empty vocabulary entry");
      if (!ids_.emplace(words_[i], static_cast<WordId>(i)).second) {
        throw ContractError("duplicate vocabulary entry " + format_span(words_[i]));
      }
    }
  }

  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<Span>& words() const noexcept { return words_; }

  std::optional<WordId> id(SpanView word) const {
    auto it = ids_.find(word);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const Span& word(WordId id) const {
    if (id >= words_.size()) {
      throw ContractError("unknown vocabulary id " + std::to_string(id));
    }
    return words_[id];
  }

  friend bool operator==(const UnitWordVocabulary& a, const UnitWordVocabulary& b) {
    return a.words_ == b.words_;
  }

 private:
  std::vector<Span> words_;
  std::unordered_map<Span, WordId, SpanHash, SpanEqual> ids_;
};

inline void add_word_counts(const std::vector<Span>& words, WordCounts& counts) {
  for (const auto& w : words) ++counts[w];
}

// All single units, then multi-unit words by descending count until
// size_cap. Ids follow descending count, ties lexicographic.
inline UnitWordVocabulary build_vocab_from_counts(const WordCounts& counts,
                                                  std::size_t size_cap) {
  WordCounts units;
  std::vector<std::pair<Span, std::uint64_t>> multi;
  for (const auto& [word, c] : counts) {
    for (UnitId u : word) units.try_emplace(Span{u}, 0);
    if (word.size() == 1) {
      units[word] += c;
    } else {
      multi.emplace_back(word, c);
    }
  }
  if (size_cap < units.size()) {
    throw ContractError("size cap " + std::to_string(size_cap) + " is below the " +
                        std::to_string(units.size()) + " distinct single units");
  }
  auto by_rank = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  std::sort(multi.begin(), multi.end(), by_rank);
  multi.resize(std::min(multi.size(), size_cap - units.size()));
  std::vector<std::pair<Span, std::uint64_t>> chosen(units.begin(), units.end());
  chosen.insert(chosen.end(), multi.begin(), multi.end());
  std::sort(chosen.begin(), chosen.end(), by_rank);
  std::vector<Span> words;
  words.reserve(chosen.size());
  for (auto& [w, c] : chosen) words.push_back(std::move(w));
  return UnitWordVocabulary(std::move(words));
}

inline UnitWordVocabulary build_vocab(const std::vector<std::vector<Span>>& corpus,
                                      std::size_t size_cap) {
  WordCounts counts;
  for (const auto& words : corpus) add_word_counts(words, counts);
  return build_vocab_from_counts(counts, size_cap);
}

inline UnitWordVocabulary build_vocab(const std::vector<Segmentation>& corpus,
                                      std::size_t size_cap) {
  WordCounts counts;
  for (const auto& seg : corpus) add_word_counts(seg.words, counts);
  return build_vocab_from_counts(counts, size_cap);
}

// Out-of-vocabulary words are emitted as their single units' ids.
inline std::vector<WordId> encode(const std::vector<Span>& words,
                                  const UnitWordVocabulary& vocab) {
  std::vector<WordId> ids;
  ids.reserve(words.size());
  for (const auto& w : words) {
    if (auto id = vocab.id(w)) {
      ids.push_back(*id);
      continue;
    }
    for (UnitId u : w) {
      auto unit_id = vocab.id(SpanView(&u, 1));
      if (!unit_id) {
        throw ContractError("unit " + std::to_string(u) + " is not in the vocabulary");
      }
      ids.push_back(*unit_id);
    }
  }
  return ids;
}

inline std::vector<WordId> encode(const Segmentation& seg,
                                  const UnitWordVocabulary& vocab) {
  return encode(seg.words, vocab);
}

inline std::vector<Span> decode(const std::vector<WordId>& ids,
                                const UnitWordVocabulary& vocab) {
  std::vector<Span> words;
  words.reserve(ids.size());
  for (WordId id : ids) words.push_back(vocab.word(id));
  return words;
}

// One "<word>\t<id>" line per entry, in id order.
inline void save_vocab(std::ostream& out, const UnitWordVocabulary& vocab) {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    out << format_span(vocab.words()[i]) << '\t' << i << '\n';
  }
}

inline UnitWordVocabulary load_vocab(std::istream& in) {
  std::vector<Span> words;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = "vocab line " + std::to_string(line_no) + ": ";
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError(where + "expected '<word>\\t<id>'");
    std::string_view id_text = std::string_view(line).substr(tab + 1);
    std::size_t id = 0;
    auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (id_text.empty() || ec != std::errc() || ptr != id_text.data() + id_text.size()) {
      throw FormatError(where + "malformed id");
    }
    if (id != words.size()) throw FormatError(where + "ids must be dense and in order");
    try {
      words.push_back(parse_span(std::string_view(line).substr(0, tab)));
    } catch (const ContractError& e) {
      throw FormatError(where + e.what());
    }
  }
  if (in.bad()) throw FormatError("vocab: read failure");
  try {
    return UnitWordVocabulary(std::move(words));
  } catch (const ContractError& e) {
    throw FormatError(std::string("vocab: ") + e.what());
  }
}

}  // namespace unitlang

#endif  // UNITLANG_VOCAB_HPP
