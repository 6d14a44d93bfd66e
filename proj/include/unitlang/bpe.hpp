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

#ifndef UNITLANG_BPE_HPP
#define UNITLANG_BPE_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unitlang/corpus.hpp"
#include "unitlang/error.hpp"
#include "unitlang/segmenter.hpp"
#include "unitlang/span.hpp"

namespace unitlang {

// Byte-pair-encoding baseline over unit sequences. Merges are kept in
// training order.
struct BpeMergeTable {
  std::vector<std::pair<Span, Span>> merges;

  std::size_t num_merges() const noexcept { return merges.size(); }
  friend bool operator==(const BpeMergeTable&, const BpeMergeTable&) = default;
};

namespace detail {

using Symbol = std::uint32_t;

inline std::uint64_t pair_key(Symbol a, Symbol b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

class SymbolTable {
 public:
  Symbol intern(const Span& s) {
    auto [it, fresh] = ids_.try_emplace(s, static_cast<Symbol>(spans_.size()));
    if (fresh) spans_.push_back(s);
    return it->second;
  }
  const Span* find(SpanView s) const {
    auto it = ids_.find(s);
    return it == ids_.end() ? nullptr : &spans_[it->second];
  }
  std::optional<Symbol> id(SpanView s) const {
    auto it = ids_.find(s);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const Span& span(Symbol s) const { return spans_[s]; }

 private:
  std::unordered_map<Span, Symbol, SpanHash, SpanEqual> ids_;
  std::vector<Span> spans_;
};

inline Span concat(const Span& a, const Span& b) {
  Span out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Replaces every non-overlapping (left, right) occurrence, scanning left to
// right.
inline void merge_pair(std::vector<Symbol>& seq, Symbol left, Symbol right,
                       Symbol merged) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i + 1 < seq.size() && seq[i] == left && seq[i + 1] == right) {
      seq[out++] = merged;
      ++i;
    } else {
      seq[out++] = seq[i];
    }
  }
  seq.resize(out);
}

}  // namespace detail

// Standard BPE: repeatedly merge the most frequent adjacent pair, ties to
// the pair that occurs first in corpus order. Stops early once no pair
// occurs twice. When `final_stream` is set it receives the symbol stream
// at the end of training.
inline BpeMergeTable bpe_train(const Corpus& corpus, std::size_t num_merges,
                               std::vector<std::vector<Span>>* final_stream = nullptr) {
  if (num_merges == 0) throw ContractError("num_merges must be >= 1");
  if (corpus.token_total == 0) throw ContractError("cannot train BPE on an empty corpus");

  detail::SymbolTable symbols;
  std::vector<std::vector<detail::Symbol>> seqs;
  seqs.reserve(corpus.sequences.size());
  for (const auto& s : corpus.sequences) {
    std::vector<detail::Symbol> syms;
    syms.reserve(s.size());
    for (UnitId u : s.units) syms.push_back(symbols.intern(Span{u}));
    seqs.push_back(std::move(syms));
  }

  struct PairStat {
    std::uint64_t count = 0;
    std::uint64_t first = 0;
  };
  BpeMergeTable table;
  while (table.merges.size() < num_merges) {
    std::unordered_map<std::uint64_t, PairStat> stats;
    std::uint64_t position = 0;
    for (const auto& seq : seqs) {
      for (std::size_t i = 0; i + 1 < seq.size(); ++i, ++position) {
        auto [it, fresh] = stats.try_emplace(detail::pair_key(seq[i], seq[i + 1]));
        if (fresh) it->second.first = position;
        ++it->second.count;
      }
      ++position;
    }
    std::uint64_t best_key = 0;
    PairStat best{0, std::numeric_limits<std::uint64_t>::max()};
    for (const auto& [key, st] : stats) {
      if (st.count > best.count || (st.count == best.count && st.first < best.first)) {
        best = st;
        best_key = key;
      }
    }
    if (best.count < 2) break;
    const auto left = static_cast<detail::Symbol>(best_key >> 32);
    const auto right = static_cast<detail::Symbol>(best_key & 0xffffffffu);
    const Span left_span = symbols.span(left);
    const Span right_span = symbols.span(right);
    const detail::Symbol merged = symbols.intern(detail::concat(left_span, right_span));
    table.merges.emplace_back(left_span, right_span);
    for (auto& seq : seqs) detail::merge_pair(seq, left, right, merged);
  }

  if (final_stream) {
    final_stream->clear();
    for (const auto& seq : seqs) {
      std::vector<Span> words;
      words.reserve(seq.size());
      for (auto s : seq) words.push_back(symbols.span(s));
      final_stream->push_back(std::move(words));
    }
  }
  return table;
}

// Applies a merge table. Equivalent to applying every merge in training
// order; merges whose pair is absent are no-ops, so each step jumps to the
// lowest-ranked applicable merge not yet passed.
class BpeApplier {
 public:
  explicit BpeApplier(const BpeMergeTable& table) {
    for (std::size_t rank = 0; rank < table.merges.size(); ++rank) {
      const auto& [l, r] = table.merges[rank];
      if (l.empty() || r.empty()) throw ContractError("empty span in merge table");
      const auto left = symbols_.intern(l);
      const auto right = symbols_.intern(r);
      const auto merged = symbols_.intern(detail::concat(l, r));
      ranks_[detail::pair_key(left, right)].push_back(Rule{rank, merged});
    }
  }

  std::vector<Span> apply(SpanView units) const {
    // Units the table never mentions get symbols past the table's range and
    // so never match a rule.
    constexpr detail::Symbol kUnknown = std::numeric_limits<detail::Symbol>::max();
    std::vector<detail::Symbol> seq;
    seq.reserve(units.size());
    for (UnitId u : units) seq.push_back(symbols_.id(SpanView(&u, 1)).value_or(kUnknown));

    std::size_t next_rank = 0;
    while (seq.size() > 1) {
      const Rule* best = nullptr;
      std::uint64_t best_key = 0;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const auto key = detail::pair_key(seq[i], seq[i + 1]);
        auto it = ranks_.find(key);
        if (it == ranks_.end()) continue;
        for (const Rule& rule : it->second) {
          if (rule.rank < next_rank) continue;
          if (!best || rule.rank < best->rank) {
            best = &rule;
            best_key = key;
          }
          break;
        }
      }
      if (!best) break;
      detail::merge_pair(seq, static_cast<detail::Symbol>(best_key >> 32),
                         static_cast<detail::Symbol>(best_key & 0xffffffffu),
                         best->merged);
      next_rank = best->rank + 1;
    }

    std::vector<Span> words;
    words.reserve(seq.size());
    std::size_t pos = 0;
    for (auto s : seq) {
      if (s == kUnknown) {
        words.push_back(Span{units[pos]});
      } else {
        words.push_back(symbols_.span(s));
      }
      pos += words.back().size();
    }
    return words;
  }

  Segmentation segment(SpanView units) const {
    Segmentation seg;
    seg.words = apply(units);
    return seg;
  }

 private:
  struct Rule {
    std::size_t rank;
    detail::Symbol merged;
  };
  detail::SymbolTable symbols_;
  std::unordered_map<std::uint64_t, std::vector<Rule>> ranks_;
};

inline Segmentation bpe_apply(SpanView seq, const BpeMergeTable& table) {
  return BpeApplier(table).segment(seq);
}

// One "<left> <right>" line per merge, in order.
inline void save_merges(std::ostream& out, const BpeMergeTable& table) {
  for (const auto& [l, r] : table.merges) {
    out << format_span(l) << ' ' << format_span(r) << '\n';
  }
}

inline BpeMergeTable load_merges(std::istream& in) {
  BpeMergeTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t sp = line.find(' ');
    if (sp == std::string::npos || line.find(' ', sp + 1) != std::string::npos) {
      throw FormatError("merge line " + std::to_string(line_no) +
                        ": expected '<left> <right>'");
    }
    try {
      table.merges.emplace_back(parse_span(std::string_view(line).substr(0, sp)),
                                parse_span(std::string_view(line).substr(sp + 1)));
    } catch (const ContractError& e) {
      throw FormatError("merge line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (in.bad()) throw FormatError("merges: read failure");
  return table;
}

}  // namespace unitlang

#endif  // UNITLANG_BPE_HPP
