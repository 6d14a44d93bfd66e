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

#ifndef UNITLANG_NGRAM_HPP
#define UNITLANG_NGRAM_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "unitlang/corpus.hpp"
#include "unitlang/error.hpp"
#include "unitlang/parallel.hpp"
#include "unitlang/span.hpp"

namespace unitlang {

// Occurrence counts of every contiguous span of 1..max_span units, plus the
// corpus token total T. P(span) is estimated as count(span) / T for every
// span length.
class SpanCountModel {
 public:
  using CountMap = std::unordered_map<Span, std::uint64_t, SpanHash, SpanEqual>;

  SpanCountModel(std::size_t max_span, std::uint64_t token_total,
                 CountMap counts)
      : max_span_(max_span),
        token_total_(token_total),
        counts_(std::move(counts)) {
    if (max_span_ == 0) throw ContractError("max_span must be positive");
    if (token_total_ == 0) throw ContractError("token_total must be positive");
  }

  std::size_t max_span() const noexcept { return max_span_; }
  std::uint64_t token_total() const noexcept { return token_total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  const CountMap& counts() const noexcept { return counts_; }

  // 0 when the span was never seen (or was pruned).
  std::uint64_t count(SpanView span) const {
    auto it = counts_.find(span);
    return it == counts_.end() ? 0 : it->second;
  }

  // Entries in serialization order: by length, then lexicographic.
  std::vector<std::pair<Span, std::uint64_t>> sorted_entries() const {
    std::vector<std::pair<Span, std::uint64_t>> out(counts_.begin(),
                                                    counts_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return SpanLengthLexLess{}(a.first, b.first);
    });
    return out;
  }

  friend bool operator==(const SpanCountModel& a, const SpanCountModel& b) {
    return a.max_span_ == b.max_span_ && a.token_total_ == b.token_total_ &&
           a.counts_ == b.counts_;
  }

 private:
  std::size_t max_span_;
  std::uint64_t token_total_;
  CountMap counts_;
};

namespace detail {

inline void count_sequence(SpanView units, std::size_t max_span,
                           SpanCountModel::CountMap& counts) {
  for (std::size_t start = 0; start < units.size(); ++start) {
    const std::size_t longest = std::min(max_span, units.size() - start);
    for (std::size_t len = 1; len <= longest; ++len) {
      SpanView span = units.subspan(start, len);
      auto it = counts.find(span);
      if (it != counts.end()) {
        ++it->second;
      } else {
        counts.emplace(Span(span.begin(), span.end()), 1);
      }
    }
  }
}

}  // namespace detail

// Counts every span of length 1..max_span inside each sequence. Spans never
// cross sequence boundaries. With threads > 1 the corpus is sharded and the
// partial maps summed, which gives the same model for any thread count.
inline SpanCountModel count_spans(const Corpus& corpus, std::size_t max_span,
                                  std::size_t threads = 1) {
  if (max_span == 0) throw ContractError("max_span must be >= 1");
  if (corpus.token_total == 0) {
    throw ContractError("cannot count spans of an empty corpus");
  }
  const auto& seqs = corpus.sequences;
  threads = std::max<std::size_t>(1, std::min(threads, seqs.size()));
  std::vector<SpanCountModel::CountMap> partial(threads);
  parallel_shards(seqs.size(), threads,
                  [&](std::size_t begin, std::size_t end, std::size_t shard) {
                    for (std::size_t i = begin; i < end; ++i) {
                      detail::count_sequence(seqs[i].units, max_span,
                                             partial[shard]);
                    }
                  });
  SpanCountModel::CountMap merged = std::move(partial.front());
  for (std::size_t t = 1; t < partial.size(); ++t) {
    for (auto& [span, c] : partial[t]) merged[span] += c;
  }
  return SpanCountModel(max_span, corpus.token_total, std::move(merged));
}

// ln(count / T), or nullopt for an unseen span.
inline std::optional<double> span_logprob(const SpanCountModel& model,
                                          SpanView span) {
  if (span.empty() || span.size() > model.max_span()) {
    throw ContractError("span length " + std::to_string(span.size()) +
                        " outside 1.." + std::to_string(model.max_span()));
  }
  const std::uint64_t c = model.count(span);
  if (c == 0) return std::nullopt;
  return std::log(static_cast<double>(c) /
                  static_cast<double>(model.token_total()));
}

// ln P(word | prev_word) = ln(count(prev ++ word) / count(prev)).
// nullopt when the concatenation was never seen. A zero count for
// prev_word is a contract violation.
inline std::optional<double> conditional_logprob(const SpanCountModel& model,
                                                 SpanView word,
                                                 SpanView prev_word) {
  if (word.empty() || prev_word.empty() ||
      word.size() + prev_word.size() > model.max_span()) {
    throw ContractError("word and previous word lengths " +
                        std::to_string(word.size()) + "+" +
                        std::to_string(prev_word.size()) +
                        " exceed max_span " + std::to_string(model.max_span()));
  }
  const std::uint64_t denom = model.count(prev_word);
  if (denom == 0) {
    throw ContractError("previous word " + format_span(prev_word) +
                        " was never observed");
  }
  Span joined(prev_word.begin(), prev_word.end());
  joined.insert(joined.end(), word.begin(), word.end());
  const std::uint64_t num = model.count(joined);
  if (num == 0) return std::nullopt;
  return std::log(static_cast<double>(num) / static_cast<double>(denom));
}

// Drops spans of length >= 2 seen fewer than min_count times. Single units
// and token_total are kept.
inline SpanCountModel prune(const SpanCountModel& model,
                            std::uint64_t min_count) {
  if (min_count == 0) throw ContractError("min_count must be >= 1");
  SpanCountModel::CountMap kept;
  kept.reserve(model.size());
  for (const auto& [span, c] : model.counts()) {
    if (span.size() == 1 || c >= min_count) kept.emplace(span, c);
  }
  return SpanCountModel(model.max_span(), model.token_total(), std::move(kept));
}

inline constexpr std::string_view kModelMagic = "UNITLM";
inline constexpr std::string_view kModelVersion = "v1";

inline void save_model(std::ostream& out, const SpanCountModel& model) {
  out << kModelMagic << ' ' << kModelVersion
      << " max_span=" << model.max_span()
      << " token_total=" << model.token_total() << '\n';
  for (const auto& [span, c] : model.sorted_entries()) {
    out << format_span(span) << '\t' << c << '\n';
  }
}

inline std::string save_model(const SpanCountModel& model) {
  std::ostringstream out;
  save_model(out, model);
  return out.str();
}

namespace detail {

inline std::uint64_t parse_header_field(std::string_view field,
                                        std::string_view key) {
  std::uint64_t value = 0;
  if (field.substr(0, key.size()) != key) {
    throw FormatError("model header: expected '" + std::string(key) + "'");
  }
  field.remove_prefix(key.size());
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw FormatError("model header: bad value for '" + std::string(key) + "'");
  }
  return value;
}

}  // namespace detail

inline SpanCountModel load_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("model: missing header");
  std::istringstream header(line);
  std::string magic, version, max_field, total_field, extra;
  header >> magic >> version >> max_field >> total_field;
  if (magic != kModelMagic) throw FormatError("model: not a UNITLM file");
  if (version != kModelVersion) {
    throw FormatError("model: unsupported version '" + version + "', expected " +
                      std::string(kModelVersion));
  }
  if (header >> extra) throw FormatError("model header: trailing fields");
  const std::uint64_t max_span = detail::parse_header_field(max_field, "max_span=");
  const std::uint64_t total = detail::parse_header_field(total_field, "token_total=");
  if (max_span == 0 || total == 0) {
    throw FormatError("model header: max_span and token_total must be positive");
  }

  SpanCountModel::CountMap counts;
  std::uint64_t unigram_sum = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = "model line " + std::to_string(line_no) + ": ";
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw FormatError(where + "expected '<span>\\t<count>'");
    }
    Span span;
    try {
      span = parse_span(std::string_view(line).substr(0, tab));
    } catch (const ContractError& e) {
      throw FormatError(where + e.what());
    }
    std::string_view count_text = std::string_view(line).substr(tab + 1);
    std::uint64_t c = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(),
                                     count_text.data() + count_text.size(), c);
    if (count_text.empty() || ec != std::errc() ||
        ptr != count_text.data() + count_text.size() || c == 0) {
      throw FormatError(where + "count must be a positive integer");
    }
    if (span.size() > max_span) throw FormatError(where + "span exceeds max_span");
    if (span.size() == 1) unigram_sum += c;
    if (!counts.emplace(std::move(span), c).second) {
      throw FormatError(where + "duplicate span");
    }
  }
  if (in.bad()) throw FormatError("model: read failure");
  if (unigram_sum != total) {
    throw FormatError("model: single-unit counts sum to " +
                      std::to_string(unigram_sum) + ", header says " +
                      std::to_string(total));
  }
  return SpanCountModel(max_span, total, std::move(counts));
}

inline SpanCountModel load_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_model(in);
}

}  // namespace unitlang

#endif  // UNITLANG_NGRAM_HPP
