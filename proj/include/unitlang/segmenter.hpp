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

#ifndef UNITLANG_SEGMENTER_HPP
#define UNITLANG_SEGMENTER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "unitlang/error.hpp"
#include "unitlang/ngram.hpp"
#include "unitlang/span.hpp"

namespace unitlang {

enum class NgramOrder { kUnigram = 1, kBigram = 2 };

// kExact searches over (position, last word length) states and is globally
// optimal for the bigram score. kPaper conditions every candidate word on
// the single best path stored for its prefix, which is greedy.
enum class BigramVariant { kExact, kPaper };

inline constexpr double kTieTolerance = 1e-9;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct SegmentationConfig {
  std::size_t max_word_length = 3;  // K
  NgramOrder order = NgramOrder::kBigram;
  BigramVariant variant = BigramVariant::kExact;
  // Score of a single unit never seen in training. Defaults to ln(0.5 / T).
  std::optional<double> unseen_unit_floor;
  // Added to the word's unigram score when the bigram was never seen.
  double backoff_weight = std::log(0.1);
  // Longest input segment_exhaustive() accepts.
  std::size_t oracle_limit = 16;
};

struct Segmentation {
  std::vector<Span> words;
  double logprob = 0.0;
  // k_star[i] is the length of the best final word for the prefix of
  // length i + 1.
  std::vector<std::size_t> k_star;
};

inline std::string render(const Segmentation& seg) { return render_words(seg.words); }

// Checks cfg against the model it will be used with.
inline void validate(const SegmentationConfig& cfg, const SpanCountModel& model) {
  const std::size_t k = cfg.max_word_length;
  if (k == 0) throw ContractError("K must be >= 1");
  if (cfg.unseen_unit_floor && !(*cfg.unseen_unit_floor < 0.0)) {
    throw ContractError("unseen_unit_floor must be negative");
  }
  if (!(cfg.backoff_weight < 0.0)) {
    throw ContractError("backoff_weight must be negative");
  }
  const std::size_t needed = cfg.order == NgramOrder::kBigram ? 2 * k : k;
  if (model.max_span() < needed) {
    throw ContractError("model max_span " + std::to_string(model.max_span()) +
                        " < " + std::to_string(needed) + " required for K=" +
                        std::to_string(k) +
                        (cfg.order == NgramOrder::kBigram ? " (2-gram needs 2K)"
                                                          : ""));
  }
}

// Binds a model and a validated config. Cheap to copy; holds a reference
// to the model, which must outlive it.
class Segmenter {
 public:
  Segmenter(const SpanCountModel& model, SegmentationConfig cfg)
      : model_(&model), cfg_(std::move(cfg)) {
    validate(cfg_, model);
    floor_ = cfg_.unseen_unit_floor.value_or(
        std::log(0.5 / static_cast<double>(model.token_total())));
  }

  const SegmentationConfig& config() const noexcept { return cfg_; }
  const SpanCountModel& model() const noexcept { return *model_; }
  double unseen_unit_floor() const noexcept { return floor_; }

  // Unigram word score: ln(count/T), the floor for an unseen single unit,
  // -inf for an unseen multi-unit word.
  double word_score(SpanView word) const {
    check_word(word);
    if (auto lp = span_logprob(*model_, word)) return *lp;
    return word.size() == 1 ? floor_ : kNegInf;
  }

  // Bigram transition score of `word` after `prev`.
  double transition_score(SpanView prev, SpanView word) const {
    check_word(prev);
    const double unigram = word_score(word);
    if (unigram == kNegInf) return kNegInf;
    if (model_->count(prev) > 0) {
      if (auto lp = conditional_logprob(*model_, word, prev)) return *lp;
    }
    return cfg_.backoff_weight + unigram;
  }

  double score_1gram(const std::vector<Span>& words) const {
    double total = 0.0;
    for (const auto& w : words) total += word_score(w);
    return total;
  }

  double score_2gram(const std::vector<Span>& words) const {
    if (words.empty()) return 0.0;
    double total = word_score(words.front());
    for (std::size_t t = 1; t < words.size(); ++t) {
      total += transition_score(words[t - 1], words[t]);
    }
    return total;
  }

  double score(const std::vector<Span>& words) const {
    return cfg_.order == NgramOrder::kUnigram ? score_1gram(words)
                                              : score_2gram(words);
  }

  Segmentation segment(SpanView seq) const {
    if (seq.empty()) return {};
    const SpanTable table(*model_, seq, table_width());
    if (cfg_.order == NgramOrder::kUnigram) return segment_unigram(seq, table);
    if (cfg_.variant == BigramVariant::kPaper) return segment_paper(seq, table);
    return segment_exact(seq, table);
  }

  // Scores every segmentation with word lengths <= K and keeps the best,
  // preferring longer words from the end backwards on ties.
  Segmentation segment_exhaustive(SpanView seq) const {
    if (seq.size() > cfg_.oracle_limit) {
      throw OracleLimitError("input of length " + std::to_string(seq.size()) +
                             " exceeds oracle limit " +
                             std::to_string(cfg_.oracle_limit));
    }
    Segmentation best;
    if (seq.empty()) return best;
    best.logprob = kNegInf;
    bool have_best = false;
    std::vector<Span> words;
    enumerate(seq, 0, words, [&](const std::vector<Span>& candidate) {
      const double s = score(candidate);
      if (s == kNegInf) return;
      bool take = !have_best || s > best.logprob + kTieTolerance;
      if (!take && s >= best.logprob - kTieTolerance) {
        take = prefers_longer_tail(candidate, best.words);
      }
      if (take) {
        best.words = candidate;
        best.logprob = s;
        have_best = true;
      }
    });
    return best;
  }

 private:
  // Counts of seq[start, start + len) for len in 1..width.
  class SpanTable {
   public:
    SpanTable(const SpanCountModel& model, SpanView seq, std::size_t width)
        : width_(width), counts_(seq.size() * width, 0) {
      for (std::size_t start = 0; start < seq.size(); ++start) {
        const std::size_t longest = std::min(width, seq.size() - start);
        for (std::size_t len = 1; len <= longest; ++len) {
          counts_[start * width + len - 1] = model.count(seq.subspan(start, len));
        }
      }
    }
    std::uint64_t operator()(std::size_t start, std::size_t len) const {
      return counts_[start * width_ + len - 1];
    }

   private:
    std::size_t width_;
    std::vector<std::uint64_t> counts_;
  };

  std::size_t table_width() const noexcept {
    return cfg_.order == NgramOrder::kBigram ? 2 * cfg_.max_word_length
                                             : cfg_.max_word_length;
  }

  void check_word(SpanView word) const {
    if (word.empty() || word.size() > cfg_.max_word_length) {
      throw ContractError("word length " + std::to_string(word.size()) +
                          " outside 1..K=" + std::to_string(cfg_.max_word_length));
    }
  }

  // Same arithmetic as span_logprob / conditional_logprob so DP totals and
  // rescored totals agree bit for bit.
  double table_word_score(const SpanTable& t, std::size_t start,
                          std::size_t len) const {
    const std::uint64_t c = t(start, len);
    if (c > 0) {
      return std::log(static_cast<double>(c) /
                      static_cast<double>(model_->token_total()));
    }
    return len == 1 ? floor_ : kNegInf;
  }

  double table_transition(const SpanTable& t, std::size_t prev_start,
                          std::size_t prev_len, std::size_t len,
                          double unigram) const {
    const std::uint64_t prev = t(prev_start, prev_len);
    if (prev > 0) {
      const std::uint64_t joined = t(prev_start, prev_len + len);
      if (joined > 0) {
        return std::log(static_cast<double>(joined) / static_cast<double>(prev));
      }
    }
    return cfg_.backoff_weight + unigram;
  }

  // Candidates arrive in increasing length order, so accepting near-ties
  // hands them to the longer word.
  static bool accept(double candidate, double current) {
    if (candidate == kNegInf) return false;
    if (current == kNegInf) return true;
    return candidate >= current - kTieTolerance;
  }

  static bool prefers_longer_tail(const std::vector<Span>& a,
                                  const std::vector<Span>& b) {
    auto ia = a.rbegin();
    auto ib = b.rbegin();
    for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib) {
      if (ia->size() != ib->size()) return ia->size() > ib->size();
    }
    return false;
  }

  template <typename Visit>
  void enumerate(SpanView seq, std::size_t pos, std::vector<Span>& words,
                 Visit&& visit) const {
    if (pos == seq.size()) {
      visit(words);
      return;
    }
    const std::size_t longest = std::min(cfg_.max_word_length, seq.size() - pos);
    for (std::size_t len = 1; len <= longest; ++len) {
      auto w = seq.subspan(pos, len);
      words.emplace_back(w.begin(), w.end());
      enumerate(seq, pos + len, words, visit);
      words.pop_back();
    }
  }

  static Segmentation from_lengths(SpanView seq, std::vector<std::size_t> lengths,
                                   double logprob, std::vector<std::size_t> k_star) {
    Segmentation seg;
    seg.logprob = logprob;
    seg.k_star = std::move(k_star);
    std::reverse(lengths.begin(), lengths.end());
    std::size_t pos = 0;
    seg.words.reserve(lengths.size());
    for (std::size_t len : lengths) {
      auto w = seq.subspan(pos, len);
      seg.words.emplace_back(w.begin(), w.end());
      pos += len;
    }
    return seg;
  }

  Segmentation segment_unigram(SpanView seq, const SpanTable& t) const {
    const std::size_t n = seq.size();
    const std::size_t cap = cfg_.max_word_length;
    std::vector<double> best(n + 1, kNegInf);
    std::vector<std::size_t> k_star(n, 0);
    best[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 1; k <= std::min(cap, i); ++k) {
        const double w = table_word_score(t, i - k, k);
        if (w == kNegInf || best[i - k] == kNegInf) continue;
        const double cand = best[i - k] + w;
        if (accept(cand, best[i])) {
          best[i] = cand;
          k_star[i - 1] = k;
        }
      }
    }
    std::vector<std::size_t> lengths;
    for (std::size_t pos = n; pos > 0; pos -= k_star[pos - 1]) {
      lengths.push_back(k_star[pos - 1]);
    }
    return from_lengths(seq, std::move(lengths), best[n], std::move(k_star));
  }

  // best[i][l]: best score of seq[0, i) whose last word has length l.
  Segmentation segment_exact(SpanView seq, const SpanTable& t) const {
    const std::size_t n = seq.size();
    const std::size_t cap = cfg_.max_word_length;
    const std::size_t stride = cap + 1;
    std::vector<double> best((n + 1) * stride, kNegInf);
    std::vector<std::size_t> back((n + 1) * stride, 0);
    std::vector<std::size_t> k_star(n, 0);
    for (std::size_t i = 1; i <= n; ++i) {
      double best_here = kNegInf;
      for (std::size_t l = 1; l <= std::min(cap, i); ++l) {
        const double unigram = table_word_score(t, i - l, l);
        if (unigram == kNegInf) continue;
        double& cell = best[i * stride + l];
        if (l == i) {
          cell = unigram;
        } else {
          const std::size_t start = i - l;
          for (std::size_t pl = 1; pl <= std::min(cap, start); ++pl) {
            const double prev = best[start * stride + pl];
            if (prev == kNegInf) continue;
            const double cand =
                prev + table_transition(t, start - pl, pl, l, unigram);
            if (accept(cand, cell)) {
              cell = cand;
              back[i * stride + l] = pl;
            }
          }
        }
        if (accept(cell, best_here)) {
          best_here = cell;
          k_star[i - 1] = l;
        }
      }
    }
    std::vector<std::size_t> lengths;
    std::size_t pos = n;
    std::size_t len = k_star[n - 1];
    const double total = best[n * stride + len];
    while (pos > 0) {
      lengths.push_back(len);
      const std::size_t prev_len = back[pos * stride + len];
      pos -= len;
      len = prev_len;
    }
    return from_lengths(seq, std::move(lengths), total, std::move(k_star));
  }

  // Literal recursion: the candidate word ending at i with length k is
  // conditioned on the stored best final word k_star of prefix i - k.
  Segmentation segment_paper(SpanView seq, const SpanTable& t) const {
    const std::size_t n = seq.size();
    const std::size_t cap = cfg_.max_word_length;
    std::vector<double> best(n + 1, kNegInf);
    std::vector<std::size_t> k_star(n, 0);
    best[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 1; k <= std::min(cap, i); ++k) {
        const double unigram = table_word_score(t, i - k, k);
        if (unigram == kNegInf) continue;
        double cand = unigram;
        if (k < i) {
          const std::size_t start = i - k;
          if (best[start] == kNegInf) continue;
          const std::size_t prev_len = k_star[start - 1];
          cand = best[start] +
                 table_transition(t, start - prev_len, prev_len, k, unigram);
        }
        if (accept(cand, best[i])) {
          best[i] = cand;
          k_star[i - 1] = k;
        }
      }
    }
    std::vector<std::size_t> lengths;
    for (std::size_t pos = n; pos > 0; pos -= k_star[pos - 1]) {
      lengths.push_back(k_star[pos - 1]);
    }
    return from_lengths(seq, std::move(lengths), best[n], std::move(k_star));
  }

  const SpanCountModel* model_;
  SegmentationConfig cfg_;
  double floor_ = 0.0;
};

inline double score_1gram(const std::vector<Span>& words,
                          const SpanCountModel& model,
                          const SegmentationConfig& cfg) {
  SegmentationConfig c = cfg;
  c.order = NgramOrder::kUnigram;
  return Segmenter(model, c).score_1gram(words);
}

inline double score_2gram(const std::vector<Span>& words,
                          const SpanCountModel& model,
                          const SegmentationConfig& cfg) {
  SegmentationConfig c = cfg;
  c.order = NgramOrder::kBigram;
  return Segmenter(model, c).score_2gram(words);
}

inline Segmentation segment(SpanView seq, const SpanCountModel& model,
                            const SegmentationConfig& cfg) {
  return Segmenter(model, cfg).segment(seq);
}

inline Segmentation segment_exhaustive(SpanView seq, const SpanCountModel& model,
                                       const SegmentationConfig& cfg) {
  return Segmenter(model, cfg).segment_exhaustive(seq);
}

}  // namespace unitlang

#endif  // UNITLANG_SEGMENTER_HPP
