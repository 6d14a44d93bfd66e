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

#ifndef UNITLANG_ANALYSIS_HPP
#define UNITLANG_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unitlang/error.hpp"

namespace unitlang {

// ---------------------------------------------------------------------------
// Length statistics
// ---------------------------------------------------------------------------

// Token count of every line of one tokenized file.
struct TokenFile {
  std::string name;
  std::vector<std::size_t> line_lengths;
};

inline std::size_t count_tokens(std::string_view line) {
  std::size_t n = 0;
  bool in_token = false;
  for (char c : line) {
    const bool blank = c == ' ' || c == '\t' || c == '\r';
    if (!blank && !in_token) ++n;
    in_token = !blank;
  }
  return n;
}

inline TokenFile read_token_file(std::string name, std::istream& in) {
  TokenFile f{std::move(name), {}};
  std::string line;
  while (std::getline(in, line)) f.line_lengths.push_back(count_tokens(line));
  if (in.bad()) throw Error("read failure in " + f.name);
  return f;
}

struct LengthReport {
  struct Ratio {
    std::string numerator;
    std::string denominator;
    double value;
  };
  // Mean tokens per line, in input order.
  std::vector<std::pair<std::string, double>> averages;
  std::vector<Ratio> ratios;

  double average(std::string_view name) const {
    for (const auto& [n, v] : averages) {
      if (n == name) return v;
    }
    throw ContractError("no representation named '" + std::string(name) + "'");
  }
};

// Per-file mean tokens per line, plus avg(a) / avg(b) for each requested
// (a, b). All files must have the same number of lines.
inline LengthReport length_stats(
    const std::vector<TokenFile>& files,
    const std::vector<std::pair<std::string, std::string>>& ratio_pairs = {}) {
  LengthReport report;
  for (const auto& f : files) {
    if (f.line_lengths.size() != files.front().line_lengths.size()) {
      throw ContractError("line count mismatch: " + files.front().name + " has " +
                          std::to_string(files.front().line_lengths.size()) +
                          " lines, " + f.name + " has " +
                          std::to_string(f.line_lengths.size()));
    }
    double total = 0.0;
    for (std::size_t len : f.line_lengths) total += static_cast<double>(len);
    const double avg =
        f.line_lengths.empty() ? 0.0 : total / static_cast<double>(f.line_lengths.size());
    report.averages.emplace_back(f.name, avg);
  }
  for (const auto& [a, b] : ratio_pairs) {
    const double denom = report.average(b);
    if (denom <= 0.0) {
      throw ContractError("ratio " + a + "/" + b + ": denominator average is zero");
    }
    report.ratios.push_back({a, b, report.average(a) / denom});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sparseness
// ---------------------------------------------------------------------------

struct RepresentationSet {
  struct Vector {
    int layer = 0;
    std::vector<double> values;
  };
  std::vector<Vector> vectors;
};

namespace detail {

inline std::vector<double> parse_reals(std::string_view line, std::size_t line_no) {
  std::vector<double> out;
  std::string buf(line);
  const char* p = buf.c_str();
  while (true) {
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    if (*p == '\0') break;
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p || (*end != '\0' && *end != ' ' && *end != '\t' && *end != '\r')) {
      throw ParseError(line_no, static_cast<std::size_t>(p - buf.c_str()) + 1,
                       "malformed number");
    }
    if (!std::isfinite(v)) {
      throw ParseError(line_no, static_cast<std::size_t>(p - buf.c_str()) + 1,
                       "non-finite value");
    }
    out.push_back(v);
    p = end;
  }
  return out;
}

}  // namespace detail

// Each vector is a line of decimals; a "# layer <k>" line tags the vectors
// that follow it. Blank lines are ignored.
inline RepresentationSet parse_representations(std::istream& in) {
  RepresentationSet set;
  std::string line;
  std::size_t line_no = 0;
  bool have_layer = false;
  int layer = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.front() == '#') {
      std::istringstream tag(line.substr(1));
      std::string word, extra;
      if (!(tag >> word >> layer) || word != "layer" || (tag >> extra)) {
        throw ParseError(line_no, 0, "expected '# layer <k>'");
      }
      have_layer = true;
      continue;
    }
    if (!have_layer) throw ParseError(line_no, 0, "vector before any '# layer' tag");
    set.vectors.push_back({layer, detail::parse_reals(line, line_no)});
  }
  if (in.bad()) throw Error("read failure in representation dump");
  return set;
}

// Per layer, the fraction of entries with |x| < threshold.
inline std::map<int, double> sparseness(const RepresentationSet& reps,
                                        double threshold = 1e-3) {
  if (!(threshold > 0.0)) throw ContractError("threshold must be positive");
  std::map<int, std::pair<std::size_t, std::size_t>> tally;  // below, total
  for (const auto& v : reps.vectors) {
    auto& [below, total] = tally[v.layer];
    for (double x : v.values) {
      if (std::fabs(x) < threshold) ++below;
    }
    total += v.values.size();
  }
  std::map<int, double> out;
  for (const auto& [layer, t] : tally) {
    if (t.second == 0) continue;
    out[layer] = static_cast<double>(t.first) / static_cast<double>(t.second);
  }
  if (out.empty()) throw ContractError("representation set has no entries");
  return out;
}

// ---------------------------------------------------------------------------
// Localness
// ---------------------------------------------------------------------------

// Row-major attention weights; row i holds query position i.
struct AttentionMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> weights;

  double operator()(std::size_t i, std::size_t j) const { return weights[i * cols + j]; }
};

inline constexpr double kRowSumTolerance = 1e-6;

// Entries must be finite and non-negative, rows must sum to 1.
inline void validate(const AttentionMatrix& att) {
  if (att.weights.size() != att.rows * att.cols) {
    throw ContractError("attention matrix has wrong number of entries");
  }
  for (std::size_t i = 0; i < att.rows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < att.cols; ++j) {
      const double w = att(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw ContractError("attention row " + std::to_string(i) +
                            " has a negative or non-finite weight");
      }
      sum += w;
    }
    if (std::fabs(sum - 1.0) > kRowSumTolerance) {
      throw ContractError("attention row " + std::to_string(i) + " sums to " +
                          std::to_string(sum));
    }
  }
}

// Reads every "<n> <m>" header plus n rows in the stream.
inline std::vector<AttentionMatrix> parse_attention(std::istream& in) {
  std::vector<AttentionMatrix> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto header = detail::parse_reals(line, line_no);
    if (header.size() != 2 || header[0] < 0 || header[1] < 0 ||
        header[0] != std::floor(header[0]) || header[1] != std::floor(header[1])) {
      throw ParseError(line_no, 0, "expected '<rows> <cols>' header");
    }
    AttentionMatrix att;
    att.rows = static_cast<std::size_t>(header[0]);
    att.cols = static_cast<std::size_t>(header[1]);
    if (att.rows != att.cols) {
      throw ContractError("attention matrix is " + std::to_string(att.rows) + "x" +
                          std::to_string(att.cols) + ", expected square");
    }
    att.weights.reserve(att.rows * att.cols);
    for (std::size_t i = 0; i < att.rows; ++i) {
      if (!std::getline(in, line)) throw ParseError(line_no + 1, 0, "missing attention row");
      ++line_no;
      auto row = detail::parse_reals(line, line_no);
      if (row.size() != att.cols) {
        throw ParseError(line_no, 0, "expected " + std::to_string(att.cols) + " weights");
      }
      att.weights.insert(att.weights.end(), row.begin(), row.end());
    }
    validate(att);
    out.push_back(std::move(att));
  }
  if (in.bad()) throw Error("read failure in attention dump");
  return out;
}

// Mean over query rows of the attention mass on keys j with |i - j| <= window.
inline double localness(const AttentionMatrix& att, std::size_t window = 10) {
  if (att.rows != att.cols) {
    throw ContractError("localness needs a square attention matrix");
  }
  if (att.rows == 0) throw ContractError("empty attention matrix");
  double total = 0.0;
  for (std::size_t i = 0; i < att.rows; ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(att.cols - 1, i + window);
    double row = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) row += att(i, j);
    total += row;
  }
  return total / static_cast<double>(att.rows);
}

}  // namespace unitlang

#endif  // UNITLANG_ANALYSIS_HPP
