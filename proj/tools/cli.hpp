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

#ifndef UNITLANG_TOOLS_CLI_HPP
#define UNITLANG_TOOLS_CLI_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unitlang/unitlang.hpp"

namespace unitlang::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kContract = 3,
  kIo = 4,
  kFormat = 5,
  kCheckFailed = 6,
};

class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

// Writes through a sibling temp file and renames it over `path`, so readers
// never see a partial file.
inline void write_atomically(const std::string& path,
                             const std::function<void(std::ostream&)>& body) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    body(out);
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write failure on '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto '" + path + "'");
  }
}

// Optional --out: file when given, otherwise the provided stream.
inline void emit(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    fallback.flush();
  } else {
    write_atomically(path, body);
  }
}

inline Corpus read_corpus(const std::string& path, bool dedup) {
  auto in = open_input(path);
  Corpus corpus = parse_corpus(in);
  return dedup ? collapse_repetitions(corpus) : corpus;
}

inline SpanCountModel read_model(const std::string& path) {
  auto in = open_input(path);
  return load_model(in);
}

inline std::vector<std::vector<Span>> read_word_lines(const std::string& path) {
  auto in = open_input(path);
  std::vector<std::vector<Span>> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      lines.push_back(parse_words(line));
    } catch (const ContractError& e) {
      throw ParseError(line_no, 0, e.what());
    }
  }
  return lines;
}

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_lines(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace detail

struct RunConfig {
  std::string in;
  std::string out;
  std::string model;
  std::string merges_path;
  std::string vocab_path;
  std::vector<std::string> named_inputs;
  std::vector<std::string> ratios;
  std::size_t k = 3;
  int order = 2;
  std::string variant = "exact";
  std::size_t max_span = 6;
  std::uint64_t min_count = 1;
  std::size_t num_merges = 10000;
  std::size_t size_cap = 10000;
  double threshold = 1e-3;
  std::size_t window = 10;
  bool dedup = false;
  std::size_t threads = 1;
  double backoff = 0.1;
  std::optional<double> unseen_floor;
  std::size_t max_len = 12;
  std::size_t samples = 200;
  std::uint64_t seed = 1;
};

namespace detail {

inline SegmentationConfig segmentation_config(const RunConfig& rc) {
  SegmentationConfig cfg;
  cfg.max_word_length = rc.k;
  cfg.order = rc.order == 1 ? NgramOrder::kUnigram : NgramOrder::kBigram;
  cfg.variant = rc.variant == "paper" ? BigramVariant::kPaper : BigramVariant::kExact;
  if (!(rc.backoff > 0.0 && rc.backoff < 1.0)) {
    throw ContractError("--backoff must be in (0, 1)");
  }
  cfg.backoff_weight = std::log(rc.backoff);
  cfg.unseen_unit_floor = rc.unseen_floor;
  return cfg;
}

inline void cmd_count(const RunConfig& rc, std::ostream&) {
  const Corpus corpus = read_corpus(rc.in, rc.dedup);
  SpanCountModel model = count_spans(corpus, rc.max_span, rc.threads);
  if (rc.min_count > 1) model = prune(model, rc.min_count);
  write_atomically(rc.out, [&](std::ostream& o) { save_model(o, model); });
}

inline void cmd_prune(const RunConfig& rc, std::ostream&) {
  const SpanCountModel model = prune(read_model(rc.model), rc.min_count);
  write_atomically(rc.out, [&](std::ostream& o) { save_model(o, model); });
}

inline void cmd_segment(const RunConfig& rc, std::ostream&) {
  const SpanCountModel model = read_model(rc.model);
  const Segmenter segmenter(model, segmentation_config(rc));
  const Corpus corpus = read_corpus(rc.in, rc.dedup);
  const auto lines = parallel_map(corpus.sequences, rc.threads, [&](const UnitSequence& s) {
    return render(segmenter.segment(s.units));
  });
  write_atomically(rc.out, [&](std::ostream& o) { write_lines(o, lines); });
}

inline int cmd_oracle_check(const RunConfig& rc, std::ostream& stdout_stream) {
  const SpanCountModel model = read_model(rc.model);
  const Segmenter segmenter(model, segmentation_config(rc));
  if (rc.max_len > segmenter.config().oracle_limit) {
    throw ContractError("--max-len " + std::to_string(rc.max_len) +
                        " exceeds oracle limit " +
                        std::to_string(segmenter.config().oracle_limit));
  }
  std::vector<UnitId> alphabet;
  for (const auto& [span, c] : model.sorted_entries()) {
    if (span.size() == 1) alphabet.push_back(span.front());
  }
  // Inputs are drawn up front so the result is independent of --threads.
  std::mt19937_64 rng(rc.seed);
  std::uniform_int_distribution<std::size_t> len_dist(1, std::max<std::size_t>(1, rc.max_len));
  std::uniform_int_distribution<std::size_t> unit_dist(0, alphabet.size() - 1);
  std::vector<std::vector<UnitId>> inputs(rc.samples);
  for (auto& input : inputs) {
    input.resize(rc.max_len == 0 ? 0 : len_dist(rng));
    for (auto& u : input) u = alphabet[unit_dist(rng)];
  }
  const auto mismatch = parallel_map(inputs, rc.threads, [&](const std::vector<UnitId>& input) {
    const double dp = segmenter.segment(input).logprob;
    const double oracle = segmenter.segment_exhaustive(input).logprob;
    return static_cast<int>(std::fabs(dp - oracle) > kTieTolerance);
  });
  std::size_t mismatches = 0;
  for (int m : mismatch) mismatches += static_cast<std::size_t>(m);
  const bool exact = segmenter.config().order == NgramOrder::kUnigram ||
                     segmenter.config().variant == BigramVariant::kExact;
  std::ostringstream report;
  report << "order=" << rc.order << " variant=" << (rc.order == 1 ? "exact" : rc.variant)
         << " k=" << rc.k << " max_len=" << rc.max_len << " samples=" << rc.samples
         << " mismatches=" << mismatches << " disagreement_rate="
         << format_real(rc.samples ? static_cast<double>(mismatches) /
                                         static_cast<double>(rc.samples)
                                   : 0.0)
         << '\n';
  emit(rc.out, stdout_stream, [&](std::ostream& o) { o << report.str(); });
  return exact && mismatches > 0 ? kCheckFailed : kOk;
}

inline void cmd_bpe_train(const RunConfig& rc, std::ostream&) {
  const BpeMergeTable table = bpe_train(read_corpus(rc.in, rc.dedup), rc.num_merges);
  write_atomically(rc.out, [&](std::ostream& o) { save_merges(o, table); });
}

inline void cmd_bpe_apply(const RunConfig& rc, std::ostream&) {
  BpeMergeTable table;
  {
    auto in = open_input(rc.merges_path);
    table = load_merges(in);
  }
  const BpeApplier applier(table);
  const Corpus corpus = read_corpus(rc.in, rc.dedup);
  const auto lines = parallel_map(corpus.sequences, rc.threads, [&](const UnitSequence& s) {
    return render_words(applier.apply(s.units));
  });
  write_atomically(rc.out, [&](std::ostream& o) { write_lines(o, lines); });
}

inline void cmd_vocab(const RunConfig& rc, std::ostream&) {
  const auto vocab = build_vocab(read_word_lines(rc.in), rc.size_cap);
  write_atomically(rc.out, [&](std::ostream& o) { save_vocab(o, vocab); });
}

inline void cmd_encode(const RunConfig& rc, std::ostream&) {
  UnitWordVocabulary vocab;
  {
    auto in = open_input(rc.vocab_path);
    vocab = load_vocab(in);
  }
  const auto word_lines = read_word_lines(rc.in);
  const auto lines = parallel_map(word_lines, rc.threads, [&](const std::vector<Span>& words) {
    std::string line;
    for (WordId id : encode(words, vocab)) {
      if (!line.empty()) line.push_back(' ');
      line += std::to_string(id);
    }
    return line;
  });
  write_atomically(rc.out, [&](std::ostream& o) { write_lines(o, lines); });
}

inline void cmd_stats(const RunConfig& rc, std::ostream& stdout_stream) {
  std::vector<TokenFile> files;
  for (const auto& spec : rc.named_inputs) {
    const auto eq = spec.find('=');
    std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
    std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    auto in = open_input(path);
    files.push_back(read_token_file(std::move(name), in));
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& r : rc.ratios) {
    const auto slash = r.find('/');
    if (slash == std::string::npos) throw ContractError("--ratio expects <a>/<b>");
    pairs.emplace_back(r.substr(0, slash), r.substr(slash + 1));
  }
  const LengthReport report = length_stats(files, pairs);
  emit(rc.out, stdout_stream, [&](std::ostream& o) {
    for (const auto& [name, avg] : report.averages) o << name << '\t' << format_real(avg) << '\n';
    for (const auto& r : report.ratios) {
      o << r.numerator << '/' << r.denominator << '\t' << format_real(r.value) << '\n';
    }
  });
}

inline void cmd_sparseness(const RunConfig& rc, std::ostream& stdout_stream) {
  auto in = open_input(rc.in);
  const auto per_layer = sparseness(parse_representations(in), rc.threshold);
  emit(rc.out, stdout_stream, [&](std::ostream& o) {
    for (const auto& [layer, v] : per_layer) o << "layer " << layer << '\t' << format_real(v) << '\n';
  });
}

inline void cmd_localness(const RunConfig& rc, std::ostream& stdout_stream) {
  auto in = open_input(rc.in);
  const auto matrices = parse_attention(in);
  if (matrices.empty()) throw ContractError("attention dump holds no matrices");
  const auto values = parallel_map(matrices, rc.threads, [&](const AttentionMatrix& m) {
    return localness(m, rc.window);
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  emit(rc.out, stdout_stream, [&](std::ostream& o) {
    for (std::size_t i = 0; i < values.size(); ++i) o << i << '\t' << format_real(values[i]) << '\n';
    o << "mean\t" << format_real(sum / static_cast<double>(values.size())) << '\n';
  });
}

inline void cmd_dedup(const RunConfig& rc, std::ostream&) {
  const Corpus corpus = read_corpus(rc.in, true);
  write_atomically(rc.out, [&](std::ostream& o) { write_corpus(o, corpus); });
}

}  // namespace detail

// Parses argv (program name first) and runs one subcommand. Diagnostics go
// to `err` as a single line.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  RunConfig rc;
  CLI::App app{"Unit-language construction and analysis for discrete speech units", "unitlang"};
  app.require_subcommand(1);

  auto threads = [&](CLI::App* sub) {
    sub->add_option("--threads", rc.threads, "Worker threads")->check(CLI::Range(1, 1024));
  };
  auto dedup = [&](CLI::App* sub) {
    sub->add_flag("--dedup", rc.dedup, "Collapse continuous repetitions first");
  };
  auto input = [&](CLI::App* sub, const char* what) {
    sub->add_option("--in", rc.in, what)->required();
  };
  auto output = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--out", rc.out, "Output path");
    if (required) opt->required();
  };
  auto seg_options = [&](CLI::App* sub) {
    sub->add_option("--model", rc.model, "Span count model")->required();
    sub->add_option("--k", rc.k, "Max units per word")->check(CLI::Range(1, 64));
    sub->add_option("--order", rc.order, "N-gram order (1 or 2)")->check(CLI::Range(1, 2));
    sub->add_option("--variant", rc.variant, "2-gram DP: exact or paper")
        ->check(CLI::IsMember({"exact", "paper"}));
    sub->add_option("--backoff", rc.backoff, "Bigram backoff multiplier in (0,1)");
    sub->add_option("--unseen-floor", rc.unseen_floor, "Log score of an unseen unit");
  };

  auto* count = app.add_subcommand("count", "Count unit spans into a model");
  input(count, "Unit corpus");
  output(count, true);
  count->add_option("--max-span", rc.max_span, "Longest span counted")->check(CLI::Range(1, 64));
  count->add_option("--min-count", rc.min_count, "Prune multi-unit spans below this")
      ->check(CLI::Range(1, 1 << 30));
  dedup(count);
  threads(count);

  auto* prune_cmd = app.add_subcommand("prune", "Drop rare multi-unit spans from a model");
  prune_cmd->add_option("--model", rc.model, "Span count model")->required();
  prune_cmd->add_option("--min-count", rc.min_count, "Minimum count kept")
      ->required()
      ->check(CLI::Range(1, 1 << 30));
  output(prune_cmd, true);
  threads(prune_cmd);

  auto* segment_cmd = app.add_subcommand("segment", "Convert unit sequences to unit language");
  seg_options(segment_cmd);
  input(segment_cmd, "Unit corpus");
  output(segment_cmd, true);
  dedup(segment_cmd);
  threads(segment_cmd);

  auto* oracle = app.add_subcommand("oracle-check", "Compare the DP with exhaustive search");
  seg_options(oracle);
  oracle->add_option("--max-len", rc.max_len, "Longest random input");
  oracle->add_option("--samples", rc.samples, "Number of random inputs");
  oracle->add_option("--seed", rc.seed, "RNG seed");
  output(oracle, false);
  threads(oracle);

  auto* bpe_train_cmd = app.add_subcommand("bpe-train", "Learn a BPE merge table");
  input(bpe_train_cmd, "Unit corpus");
  output(bpe_train_cmd, true);
  bpe_train_cmd->add_option("--merges", rc.num_merges, "Maximum number of merges")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40));
  dedup(bpe_train_cmd);
  threads(bpe_train_cmd);

  auto* bpe_apply_cmd = app.add_subcommand("bpe-apply", "Segment units with a BPE merge table");
  bpe_apply_cmd->add_option("--merges", rc.merges_path, "Merge table")->required();
  input(bpe_apply_cmd, "Unit corpus");
  output(bpe_apply_cmd, true);
  dedup(bpe_apply_cmd);
  threads(bpe_apply_cmd);

  auto* vocab_cmd = app.add_subcommand("vocab", "Build a size-capped unit-word vocabulary");
  input(vocab_cmd, "Unit-language text");
  output(vocab_cmd, true);
  vocab_cmd->add_option("--size-cap", rc.size_cap, "Maximum vocabulary size")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 32));
  threads(vocab_cmd);

  auto* encode_cmd = app.add_subcommand("encode", "Map unit-language text to vocabulary ids");
  encode_cmd->add_option("--vocab", rc.vocab_path, "Vocabulary file")->required();
  input(encode_cmd, "Unit-language text");
  output(encode_cmd, true);
  threads(encode_cmd);

  auto* stats_cmd = app.add_subcommand("stats", "Average tokens per line");
  stats_cmd->add_option("--in", rc.named_inputs, "name=path of a tokenized file")->required();
  stats_cmd->add_option("--ratio", rc.ratios, "a/b ratio of averages to report");
  output(stats_cmd, false);
  threads(stats_cmd);

  auto* sparse_cmd = app.add_subcommand("sparseness", "Fraction of near-zero entries per layer");
  input(sparse_cmd, "Representation dump");
  sparse_cmd->add_option("--threshold", rc.threshold, "Absolute-value threshold")
      ->check(CLI::PositiveNumber);
  output(sparse_cmd, false);
  threads(sparse_cmd);

  auto* local_cmd = app.add_subcommand("localness", "Attention mass near the diagonal");
  input(local_cmd, "Attention dump");
  local_cmd->add_option("--window", rc.window, "Half-width of the window");
  output(local_cmd, false);
  threads(local_cmd);

  auto* dedup_cmd = app.add_subcommand("dedup", "Collapse continuous unit repetitions");
  input(dedup_cmd, "Unit corpus");
  output(dedup_cmd, true);
  threads(dedup_cmd);

  std::vector<char*> argv;
  std::vector<std::string> storage(args);
  if (storage.empty()) storage.push_back("unitlang");
  for (auto& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "unitlang: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (count->parsed()) detail::cmd_count(rc, out);
    else if (prune_cmd->parsed()) detail::cmd_prune(rc, out);
    else if (segment_cmd->parsed()) detail::cmd_segment(rc, out);
    else if (oracle->parsed()) return detail::cmd_oracle_check(rc, out);
    else if (bpe_train_cmd->parsed()) detail::cmd_bpe_train(rc, out);
    else if (bpe_apply_cmd->parsed()) detail::cmd_bpe_apply(rc, out);
    else if (vocab_cmd->parsed()) detail::cmd_vocab(rc, out);
    else if (encode_cmd->parsed()) detail::cmd_encode(rc, out);
    else if (stats_cmd->parsed()) detail::cmd_stats(rc, out);
    else if (sparse_cmd->parsed()) detail::cmd_sparseness(rc, out);
    else if (local_cmd->parsed()) detail::cmd_localness(rc, out);
    else if (dedup_cmd->parsed()) detail::cmd_dedup(rc, out);
  } catch (const IoError& e) {
    err << "unitlang: " << e.what() << '\n';
    return kIo;
  } catch (const ContractError& e) {
    err << "unitlang: " << e.what() << '\n';
    return kContract;
  } catch (const ParseError& e) {
    err << "unitlang: " << e.what() << '\n';
    return kFormat;
  } catch (const FormatError& e) {
    err << "unitlang: " << e.what() << '\n';
    return kFormat;
  } catch (const std::exception& e) {
    err << "unitlang: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace unitlang::cli

#endif  // UNITLANG_TOOLS_CLI_HPP
