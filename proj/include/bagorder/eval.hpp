// Copyright 2026 The bagorder Authors.
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

// Bag-generation evaluation and parameter counts.

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bagorder/corpus.hpp"
#include "bagorder/error.hpp"
#include "bagorder/search.hpp"
#include "bagorder/tables.hpp"

namespace bagorder {

/// Error distribution for one sentence length (or the totals row).
struct EvalRow {
  std::size_t length = 0;
  std::size_t total = 0;
  std::vector<std::size_t> errors;  // one per configuration
  std::vector<std::size_t> ties;    // sentences whose best had tie_count > 1
  std::vector<std::size_t> dead;    // searches that found no arrangement

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

struct EvalReport {
  std::vector<std::string> labels;
  std::vector<EvalRow> rows;  // ascending length
  EvalRow totals;
  bool oracle = false;  // produced with brute_force_generate

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct EvalOptions {
  unsigned threads = 1;
  bool use_oracle = false;
};

namespace detail {

struct SentenceOutcome {
  std::vector<char> error;
  std::vector<char> tie;
  std::vector<char> dead;
};

inline SentenceOutcome evaluate_one(const Sentence& s,
                                    std::span<const SearchConfig> configs,
                                    const Tables& tables,
                                    const EvalOptions& opt) {
  SentenceOutcome out;
  const Bag bag = to_bag(s);
  const std::vector<TokenId> reference = pad(s);
  for (const SearchConfig& cfg : configs) {
    try {
      const GenerationResult r = opt.use_oracle
                                     ? brute_force_generate(bag, cfg, tables)
                                     : generate(bag, cfg, tables);
      out.error.push_back(r.best != reference);
      out.tie.push_back(r.tie_count > 1);
      out.dead.push_back(0);
    } catch (const NoArrangement&) {
      out.error.push_back(1);
      out.tie.push_back(0);
      out.dead.push_back(1);
    }
  }
  return out;
}

inline EvalRow empty_row(std::size_t length, std::size_t configs) {
  return {length, 0, std::vector<std::size_t>(configs),
          std::vector<std::size_t>(configs), std::vector<std::size_t>(configs)};
}

}  // namespace detail

/// Runs every configuration on the bag of every test sentence. A result is
/// an error when the selected sequence differs from the reference.
/// Sentences are split across `threads` workers; aggregation happens after
/// all workers finish, in sentence order.
inline EvalReport evaluate(std::span<const Sentence> test,
                           std::span<const SearchConfig> configs,
                           const Tables& tables, const EvalOptions& opt = {}) {
  for (const SearchConfig& cfg : configs) {
    if (cfg.model.model == Model::kExact) effective_order(cfg.model, 0, tables);
  }
  std::vector<detail::SentenceOutcome> outcomes(test.size());
  const unsigned workers = std::max(
      1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(test.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < test.size(); ++i) {
      outcomes[i] = detail::evaluate_one(test[i], configs, tables, opt);
    }
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < test.size(); i += workers) {
            outcomes[i] = detail::evaluate_one(test[i], configs, tables, opt);
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  EvalReport report;
  report.oracle = opt.use_oracle;
  for (const SearchConfig& cfg : configs) report.labels.push_back(cfg.model.label());
  const std::size_t k = configs.size();
  std::map<std::size_t, EvalRow> by_length;
  report.totals = detail::empty_row(0, k);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const std::size_t m = test[i].m();
    auto it = by_length.try_emplace(m, detail::empty_row(m, k)).first;
    EvalRow& row = it->second;
    ++row.total;
    ++report.totals.total;
    for (std::size_t c = 0; c < k; ++c) {
      row.errors[c] += outcomes[i].error[c];
      row.ties[c] += outcomes[i].tie[c];
      row.dead[c] += outcomes[i].dead[c];
      report.totals.errors[c] += outcomes[i].error[c];
      report.totals.ties[c] += outcomes[i].tie[c];
      report.totals.dead[c] += outcomes[i].dead[c];
    }
  }
  for (auto& [m, row] : by_length) report.rows.push_back(std::move(row));
  return report;
}

/// Machine-readable table: error and dead-search counts per length.
inline std::string to_tsv(const EvalReport& r) {
  std::ostringstream out;
  out << "length\ttotal";
  for (const auto& l : r.labels) out << '\t' << l;
  for (const auto& l : r.labels) out << "\tdead:" << l;
  out << '\n';
  const auto emit = [&](const std::string& head, const EvalRow& row) {
    out << head << '\t' << row.total;
    for (auto e : row.errors) out << '\t' << e;
    for (auto d : row.dead) out << '\t' << d;
    out << '\n';
  };
  for (const auto& row : r.rows) emit(std::to_string(row.length), row);
  emit("total", r.totals);
  return out.str();
}

/// Aligned table in the layout of a printed results table, followed by tie
/// and dead-search counts.
inline std::string render(const EvalReport& r) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"sentence length", "total test sentences"};
  head.insert(head.end(), r.labels.begin(), r.labels.end());
  cells.push_back(head);
  const auto add = [&](const std::string& first, const EvalRow& row,
                       const std::vector<std::size_t>& values) {
    std::vector<std::string> line{first, std::to_string(row.total)};
    for (auto v : values) line.push_back(std::to_string(v));
    cells.push_back(std::move(line));
  };
  for (const auto& row : r.rows) add(std::to_string(row.length), row, row.errors);
  add("total", r.totals, r.totals.errors);
  add("ties", r.totals, r.totals.ties);
  add("dead", r.totals, r.totals.dead);

  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      width[c] = std::max(width[c], line[c].size());
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t c = 0; c < cells[i].size(); ++c) {
      if (c) out << "  ";
      const auto& v = cells[i][c];
      out << std::string(width[c] - v.size(), ' ') << v;
    }
    out << '\n';
    if (i == 0 || (i != 0 && i + 4 == cells.size())) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
    }
  }
  return out.str();
}

struct ParamReport {
  std::string label;
  std::size_t distinct_parameters = 0;
  std::string bound_note;
  std::size_t vocab_size = 0;  // distinct padded tokens, marker included
  std::size_t limit = 0;       // L (largest pair distance) or n

  friend bool operator==(const ParamReport&, const ParamReport&) = default;
};

/// Stored entries a model reads. The approximate model reads the pair table
/// plus unigrams whatever its order; the exact model of order n reads the
/// n-gram and (n-1)-gram tables.
inline ParamReport param_count(const Tables& t, const ModelSpec& spec) {
  ParamReport r;
  r.label = spec.label();
  r.vocab_size = t.ngrams.grams(1).size();
  if (spec.model == Model::kApprox) {
    r.distinct_parameters = t.pairs.size() + t.ngrams.grams(1).size();
    r.bound_note = "O((L-1)*V^2)";
    r.limit = t.pairs.max_distance();
    return r;
  }
  const int n = effective_order(spec, 0, t).n;
  r.distinct_parameters = t.ngrams.grams(n).size() + t.ngrams.grams(n - 1).size();
  r.bound_note = "O(V^" + std::to_string(n) + ")";
  r.limit = static_cast<std::size_t>(n);
  return r;
}

/// Deterministic 80/20 split by line index: every fifth sentence is held out.
struct Split {
  std::vector<Sentence> train;
  std::vector<Sentence> test;
};

inline Split split_open(std::span<const Sentence> corpus) {
  Split s;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (i % 5 == 4 ? s.test : s.train).push_back(corpus[i]);
  }
  return s;
}

}  // namespace bagorder
