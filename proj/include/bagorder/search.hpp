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

// Bag generation: recover the best-scoring arrangement of a bag of words.
//
// The search is level synchronous. Level t holds paths of t+1 tokens. Every
// path of a level is expanded by one word of its remaining bag and children
// are recombined into the next level: two children are merged, keeping the
// higher score, when they have the same length, the same last n-1 tokens and
// (unless disabled) cover the same words. The loop ends when every path has
// consumed its bag and appended the end marker.
//
// Merging is exact: children sharing a StateKey receive identical factors
// for every continuation, so the best complete arrangement always survives.
// Without the coverage condition this no longer holds, because paths that
// used different words have different continuations.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bagorder/corpus.hpp"
#include "bagorder/error.hpp"
#include "bagorder/probability.hpp"
#include "bagorder/scoring.hpp"
#include "bagorder/tables.hpp"

namespace bagorder {

struct SearchConfig {
  ModelSpec model;
  /// Require equal word coverage before merging. Turning this off is unsafe.
  bool condition4 = true;
  /// Keep only the best `beam_width` paths per level. Voids optimality.
  std::optional<std::size_t> beam_width;
};

/// A partial arrangement.
struct Path {
  std::vector<TokenId> tokens;  // padded prefix, tokens[0] == kMarker
  Bag remaining;
  LogScore score;
  IncrementalScorer scorer;
  bool complete = false;
};

/// Recombination key: length, last min(n-1, length) tokens, and the
/// remaining bag (left empty when the coverage condition is off).
struct StateKey {
  std::size_t length = 0;
  std::vector<TokenId> suffix;
  std::vector<std::pair<TokenId, std::uint32_t>> coverage;

  friend auto operator<=>(const StateKey&, const StateKey&) = default;
};

/// Search-wide constants derived from the bag and configuration.
struct SearchContext {
  const Tables& tables;
  SearchConfig config;
  std::size_t m = 0;
  EffectiveOrder order;

  SearchContext(const Tables& t, const SearchConfig& cfg, std::size_t bag_size)
      : tables(t),
        config(cfg),
        m(bag_size),
        order(effective_order(cfg.model, bag_size, t)) {
    if (cfg.beam_width && *cfg.beam_width == 0) {
      throw ConfigError("beam width must be positive");
    }
  }
};

inline StateKey state_key(const Path& p, const SearchContext& ctx) {
  StateKey key;
  key.length = p.tokens.size();
  const std::size_t keep =
      std::min<std::size_t>(static_cast<std::size_t>(ctx.order.n - 1),
                            p.tokens.size());
  key.suffix.assign(p.tokens.end() - static_cast<std::ptrdiff_t>(keep),
                    p.tokens.end());
  if (ctx.config.condition4) {
    key.coverage.assign(p.remaining.items().begin(), p.remaining.items().end());
  }
  return key;
}

/// The lone level-0 path [*] over `bag`.
inline Path start_path(const Bag& bag, const SearchContext& ctx) {
  Path p{{}, bag, LogScore::one(),
         IncrementalScorer(ctx.config.model, ctx.order.n, ctx.m), false};
  p.scorer.append(p.tokens, kMarker, ctx.tables, p.score);
  return p;
}

/// One child per distinct remaining word; the end marker once the bag is
/// empty. Zero-score children are returned, not filtered.
inline std::vector<Path> expand(const Path& p, const SearchContext& ctx) {
  if (p.complete) throw ConfigError("cannot expand a complete path");
  std::vector<Path> children;
  if (p.remaining.empty()) {
    Path child = p;
    child.scorer.append(child.tokens, kMarker, ctx.tables, child.score);
    child.complete = true;
    children.push_back(std::move(child));
    return children;
  }
  children.reserve(p.remaining.distinct());
  for (const auto& [id, count] : p.remaining.items()) {
    Path child = p;
    child.remaining.remove_one(id);
    child.scorer.append(child.tokens, id, ctx.tables, child.score);
    children.push_back(std::move(child));
  }
  return children;
}

/// True if `a` should be kept over `b`: higher score, or equal score and a
/// lexicographically smaller token sequence.
inline bool better_path(const std::vector<TokenId>& a_tokens,
                        const LogScore& a_score,
                        const std::vector<TokenId>& b_tokens,
                        const LogScore& b_score) {
  const auto cmp = a_score <=> b_score;
  if (cmp != std::strong_ordering::equal) return cmp > 0;
  return a_tokens < b_tokens;
}

using Level = std::map<StateKey, Path>;

inline void merge_into(Level& level, Path candidate, const SearchContext& ctx) {
  StateKey key = state_key(candidate, ctx);
  auto it = level.find(key);
  if (it == level.end()) {
    level.emplace(std::move(key), std::move(candidate));
    return;
  }
  if (better_path(candidate.tokens, candidate.score, it->second.tokens,
                  it->second.score)) {
    it->second = std::move(candidate);
  }
}

struct GenerationResult {
  std::vector<TokenId> best;  // complete padded sequence
  LogScore score;
  std::size_t tie_count = 0;
  std::size_t expanded_states = 0;
  bool clamped = false;             // requested order exceeded m + 2
  bool approximate_search = false;  // beam pruning was active
  bool unsafe = false;              // coverage condition disabled
  std::optional<bool> is_error;     // set by evaluation
};

/// Called once per level with the level index and its live paths.
using LevelObserver = std::function<void(std::size_t, const Level&)>;

namespace detail {

inline void prune_to_beam(Level& level, std::size_t width) {
  if (level.size() <= width) return;
  std::vector<Level::iterator> order;
  order.reserve(level.size());
  for (auto it = level.begin(); it != level.end(); ++it) order.push_back(it);
  std::sort(order.begin(), order.end(), [](auto a, auto b) {
    return better_path(a->second.tokens, a->second.score, b->second.tokens,
                       b->second.score);
  });
  Level kept;
  for (std::size_t i = 0; i < width; ++i) {
    kept.insert(level.extract(order[i]));
  }
  level = std::move(kept);
}

}  // namespace detail

/// Best arrangement of `bag`. Throws NoArrangement when every path dies.
inline GenerationResult generate(const Bag& bag, const SearchConfig& cfg,
                                 const Tables& tables,
                                 const LevelObserver& observer = {}) {
  const SearchContext ctx(tables, cfg, bag.total());
  Level level;
  {
    Path start = start_path(bag, ctx);
    merge_into(level, std::move(start), ctx);
  }
  GenerationResult result;
  result.clamped = ctx.order.clamped;
  result.approximate_search = cfg.beam_width.has_value();
  result.unsafe = !cfg.condition4;

  std::size_t t = 0;
  if (observer) observer(t, level);
  while (!level.begin()->second.complete) {
    Level next;
    for (const auto& [key, path] : level) {
      ++result.expanded_states;
      for (Path& child : expand(path, ctx)) {
        if (child.score.is_zero()) continue;
        merge_into(next, std::move(child), ctx);
      }
    }
    ++t;
    if (next.empty()) throw NoArrangement(t);
    if (cfg.beam_width) detail::prune_to_beam(next, *cfg.beam_width);
    level = std::move(next);
    if (observer) observer(t, level);
  }

  const Path* best = nullptr;
  for (const auto& [key, path] : level) {
    if (!best || better_path(path.tokens, path.score, best->tokens, best->score)) {
      best = &path;
    }
  }
  for (const auto& [key, path] : level) {
    if (path.score == best->score) ++result.tie_count;
  }
  result.best = best->tokens;
  result.score = best->score;
  return result;
}

inline constexpr std::size_t kBruteForceCap = 8;

/// Scores every distinct permutation of `bag` from scratch and returns the
/// argmax under the same tie-break as generate(). expanded_states counts the
/// permutations scored; tie_count counts arrangements sharing the maximum.
inline GenerationResult brute_force_generate(const Bag& bag,
                                             const SearchConfig& cfg,
                                             const Tables& tables,
                                             std::size_t cap = kBruteForceCap) {
  if (bag.total() > cap) {
    throw SizeError("bag of " + std::to_string(bag.total()) +
                    " words exceeds the brute-force cap of " +
                    std::to_string(cap));
  }
  std::vector<TokenId> words;
  for (const auto& [id, count] : bag.items()) words.insert(words.end(), count, id);
  // std::next_permutation visits each distinct permutation once, in
  // ascending lexicographic order, so the first maximum is the tie-break
  // winner.
  GenerationResult result;
  result.unsafe = !cfg.condition4;
  result.approximate_search = false;
  std::optional<LogScore> best_score;
  Sentence s;
  do {
    s.tokens = words;
    const ScoreResult r = score_direct(s, cfg.model, tables);
    result.clamped = r.order.clamped;
    ++result.expanded_states;
    if (!best_score || r.score > *best_score) {
      best_score = r.score;
      result.best = pad(s);
      result.tie_count = 1;
    } else if (r.score == *best_score) {
      ++result.tie_count;
    }
  } while (std::next_permutation(words.begin(), words.end()));
  if (best_score->is_zero()) throw NoArrangement(bag.total() + 1);
  result.score = *best_score;
  return result;
}

/// TSV line: words (markers stripped), log score, tie count, expanded states.
inline std::string format_result(const GenerationResult& r, const Vocab& vocab) {
  const Sentence words = strip(r.best);
  return surface(words.tokens, vocab) + '\t' + r.score.str() + '\t' +
         std::to_string(r.tie_count) + '\t' + std::to_string(r.expanded_states);
}

}  // namespace bagorder
