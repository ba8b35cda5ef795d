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

// Sentence scoring under the exact n-gram model and the approximate model.
//
// Exact model, order n, padded sentence w_0 .. w_{m+1}:
//
//   P(S) = prod_{t=1}^{m+1} P(w_t | w_{t-c} .. w_{t-1}),  c = min(t, n-1)
//
// Approximate model, order n: every n-token window contributes the minimum
// pair probability over the n(n-1)/2 pairs inside it, and every (n-1)-token
// window starting at position >= 1 and ending at position <= m divides it
// out again:
//
//   P(S) = prod_{k=0}^{m-n+2} min_{k<=i<j<=k+n-1} P(w_i, w_j, j-i)
//        / prod_{k=1}^{m-n+2} min_{k<=i<j<=k+n-2} P(w_i, w_j, j-i)
//
// A one-token window's "minimum" is the unigram probability of its token.
// Order FULL sets n = m + 2, leaving one whole-sentence minimum.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bagorder/corpus.hpp"
#include "bagorder/error.hpp"
#include "bagorder/probability.hpp"
#include "bagorder/ring.hpp"
#include "bagorder/tables.hpp"

namespace bagorder {

enum class Model { kExact, kApprox };

/// Window width n of a model, or FULL (the whole padded sentence).
class Order {
 public:
  static Order of(int n) {
    if (n < 2) throw ConfigError("order must be >= 2");
    return Order(n);
  }
  static Order full() { return Order(0); }

  /// Accepts an integer >= 2 or "full".
  static Order parse(std::string_view text) {
    if (text == "full" || text == "FULL" || text == "n") return full();
    int n = 0;
    for (char c : text) {
      if (c < '0' || c > '9' || n > 1000) {
        throw ConfigError("bad order '" + std::string(text) + "'");
      }
      n = n * 10 + (c - '0');
    }
    if (text.empty()) throw ConfigError("empty order");
    return of(n);
  }

  bool is_full() const noexcept { return n_ == 0; }
  int value() const {
    if (is_full()) throw ConfigError("FULL order has no fixed value");
    return n_;
  }
  std::string str() const { return is_full() ? "full" : std::to_string(n_); }

  friend bool operator==(const Order&, const Order&) = default;

 private:
  explicit Order(int n) : n_(n) {}
  int n_;
};

/// A model and its order.
struct ModelSpec {
  Model model = Model::kApprox;
  Order order = Order::of(2);

  /// Short label: M2, M3, ..., AM2, AM3, ..., AMn.
  std::string label() const {
    if (model == Model::kExact) return "M" + order.str();
    return order.is_full() ? "AMn" : "AM" + order.str();
  }

  /// Parses a label produced by label().
  static ModelSpec parse(std::string_view label) {
    const auto bad = [&] {
      return ConfigError("unknown model label '" + std::string(label) + "'");
    };
    if (label.starts_with("AM")) {
      const auto rest = label.substr(2);
      if (rest == "n") return {Model::kApprox, Order::full()};
      try {
        return {Model::kApprox, Order::parse(rest)};
      } catch (const ConfigError&) {
        throw bad();
      }
    }
    if (label.starts_with("M")) {
      const auto rest = label.substr(1);
      if (rest == "n" || rest == "full") throw bad();
      try {
        return {Model::kExact, Order::parse(rest)};
      } catch (const ConfigError&) {
        throw bad();
      }
    }
    throw bad();
  }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Unigram probability, falling back to the pair table's floor for unseen
/// words so floored tables never divide by zero.
inline Ratio unigram_or_floor(const Tables& t, TokenId w) {
  const Ratio p = t.ngrams.unigram_prob(w);
  return p.is_zero() ? t.pairs.floor() : p;
}

/// Minimum pair probability over all index pairs of `words`; for a single
/// word, its unigram probability.
inline Ratio tuple_min(std::span<const TokenId> words, const Tables& t) {
  if (words.empty()) throw ConfigError("tuple_min of an empty window");
  if (words.size() == 1) return unigram_or_floor(t, words[0]);
  std::optional<Ratio> best;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      const Ratio p = t.pairs.prob(
          {words[i], words[j], static_cast<std::uint32_t>(j - i)});
      if (!best || p < *best) best = p;
    }
  }
  return *best;
}

/// Window width actually used for a sentence of m words.
struct EffectiveOrder {
  int n = 2;
  bool clamped = false;  // requested order exceeded m + 2
};

inline EffectiveOrder effective_order(const ModelSpec& spec, std::size_t m,
                                      const Tables& t) {
  const int full = static_cast<int>(m) + 2;
  if (spec.model == Model::kExact) {
    if (spec.order.is_full()) {
      throw ConfigError("the exact model needs an integer order");
    }
    const int n = spec.order.value();
    if (n > t.ngrams.order()) {
      throw ConfigError("order " + std::to_string(n) +
                        " exceeds the trained n-gram order " +
                        std::to_string(t.ngrams.order()));
    }
    return {n, false};
  }
  if (spec.order.is_full()) return {full, false};
  const int n = spec.order.value();
  if (n > full) return {full, true};
  return {n, false};
}

struct ScoreResult {
  LogScore score;
  EffectiveOrder order;
};

/// Exact n-gram Markov score with escalating start contexts; P(*) = 1.
inline LogScore markov_score(const Sentence& s, int n, const Tables& t) {
  if (n < 2) throw ConfigError("order must be >= 2");
  if (n > t.ngrams.order()) {
    throw ConfigError("order " + std::to_string(n) +
                      " exceeds the trained n-gram order " +
                      std::to_string(t.ngrams.order()));
  }
  const std::vector<TokenId> padded = pad(s);
  const std::span<const TokenId> view(padded);
  LogScore score;
  for (std::size_t pos = 1; pos < padded.size() && !score.is_zero(); ++pos) {
    const std::size_t ctx = std::min<std::size_t>(pos, n - 1);
    score.multiply(ngram_cond_prob(t.ngrams, view.subspan(pos - ctx, ctx),
                                   padded[pos]));
  }
  return score;
}

/// Approximate score straight from the definition: one tuple_min per window.
inline ScoreResult approx_score_direct(const Sentence& s, Order order,
                                       const Tables& t) {
  const EffectiveOrder eff =
      effective_order({Model::kApprox, order}, s.m(), t);
  const std::vector<TokenId> padded = pad(s);
  const std::span<const TokenId> view(padded);
  const std::size_t n = static_cast<std::size_t>(eff.n);
  const std::size_t m = s.m();
  LogScore score;
  // Windows: numerator k = 0 .. m-n+2, denominator k = 1 .. m-n+2.
  for (std::size_t k = 0; k + n <= m + 2; ++k) {
    score.multiply(tuple_min(view.subspan(k, n), t));
  }
  for (std::size_t k = 1; k + n <= m + 2; ++k) {
    score.divide(tuple_min(view.subspan(k, n - 1), t));
  }
  return {score, eff};
}

/// Incremental scoring state for one growing padded prefix.
///
/// For the approximate model it owns a ring over the last n-1 tokens
/// (numerator windows) and one over the last n-2 tokens (denominator
/// windows). Both rings are functions of the prefix's last n-1 tokens.
class IncrementalScorer {
 public:
  IncrementalScorer(const ModelSpec& spec, int n, std::size_t m)
      : model_(spec.model), n_(n), m_(m) {
    if (model_ == Model::kApprox) {
      num_.emplace(static_cast<std::size_t>(n - 1));
      if (n >= 3) den_.emplace(static_cast<std::size_t>(n - 2));
    }
  }

  /// Appends `w` at position prefix.size() and applies that position's
  /// factors to `score`. `prefix` must already include everything before w.
  void append(std::vector<TokenId>& prefix, TokenId w, const Tables& t,
              LogScore& score) {
    const std::size_t pos = prefix.size();
    prefix.push_back(w);
    if (model_ == Model::kExact) {
      if (pos == 0) return;
      const std::size_t ctx = std::min<std::size_t>(pos, n_ - 1);
      const std::span<const TokenId> view(prefix);
      score.multiply(ngram_cond_prob(t.ngrams, view.subspan(pos - ctx, ctx), w));
      return;
    }
    const std::size_t n = static_cast<std::size_t>(n_);
    const auto num = num_->shift(w, t.pairs);
    if (pos >= n - 1) score.multiply(*num);
    const bool den_factor = pos >= n - 1 && pos >= 1 && pos <= m_;
    if (n == 2) {
      if (den_factor) score.divide(unigram_or_floor(t, w));
    } else {
      const auto den = den_->shift(w, t.pairs);
      if (den_factor) score.divide(*den);
    }
  }

  const std::optional<Ring>& numerator_ring() const noexcept { return num_; }
  const std::optional<Ring>& denominator_ring() const noexcept { return den_; }

 private:
  Model model_;
  int n_;
  std::size_t m_;
  std::optional<Ring> num_;
  std::optional<Ring> den_;
};

/// Approximate score computed with the rings, O(n) lookups per position.
inline ScoreResult approx_score(const Sentence& s, Order order,
                                const Tables& t) {
  const EffectiveOrder eff =
      effective_order({Model::kApprox, order}, s.m(), t);
  IncrementalScorer scorer({Model::kApprox, order}, eff.n, s.m());
  std::vector<TokenId> prefix;
  LogScore score;
  for (TokenId w : pad(s)) scorer.append(prefix, w, t, score);
  return {score, eff};
}

/// From-scratch score of a complete sentence under `spec`; uses no rings.
inline ScoreResult score_direct(const Sentence& s, const ModelSpec& spec,
                                const Tables& t) {
  if (spec.model == Model::kApprox) return approx_score_direct(s, spec.order, t);
  const EffectiveOrder eff = effective_order(spec, s.m(), t);
  return {markov_score(s, eff.n, t), eff};
}

}  // namespace bagorder
