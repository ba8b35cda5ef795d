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

// Training tables: directed word pairs with distance, and exact k-gram counts.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bagorder/corpus.hpp"
#include "bagorder/error.hpp"
#include "bagorder/probability.hpp"

namespace bagorder {

/// Directed pair: `right` occurred `distance` positions after `left`.
struct PairKey {
  TokenId left = kMarker;
  TokenId right = kMarker;
  std::uint32_t distance = 1;

  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    std::uint64_t h = (static_cast<std::uint64_t>(k.left) << 32) | k.right;
    h ^= static_cast<std::uint64_t>(k.distance) * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

/// All (m+1)(m+2)/2 pairs (padded[i], padded[j], j-i) with i < j, ordered by
/// i then j.
inline std::vector<PairKey> extract_pairs(std::span<const TokenId> padded) {
  std::vector<PairKey> out;
  const std::size_t len = padded.size();
  if (len >= 2) out.reserve(len * (len - 1) / 2);
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = i + 1; j < len; ++j) {
      out.push_back({padded[i], padded[j], static_cast<std::uint32_t>(j - i)});
    }
  }
  return out;
}

/// Counts of directed word pairs, normalized globally by the total number of
/// pairs. Unseen keys get `floor` (zero unless configured).
class PairTable {
 public:
  using Map = std::unordered_map<PairKey, std::uint64_t, PairKeyHash>;

  void add(const PairKey& key, std::uint64_t count = 1) {
    if (key.distance == 0) throw ConfigError("pair distance must be >= 1");
    if (count == 0) return;
    counts_[key] += count;
    total_ += count;
    max_distance_ = std::max(max_distance_, key.distance);
  }

  void merge(const PairTable& other) {
    for (const auto& [key, c] : other.counts_) add(key, c);
  }

  std::uint64_t count(const PairKey& key) const {
    auto it = counts_.find(key);
    return it == counts_.end() ? 0 : it->second;
  }

  /// count/total_pairs for observed keys, floor otherwise.
  Ratio prob(const PairKey& key) const {
    const std::uint64_t c = count(key);
    if (c == 0) return floor_;
    return {c, total_};
  }

  void set_floor(Ratio floor) {
    if (floor > Ratio::one()) throw ConfigError("floor must be in [0, 1]");
    floor_ = floor;
  }
  const Ratio& floor() const noexcept { return floor_; }

  std::uint64_t total_pairs() const noexcept { return total_; }
  std::uint32_t max_distance() const noexcept { return max_distance_; }
  std::size_t size() const noexcept { return counts_.size(); }
  bool empty() const noexcept { return counts_.empty(); }
  const Map& counts() const noexcept { return counts_; }

  /// Entries ordered by (left, right, distance).
  std::vector<std::pair<PairKey, std::uint64_t>> sorted() const {
    std::vector<std::pair<PairKey, std::uint64_t>> rows(counts_.begin(),
                                                        counts_.end());
    std::sort(rows.begin(), rows.end());
    return rows;
  }

  friend bool operator==(const PairTable& a, const PairTable& b) {
    return a.total_ == b.total_ && a.max_distance_ == b.max_distance_ &&
           a.floor_ == b.floor_ && a.counts_ == b.counts_;
  }

 private:
  Map counts_;
  std::uint64_t total_ = 0;
  std::uint32_t max_distance_ = 0;
  Ratio floor_ = Ratio::zero();
};

inline Ratio pair_prob(const PairTable& t, const PairKey& key) {
  return t.prob(key);
}

/// Lexicographic order usable across vectors and spans of token ids.
struct GramLess {
  using is_transparent = void;
  template <class A, class B>
  bool operator()(const A& a, const B& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Exact k-gram counts over padded sentences for k = 1..order.
class NGramTables {
 public:
  using Gram = std::vector<TokenId>;
  using Map = std::map<Gram, std::uint64_t, GramLess>;

  explicit NGramTables(int order = 1) : order_(order) {
    if (order < 1) throw ConfigError("n-gram order must be >= 1");
    grams_.resize(static_cast<std::size_t>(order));
  }

  int order() const noexcept { return order_; }

  void add(std::span<const TokenId> gram, std::uint64_t count = 1) {
    const std::size_t k = gram.size();
    if (k == 0 || k > static_cast<std::size_t>(order_)) {
      throw ConfigError("gram length outside 1..order");
    }
    if (count == 0) return;
    grams_[k - 1][Gram(gram.begin(), gram.end())] += count;
    if (k == 1) {
      token_total_ += count;
    } else {
      history_[Gram(gram.begin(), gram.end() - 1)] += count;
    }
  }

  void merge(const NGramTables& other) {
    if (other.order_ != order_) throw ConfigError("order mismatch in merge");
    for (const auto& table : other.grams_) {
      for (const auto& [g, c] : table) add(g, c);
    }
  }

  std::uint64_t count(std::span<const TokenId> gram) const {
    if (gram.empty() || gram.size() > grams_.size()) return 0;
    const auto& table = grams_[gram.size() - 1];
    auto it = table.find(gram);
    return it == table.end() ? 0 : it->second;
  }

  /// Number of stored grams of length k+1 that start with `context`.
  std::uint64_t continuation_count(std::span<const TokenId> context) const {
    if (context.empty()) return token_total_;
    auto it = history_.find(context);
    return it == history_.end() ? 0 : it->second;
  }

  /// count(w)/token_total over padded tokens.
  Ratio unigram_prob(TokenId w) const {
    const TokenId g[1] = {w};
    const std::uint64_t c = count(g);
    if (c == 0) return Ratio::zero();
    return {c, token_total_};
  }

  const Map& grams(int k) const { return grams_.at(static_cast<std::size_t>(k - 1)); }
  std::uint64_t token_total() const noexcept { return token_total_; }

  friend bool operator==(const NGramTables& a, const NGramTables& b) {
    return a.order_ == b.order_ && a.token_total_ == b.token_total_ &&
           a.grams_ == b.grams_;
  }

 private:
  int order_;
  std::vector<Map> grams_;
  Map history_;
  std::uint64_t token_total_ = 0;
};

/// P(w | context) = count(context + w) / continuation_count(context). The
/// empty context gives the unigram probability. Unseen grams and unseen
/// contexts give zero.
inline Ratio ngram_cond_prob(const NGramTables& t,
                             std::span<const TokenId> context, TokenId w) {
  if (context.size() + 1 > static_cast<std::size_t>(t.order())) {
    throw ConfigError("context longer than the trained order");
  }
  if (context.empty()) return t.unigram_prob(w);
  const std::uint64_t hist = t.continuation_count(context);
  if (hist == 0) return Ratio::zero();
  std::vector<TokenId> gram(context.begin(), context.end());
  gram.push_back(w);
  const std::uint64_t c = t.count(gram);
  if (c == 0) return Ratio::zero();
  return {c, hist};
}

/// Everything the scorers and the search read.
struct Tables {
  PairTable pairs;
  NGramTables ngrams;

  friend bool operator==(const Tables&, const Tables&) = default;
};

struct TrainOptions {
  int order = 3;
  std::optional<std::uint32_t> distance_cap;
  unsigned threads = 1;
};

namespace detail {

inline void count_sentence(const Sentence& s, const TrainOptions& opt,
                           Tables& out) {
  const std::vector<TokenId> padded = pad(s);
  for (const PairKey& key : extract_pairs(padded)) {
    if (opt.distance_cap && key.distance > *opt.distance_cap) continue;
    out.pairs.add(key);
  }
  const std::span<const TokenId> view(padded);
  for (std::size_t k = 1; k <= static_cast<std::size_t>(opt.order); ++k) {
    for (std::size_t i = 0; i + k <= padded.size(); ++i) {
      out.ngrams.add(view.subspan(i, k));
    }
  }
}

}  // namespace detail

/// Counts pairs and k-grams (k = 1..order) over every padded sentence.
/// Sentences may be split across threads; counts merge by addition so the
/// result does not depend on the thread count.
inline Tables train(std::span<const Sentence> corpus, const TrainOptions& opt) {
  if (opt.order < 2) throw ConfigError("training order must be >= 2");
  if (opt.distance_cap && *opt.distance_cap < 1) {
    throw ConfigError("distance cap must be >= 1");
  }
  const unsigned workers =
      std::max(1u, std::min<unsigned>(opt.threads,
                                      static_cast<unsigned>(corpus.size())));
  Tables result{PairTable{}, NGramTables(opt.order)};
  if (workers <= 1) {
    for (const Sentence& s : corpus) detail::count_sentence(s, opt, result);
    return result;
  }
  std::vector<Tables> partial(workers, Tables{PairTable{}, NGramTables(opt.order)});
  std::vector<std::thread> pool;
  const std::size_t chunk = (corpus.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(corpus.size(), lo + chunk);
      for (std::size_t i = lo; i < hi; ++i) {
        detail::count_sentence(corpus[i], opt, partial[w]);
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const Tables& p : partial) {
    result.pairs.merge(p.pairs);
    result.ngrams.merge(p.ngrams);
  }
  return result;
}

inline Tables train(std::span<const Sentence> corpus, int order,
                    std::optional<std::uint32_t> distance_cap = std::nullopt) {
  return train(corpus, TrainOptions{order, distance_cap, 1});
}

}  // namespace bagorder
