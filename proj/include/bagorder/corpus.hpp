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

// Corpus ingestion: token interning, sentence padding and bags of words.

#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bagorder/error.hpp"

namespace bagorder {

using TokenId = std::uint32_t;

/// Id of the boundary marker that pads both ends of every sentence.
inline constexpr TokenId kMarker = 0;
inline constexpr std::string_view kMarkerSurface = "*";

/// Bijection between surface strings and dense token ids. Id 0 is always the
/// boundary marker.
class Vocab {
 public:
  Vocab() : surfaces_{std::string(kMarkerSurface)} {
    ids_.emplace(std::string(kMarkerSurface), kMarker);
  }

  /// Returns the id of `surface`, assigning the next free id on first sight.
  TokenId intern(std::string_view surface) {
    std::string key(surface);
    if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    const auto id = static_cast<TokenId>(surfaces_.size());
    surfaces_.push_back(key);
    ids_.emplace(std::move(key), id);
    return id;
  }

  std::optional<TokenId> find(std::string_view surface) const {
    if (auto it = ids_.find(std::string(surface)); it != ids_.end()) {
      return it->second;
    }
    return std::nullopt;
  }

  const std::string& lookup(TokenId id) const { return surfaces_.at(id); }

  /// Number of distinct tokens including the marker.
  std::size_t size() const noexcept { return surfaces_.size(); }

  const std::vector<std::string>& surfaces() const noexcept {
    return surfaces_;
  }

  friend bool operator==(const Vocab& a, const Vocab& b) {
    return a.surfaces_ == b.surfaces_;
  }

 private:
  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, TokenId> ids_;
};

/// Words of one sentence, markers excluded.
struct Sentence {
  std::vector<TokenId> tokens;

  std::size_t m() const noexcept { return tokens.size(); }

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

/// Multiset of words. Never contains the marker.
class Bag {
 public:
  Bag() = default;

  void add(TokenId id, std::uint32_t count = 1) {
    if (id == kMarker) throw ConfigError("the boundary marker cannot be bagged");
    if (count == 0) return;
    counts_[id] += count;
    total_ += count;
  }

  /// Removes one occurrence of `id`. The id must be present.
  void remove_one(TokenId id) {
    auto it = counts_.find(id);
    if (it == counts_.end()) throw ConfigError("token not in bag");
    if (--it->second == 0) counts_.erase(it);
    --total_;
  }

  std::uint32_t count(TokenId id) const {
    auto it = counts_.find(id);
    return it == counts_.end() ? 0 : it->second;
  }

  std::size_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  std::size_t distinct() const noexcept { return counts_.size(); }

  /// Entries ordered by token id.
  const std::map<TokenId, std::uint32_t>& items() const noexcept {
    return counts_;
  }

  friend bool operator==(const Bag& a, const Bag& b) {
    return a.counts_ == b.counts_;
  }
  friend auto operator<=>(const Bag& a, const Bag& b) {
    return a.counts_ <=> b.counts_;
  }

 private:
  std::map<TokenId, std::uint32_t> counts_;
  std::size_t total_ = 0;
};

/// [*] + tokens + [*].
inline std::vector<TokenId> pad(const Sentence& s) {
  std::vector<TokenId> out;
  out.reserve(s.m() + 2);
  out.push_back(kMarker);
  out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  out.push_back(kMarker);
  return out;
}

/// Inverse of pad(); drops every marker.
inline Sentence strip(std::span<const TokenId> padded) {
  Sentence s;
  for (TokenId t : padded) {
    if (t != kMarker) s.tokens.push_back(t);
  }
  return s;
}

inline Bag to_bag(const Sentence& s) {
  Bag bag;
  for (TokenId t : s.tokens) bag.add(t);
  return bag;
}

namespace detail {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' ||
         c == '\r';
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_ascii_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_ascii_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Interns one whitespace-separated line. `line_no` is used for error
/// reporting only.
inline Sentence parse_sentence(std::string_view line, Vocab& vocab,
                               std::size_t line_no = 1) {
  Sentence s;
  for (std::string_view word : detail::split_ws(line)) {
    if (word == kMarkerSurface) throw ReservedTokenError(line_no);
    s.tokens.push_back(vocab.intern(word));
  }
  return s;
}

/// One sentence per line. Empty lines are kept as m = 0 sentences.
inline std::vector<Sentence> read_corpus(std::istream& in, Vocab& vocab) {
  std::vector<Sentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(parse_sentence(line, vocab, line_no));
  }
  if (in.bad()) throw LoadError("read failure in corpus stream");
  return out;
}

inline std::vector<Sentence> load_corpus(const std::string& path,
                                         Vocab& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open corpus file: " + path);
  return read_corpus(in, vocab);
}

/// Space-joined surface forms.
inline std::string surface(std::span<const TokenId> tokens,
                           const Vocab& vocab) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += vocab.lookup(tokens[i]);
  }
  return out;
}

}  // namespace bagorder
