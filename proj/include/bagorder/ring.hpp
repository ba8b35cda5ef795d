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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bagorder/corpus.hpp"
#include "bagorder/probability.hpp"
#include "bagorder/tables.hpp"

namespace bagorder {

/// Running pair minima over the last `capacity` tokens of a sequence.
///
/// Slot i belongs to the i-th oldest token in the window and holds the
/// minimum pair probability P(w_i, w_j, j - i) over every later token w_j
/// still inside the window; the newest token's slot is empty. Appending a
/// token to a full ring costs exactly `capacity` pair lookups: each slot is
/// lowered by its pair to the new token, the minimum over the slots is the
/// pair minimum of the (capacity + 1)-token window ending at the new token,
/// and the oldest slot is then recycled for the new token.
///
/// The slot contents are a function of the window tokens only.
class Ring {
 public:
  using Slot = std::optional<Ratio>;  // nullopt: no pairs yet

  explicit Ring(std::size_t capacity)
      : tokens_(capacity, kMarker), slots_(capacity) {}

  std::size_t capacity() const noexcept { return slots_.size(); }
  std::size_t size() const noexcept { return size_; }
  bool full() const noexcept { return size_ == slots_.size(); }

  /// Appends `w`. Returns the pair minimum over the window made of the
  /// current tokens plus `w` (nullopt when that window has a single token).
  Slot shift(TokenId w, const PairTable& table) {
    last_lookups_ = 0;
    Slot window_min;
    for (std::size_t i = 0; i < size_; ++i) {
      Slot& slot = slots_[index(i)];
      const auto distance = static_cast<std::uint32_t>(size_ - i);
      const Ratio p = table.prob({tokens_[index(i)], w, distance});
      ++last_lookups_;
      if (!slot || p < *slot) slot = p;
      if (!window_min || *slot < *window_min) window_min = *slot;
    }
    lookups_ += last_lookups_;
    if (capacity() == 0) return window_min;
    if (full()) {
      head_ = (head_ + 1) % capacity();
      --size_;
    }
    tokens_[index(size_)] = w;
    slots_[index(size_)].reset();
    ++size_;
    return window_min;
  }

  /// Pair minimum over the tokens currently held.
  Slot min() const {
    Slot out;
    for (std::size_t i = 0; i < size_; ++i) {
      const Slot& slot = slots_[index(i)];
      if (slot && (!out || *slot < *out)) out = slot;
    }
    return out;
  }

  /// Slot of the i-th oldest token.
  const Slot& slot(std::size_t i) const { return slots_[index(i)]; }
  TokenId token(std::size_t i) const { return tokens_[index(i)]; }

  std::vector<TokenId> window() const {
    std::vector<TokenId> out;
    for (std::size_t i = 0; i < size_; ++i) out.push_back(token(i));
    return out;
  }

  /// Pair lookups made by the most recent shift() and in total.
  std::size_t last_lookups() const noexcept { return last_lookups_; }
  std::uint64_t lookups() const noexcept { return lookups_; }

 private:
  std::size_t index(std::size_t i) const { return (head_ + i) % slots_.size(); }

  std::vector<TokenId> tokens_;
  std::vector<Slot> slots_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::size_t last_lookups_ = 0;
  std::uint64_t lookups_ = 0;
};

/// Ring of capacity window.size() over `window`.
inline Ring ring_init(std::span<const TokenId> window, const PairTable& table) {
  Ring ring(window.size());
  for (TokenId w : window) ring.shift(w, table);
  return ring;
}

/// Shifts `new_word` into a full ring; returns the pair minimum of the
/// (capacity + 1)-token window ending at `new_word`.
inline Ring::Slot ring_shift(Ring& ring, TokenId new_word,
                             const PairTable& table) {
  return ring.shift(new_word, table);
}

}  // namespace bagorder
