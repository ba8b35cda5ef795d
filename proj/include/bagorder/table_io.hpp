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

// Text persistence of trained tables.
//
// A table directory holds three files:
//
//   vocab.tsv   "bagorder-vocab v1", then `id<TAB>surface`, ids 0..V-1
//   pairs.tsv   "bagorder-pairs v1", then `left<TAB>right<TAB>distance<TAB>count`
//   ngrams.tsv  "bagorder-ngrams v1<TAB>order=N", then `k<TAB>id1 .. idk<TAB>count`
//
// Rows are sorted by key ids, so saving the same tables twice produces
// byte-identical files.

#pragma once

#include <charconv>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bagorder/corpus.hpp"
#include "bagorder/error.hpp"
#include "bagorder/tables.hpp"

namespace bagorder {

inline constexpr std::string_view kVocabHeader = "bagorder-vocab v1";
inline constexpr std::string_view kPairsHeader = "bagorder-pairs v1";
inline constexpr std::string_view kNGramsHeader = "bagorder-ngrams v1";

inline constexpr std::string_view kVocabFile = "vocab.tsv";
inline constexpr std::string_view kPairsFile = "pairs.tsv";
inline constexpr std::string_view kNGramsFile = "ngrams.tsv";

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

template <class Int>
Int parse_int(std::string_view field, const std::string& file,
              std::size_t line_no, const char* what) {
  Int value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(file, line_no,
                     std::string("bad ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

/// Reads lines, stripping a trailing CR.
class LineReader {
 public:
  LineReader(std::istream& in, std::string name)
      : in_(in), name_(std::move(name)) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::size_t line_no() const noexcept { return line_no_; }
  const std::string& name() const noexcept { return name_; }

  /// Consumes the header line and returns the fields after the version tag.
  std::vector<std::string_view> header(std::string_view expected,
                                       std::string& storage) {
    if (!next(storage)) throw VersionError(name_ + ": missing header");
    auto fields = split_tabs(storage);
    if (fields.front() != expected) {
      throw VersionError(name_ + ": expected header '" + std::string(expected) +
                         "', found '" + std::string(fields.front()) + "'");
    }
    fields.erase(fields.begin());
    return fields;
  }

 private:
  std::istream& in_;
  std::string name_;
  std::size_t line_no_ = 0;
};

}  // namespace detail

inline void write_vocab(std::ostream& out, const Vocab& vocab) {
  out << kVocabHeader << '\n';
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    out << id << '\t' << vocab.lookup(static_cast<TokenId>(id)) << '\n';
  }
}

inline void write_pairs(std::ostream& out, const PairTable& t) {
  out << kPairsHeader << '\n';
  for (const auto& [key, count] : t.sorted()) {
    out << key.left << '\t' << key.right << '\t' << key.distance << '\t'
        << count << '\n';
  }
}

inline void write_ngrams(std::ostream& out, const NGramTables& t) {
  out << kNGramsHeader << "\torder=" << t.order() << '\n';
  for (int k = 1; k <= t.order(); ++k) {
    for (const auto& [gram, count] : t.grams(k)) {
      out << k << '\t';
      for (std::size_t i = 0; i < gram.size(); ++i) {
        if (i) out << ' ';
        out << gram[i];
      }
      out << '\t' << count << '\n';
    }
  }
}

inline Vocab read_vocab(std::istream& in, const std::string& name = "vocab") {
  detail::LineReader reader(in, name);
  std::string header;
  reader.header(kVocabHeader, header);
  Vocab vocab;
  std::string line;
  std::size_t expected = 0;
  while (reader.next(line)) {
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 2) {
      throw ParseError(name, reader.line_no(), "expected 2 fields");
    }
    const auto id = detail::parse_int<std::uint64_t>(fields[0], name,
                                                     reader.line_no(), "id");
    if (id != expected) {
      throw ParseError(name, reader.line_no(), "ids must be dense and ordered");
    }
    if (fields[1].empty()) throw ParseError(name, reader.line_no(), "empty surface");
    if (id == 0) {
      if (fields[1] != kMarkerSurface) {
        throw ParseError(name, reader.line_no(), "id 0 must be the marker '*'");
      }
    } else {
      if (fields[1] == kMarkerSurface || vocab.find(fields[1])) {
        throw ParseError(name, reader.line_no(),
                         "duplicate surface '" + std::string(fields[1]) + "'");
      }
      vocab.intern(fields[1]);
    }
    ++expected;
  }
  return vocab;
}

inline PairTable read_pairs(std::istream& in, const std::string& name = "pairs") {
  detail::LineReader reader(in, name);
  std::string header;
  reader.header(kPairsHeader, header);
  PairTable t;
  std::string line;
  while (reader.next(line)) {
    const auto fields = detail::split_tabs(line);
    const std::size_t n = reader.line_no();
    if (fields.size() != 4) throw ParseError(name, n, "expected 4 fields");
    PairKey key{detail::parse_int<TokenId>(fields[0], name, n, "left id"),
                detail::parse_int<TokenId>(fields[1], name, n, "right id"),
                detail::parse_int<std::uint32_t>(fields[2], name, n, "distance")};
    const auto count = detail::parse_int<std::uint64_t>(fields[3], name, n, "count");
    if (key.distance == 0) throw ParseError(name, n, "distance must be >= 1");
    if (count == 0) throw ParseError(name, n, "count must be >= 1");
    if (t.count(key) != 0) throw ParseError(name, n, "duplicate key");
    t.add(key, count);
  }
  return t;
}

inline NGramTables read_ngrams(std::istream& in,
                               const std::string& name = "ngrams") {
  detail::LineReader reader(in, name);
  std::string header;
  const auto extra = reader.header(kNGramsHeader, header);
  if (extra.size() != 1 || !extra[0].starts_with("order=")) {
    throw ParseError(name, 1, "header must carry order=N");
  }
  const int order =
      detail::parse_int<int>(extra[0].substr(6), name, 1, "order");
  if (order < 1) throw ParseError(name, 1, "order must be >= 1");
  NGramTables t(order);
  std::string line;
  std::vector<TokenId> gram;
  while (reader.next(line)) {
    const auto fields = detail::split_tabs(line);
    const std::size_t n = reader.line_no();
    if (fields.size() != 3) throw ParseError(name, n, "expected 3 fields");
    const int k = detail::parse_int<int>(fields[0], name, n, "k");
    if (k < 1 || k > order) throw ParseError(name, n, "k outside 1..order");
    gram.clear();
    for (std::string_view id : detail::split_ws(fields[1])) {
      gram.push_back(detail::parse_int<TokenId>(id, name, n, "token id"));
    }
    if (gram.size() != static_cast<std::size_t>(k)) {
      throw ParseError(name, n, "gram length does not match k");
    }
    const auto count = detail::parse_int<std::uint64_t>(fields[2], name, n, "count");
    if (count == 0) throw ParseError(name, n, "count must be >= 1");
    if (t.count(gram) != 0) throw ParseError(name, n, "duplicate gram");
    t.add(gram, count);
  }
  return t;
}

/// A loaded table directory.
struct TableSet {
  Vocab vocab;
  Tables tables;
};

inline void save_tables(const std::filesystem::path& dir, const Vocab& vocab,
                        const Tables& tables) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw LoadError("cannot create table directory " + dir.string());
  const auto write = [&](std::string_view file, auto&& fn) {
    const auto path = dir / file;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError("cannot write " + path.string());
    fn(out);
    out.flush();
    if (!out) throw LoadError("write failure on " + path.string());
  };
  write(kVocabFile, [&](std::ostream& o) { write_vocab(o, vocab); });
  write(kPairsFile, [&](std::ostream& o) { write_pairs(o, tables.pairs); });
  write(kNGramsFile, [&](std::ostream& o) { write_ngrams(o, tables.ngrams); });
}

inline TableSet load_tables(const std::filesystem::path& dir) {
  const auto open = [&](std::string_view file) {
    const auto path = dir / file;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open " + path.string());
    return in;
  };
  auto vin = open(kVocabFile);
  auto pin = open(kPairsFile);
  auto nin = open(kNGramsFile);
  TableSet set{read_vocab(vin, (dir / kVocabFile).string()),
               Tables{read_pairs(pin, (dir / kPairsFile).string()),
                      read_ngrams(nin, (dir / kNGramsFile).string())}};
  const auto v = set.vocab.size();
  for (const auto& [key, c] : set.tables.pairs.counts()) {
    if (key.left >= v || key.right >= v) {
      throw LoadError("pair table references ids outside the vocabulary");
    }
  }
  for (const auto& [gram, c] : set.tables.ngrams.grams(1)) {
    if (gram[0] >= v) {
      throw LoadError("n-gram table references ids outside the vocabulary");
    }
  }
  return set;
}

/// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
inline std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace bagorder
