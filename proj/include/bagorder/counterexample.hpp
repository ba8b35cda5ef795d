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

// Seeded random instances, and a search for bags on which merging without
// the coverage condition loses the optimum.

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bagorder/corpus.hpp"
#include "bagorder/error.hpp"
#include "bagorder/search.hpp"
#include "bagorder/tables.hpp"

namespace bagorder {

struct RandomCorpusShape {
  std::size_t vocab = 5;          // words w0 .. w{vocab-1}
  std::size_t min_sentences = 3;
  std::size_t max_sentences = 8;
  std::size_t max_length = 5;     // lengths drawn from 1..max_length
};

/// Whitespace-joined lines of random words.
inline std::vector<std::string> random_corpus(std::mt19937_64& rng,
                                              const RandomCorpusShape& shape) {
  std::uniform_int_distribution<std::size_t> count(shape.min_sentences,
                                                   shape.max_sentences);
  std::uniform_int_distribution<std::size_t> length(1, shape.max_length);
  std::uniform_int_distribution<std::size_t> word(0, shape.vocab - 1);
  std::vector<std::string> lines(count(rng));
  for (auto& line : lines) {
    const std::size_t len = length(rng);
    for (std::size_t i = 0; i < len; ++i) {
      if (i) line += ' ';
      line += "w" + std::to_string(word(rng));
    }
  }
  return lines;
}

/// Corpus lines interned into a fresh vocabulary.
struct Instance {
  Vocab vocab;
  std::vector<Sentence> corpus;
  Tables tables;
};

inline Instance make_instance(const std::vector<std::string>& lines, int order) {
  Instance inst;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    inst.corpus.push_back(parse_sentence(lines[i], inst.vocab, i + 1));
  }
  inst.tables = train(inst.corpus, order);
  return inst;
}

/// An instance where generate() without the coverage condition returns a
/// strictly lower score than the brute-force optimum.
struct Counterexample {
  std::vector<std::string> corpus;
  std::string bag;  // space-joined words
  std::string model;
  std::string oracle_score;
  std::string unsafe_score;  // "-inf" when the unsafe search died
  std::size_t trial = 0;

  std::string serialize() const {
    std::ostringstream out;
    out << "bagorder-counterexample v1\n";
    out << "model\t" << model << '\n';
    out << "bag\t" << bag << '\n';
    out << "oracle\t" << oracle_score << '\n';
    out << "unsafe\t" << unsafe_score << '\n';
    for (const auto& line : corpus) out << "corpus\t" << line << '\n';
    return out.str();
  }

  static Counterexample parse(std::istream& in) {
    Counterexample c;
    std::string line;
    if (!std::getline(in, line) || line != "bagorder-counterexample v1") {
      throw VersionError("counterexample: bad header");
    }
    std::size_t n = 1;
    while (std::getline(in, line)) {
      ++n;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw ParseError("counterexample", n, "expected key<TAB>value");
      }
      const std::string key = line.substr(0, tab);
      const std::string value = line.substr(tab + 1);
      if (key == "model") c.model = value;
      else if (key == "bag") c.bag = value;
      else if (key == "oracle") c.oracle_score = value;
      else if (key == "unsafe") c.unsafe_score = value;
      else if (key == "corpus") c.corpus.push_back(value);
      else throw ParseError("counterexample", n, "unknown key '" + key + "'");
    }
    return c;
  }
};

/// Outcome of replaying a counterexample: (oracle, unsafe) scores.
struct Replay {
  LogScore oracle;
  LogScore unsafe;
};

inline Replay replay(const Counterexample& c) {
  const ModelSpec spec = ModelSpec::parse(c.model);
  const int order =
      spec.model == Model::kExact ? std::max(3, spec.order.value()) : 3;
  Instance inst = make_instance(c.corpus, order);
  Bag bag;
  for (const auto& w : detail::split_ws(c.bag)) {
    const auto id = inst.vocab.find(w);
    if (!id) throw ConfigError("counterexample bag word not in corpus");
    bag.add(*id);
  }
  const SearchConfig safe{spec, true, std::nullopt};
  const SearchConfig unsafe{spec, false, std::nullopt};
  Replay r{brute_force_generate(bag, safe, inst.tables).score, LogScore::zero()};
  try {
    r.unsafe = generate(bag, unsafe, inst.tables).score;
  } catch (const NoArrangement&) {
  }
  return r;
}

/// Draws random corpora and bags until merging without the coverage
/// condition loses the optimum under one of `models`.
inline std::optional<Counterexample> find_condition4_counterexample(
    std::uint64_t seed, std::size_t max_trials,
    const std::vector<std::string>& models = {"M2", "M3", "AM2", "AM3"},
    const RandomCorpusShape& shape = {}) {
  std::mt19937_64 rng(seed);
  for (std::size_t trial = 0; trial < max_trials; ++trial) {
    const auto lines = random_corpus(rng, shape);
    const Instance inst = make_instance(lines, 3);
    std::uniform_int_distribution<std::size_t> pick(0, lines.size() - 1);
    const Sentence& ref = inst.corpus[pick(rng)];
    const Bag bag = to_bag(ref);
    for (const auto& label : models) {
      const ModelSpec spec = ModelSpec::parse(label);
      const SearchConfig safe{spec, true, std::nullopt};
      const SearchConfig unsafe{spec, false, std::nullopt};
      GenerationResult oracle;
      try {
        oracle = brute_force_generate(bag, safe, inst.tables);
      } catch (const NoArrangement&) {
        continue;
      }
      LogScore lost = LogScore::zero();
      try {
        lost = generate(bag, unsafe, inst.tables).score;
      } catch (const NoArrangement&) {
      }
      if (lost < oracle.score) {
        return Counterexample{lines, surface(ref.tokens, inst.vocab), label,
                              oracle.score.str(), lost.str(), trial};
      }
    }
  }
  return std::nullopt;
}

}  // namespace bagorder
