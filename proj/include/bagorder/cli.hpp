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

// Command-line front end. Exit codes: 0 success, 1 domain error, 2 usage.

#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bagorder/corpus.hpp"
#include "bagorder/counterexample.hpp"
#include "bagorder/error.hpp"
#include "bagorder/eval.hpp"
#include "bagorder/scoring.hpp"
#include "bagorder/search.hpp"
#include "bagorder/table_io.hpp"
#include "bagorder/tables.hpp"

namespace bagorder {

inline constexpr std::string_view kVersion = "1.0.0";

/// Parsed command line.
struct RunConfig {
  std::string subcommand;
  std::string corpus;
  std::string tables;
  std::string out;
  std::string test;
  std::string tsv;
  std::string model = "approx";
  std::string order = "2";
  std::string models = "M2,M3,AM2,AM3,AMn";
  std::string floor = "0";
  std::optional<std::uint32_t> distance_cap;
  bool no_condition4 = false;
  std::optional<std::size_t> beam_width;
  std::vector<std::string> bags;
  std::vector<std::string> sentences;
  std::uint64_t seed = 0;
  std::size_t trials = 20000;
  unsigned threads = 1;
  bool open = false;
  bool oracle = false;
  int train_order = 3;
};

namespace cli_detail {

inline ModelSpec model_spec(const RunConfig& rc) {
  if (rc.model == "exact") return {Model::kExact, Order::parse(rc.order)};
  if (rc.model == "approx") return {Model::kApprox, Order::parse(rc.order)};
  return ModelSpec::parse(rc.model);
}

inline std::vector<ModelSpec> model_list(const std::string& csv) {
  std::vector<ModelSpec> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(ModelSpec::parse(item));
  }
  if (out.empty()) throw ConfigError("no models given");
  return out;
}

inline std::string table_header(const std::filesystem::path& dir) {
  return "# tables: " + dir.string() +
         " vocab=" + file_checksum(dir / kVocabFile) +
         " pairs=" + file_checksum(dir / kPairsFile) +
         " ngrams=" + file_checksum(dir / kNGramsFile) + '\n';
}

inline TableSet load(const RunConfig& rc) {
  if (rc.tables.empty()) {
    throw ConfigError("no table directory (use --tables or BAGORDER_TABLES)");
  }
  TableSet set = load_tables(rc.tables);
  set.tables.pairs.set_floor(Ratio::from_decimal(rc.floor));
  return set;
}

inline std::vector<std::string> input_lines(const std::vector<std::string>& flag,
                                            std::istream& in) {
  if (!flag.empty()) return flag;
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline int cmd_train(const RunConfig& rc, std::ostream& out) {
  Vocab vocab;
  const auto corpus = load_corpus(rc.corpus, vocab);
  const Tables tables =
      train(corpus, TrainOptions{rc.train_order, rc.distance_cap, rc.threads});
  save_tables(rc.out, vocab, tables);
  out << "# bagorder " << kVersion << '\n';
  out << "# command: train order=" << rc.train_order << " distance_cap="
      << (rc.distance_cap ? std::to_string(*rc.distance_cap) : "none") << '\n';
  out << table_header(rc.out);
  out << "sentences\t" << corpus.size() << '\n';
  out << "vocab\t" << vocab.size() << '\n';
  out << "pairs\t" << tables.pairs.size() << '\n';
  out << "total_pairs\t" << tables.pairs.total_pairs() << '\n';
  return 0;
}

inline int cmd_score(const RunConfig& rc, std::istream& in, std::ostream& out,
                     std::ostream& err) {
  // Words missing from the vocabulary get fresh ids, hence zero probability.
  TableSet set = load(rc);
  const ModelSpec spec = model_spec(rc);
  out << "# bagorder " << kVersion << '\n';
  out << "# command: score model=" << spec.label() << " floor=" << rc.floor << '\n';
  out << table_header(rc.tables);
  for (const auto& text : input_lines(rc.sentences, in)) {
    const Sentence s = parse_sentence(text, set.vocab);
    const ScoreResult r = spec.model == Model::kApprox
                              ? approx_score(s, spec.order, set.tables)
                              : score_direct(s, spec, set.tables);
    if (r.order.clamped) {
      err << "warning: order clamped to full for '" << text << "'\n";
    }
    out << surface(s.tokens, set.vocab) << '\t' << r.score.str() << '\n';
  }
  return 0;
}

inline int cmd_generate(const RunConfig& rc, std::istream& in, std::ostream& out,
                        std::ostream& err) {
  TableSet set = load(rc);
  const SearchConfig cfg{model_spec(rc), !rc.no_condition4, rc.beam_width};
  out << "# bagorder " << kVersion << '\n';
  out << "# command: generate model=" << cfg.model.label()
      << " condition4=" << (cfg.condition4 ? "on" : "off (unsafe)")
      << " beam=" << (cfg.beam_width ? std::to_string(*cfg.beam_width) : "none")
      << (cfg.beam_width ? " (approximate search)" : "")
      << " floor=" << rc.floor << (rc.oracle ? " search=brute-force" : "") << '\n';
  out << table_header(rc.tables);
  int status = 0;
  for (const auto& text : input_lines(rc.bags, in)) {
    const Bag bag = to_bag(parse_sentence(text, set.vocab));
    try {
      const GenerationResult r = rc.oracle
                                     ? brute_force_generate(bag, cfg, set.tables)
                                     : generate(bag, cfg, set.tables);
      out << format_result(r, set.vocab) << '\n';
    } catch (const NoArrangement& e) {
      err << "error: " << e.what() << " for bag '" << text << "'\n";
      status = 1;
    }
  }
  return status;
}

inline int cmd_eval(const RunConfig& rc, std::ostream& out) {
  const auto models = model_list(rc.models);
  std::vector<SearchConfig> configs;
  int needed_order = 2;
  for (const auto& m : models) {
    configs.push_back({m, !rc.no_condition4, rc.beam_width});
    if (m.model == Model::kExact) needed_order = std::max(needed_order, m.order.value());
  }
  Vocab vocab;
  Tables tables;
  std::vector<Sentence> test;
  std::string mode;
  if (rc.open) {
    const auto corpus = load_corpus(rc.test, vocab);
    Split split = split_open(corpus);
    tables = train(split.train, TrainOptions{needed_order, rc.distance_cap, rc.threads});
    tables.pairs.set_floor(Ratio::from_decimal(rc.floor));
    test = std::move(split.test);
    mode = "open (every 5th line held out)";
  } else {
    TableSet set = load(rc);
    vocab = std::move(set.vocab);
    tables = std::move(set.tables);
    test = load_corpus(rc.test, vocab);
    mode = "closed";
  }
  const EvalReport report =
      evaluate(test, configs, tables, EvalOptions{rc.threads, rc.oracle});
  out << "# bagorder " << kVersion << '\n';
  out << "# command: eval models=" << rc.models << " mode=" << mode
      << " search=" << (rc.oracle ? "brute-force" : "dp")
      << " condition4=" << (rc.no_condition4 ? "off (unsafe)" : "on")
      << " beam=" << (rc.beam_width ? std::to_string(*rc.beam_width) : "none")
      << '\n';
  if (!rc.open) out << table_header(rc.tables);
  out << render(report);
  if (!rc.tsv.empty()) {
    std::ofstream tsv(rc.tsv, std::ios::binary | std::ios::trunc);
    if (!tsv) throw LoadError("cannot write " + rc.tsv);
    tsv << to_tsv(report);
  }
  return 0;
}

inline int cmd_params(const RunConfig& rc, std::ostream& out) {
  const TableSet set = load(rc);
  out << "# bagorder " << kVersion << '\n';
  out << "# command: params models=" << rc.models << '\n';
  out << table_header(rc.tables);
  out << "model\tparameters\tbound\tV\tlimit\n";
  for (const auto& spec : model_list(rc.models)) {
    const ParamReport r = param_count(set.tables, spec);
    out << r.label << '\t' << r.distinct_parameters << '\t' << r.bound_note
        << '\t' << r.vocab_size << '\t' << r.limit << '\n';
  }
  return 0;
}

inline int cmd_counterexample(const RunConfig& rc, std::ostream& out,
                              std::ostream& err) {
  out << "# bagorder " << kVersion << '\n';
  out << "# command: counterexample seed=" << rc.seed << " trials=" << rc.trials
      << '\n';
  const auto found = find_condition4_counterexample(rc.seed, rc.trials);
  if (!found) {
    err << "no counterexample within " << rc.trials << " trials\n";
    return 1;
  }
  const std::string text = found->serialize();
  if (!rc.out.empty()) {
    std::ofstream file(rc.out, std::ios::binary | std::ios::trunc);
    if (!file) throw LoadError("cannot write " + rc.out);
    file << text;
  }
  out << "# found at trial " << found->trial << '\n' << text;
  return 0;
}

}  // namespace cli_detail

/// Runs one subcommand. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in,
               std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Word-order recovery with exact and approximate n-gram models",
               "bagorder"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kVersion));

  const auto add_tables = [&](CLI::App* sub) {
    sub->add_option("--tables", rc.tables, "Table directory")
        ->envname("BAGORDER_TABLES");
    sub->add_option("--floor", rc.floor,
                    "Probability of unseen pairs (decimal, default 0)");
  };
  const auto add_search = [&](CLI::App* sub) {
    sub->add_flag("--no-condition4", rc.no_condition4,
                  "Merge paths regardless of word coverage (unsafe)");
    sub->add_option("--beam", rc.beam_width, "Beam width per level")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--oracle", rc.oracle, "Use brute-force enumeration");
  };

  auto* train_cmd = app.add_subcommand("train", "Train tables from a corpus");
  train_cmd->add_option("--corpus", rc.corpus, "Tokenized corpus")->required();
  train_cmd->add_option("--order", rc.train_order, "Largest n-gram order")
      ->check(CLI::Range(2, 64));
  train_cmd->add_option("--out", rc.out, "Output table directory")->required();
  train_cmd->add_option("--distance-cap", rc.distance_cap, "Largest pair distance")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--threads", rc.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  auto* score_cmd = app.add_subcommand("score", "Score sentences");
  add_tables(score_cmd);
  score_cmd->add_option("--model", rc.model, "exact, approx, or a label such as AM3");
  score_cmd->add_option("--order", rc.order, "Integer order or 'full'");
  score_cmd->add_option("--sentence", rc.sentences, "Sentence (default: stdin lines)");

  auto* gen_cmd = app.add_subcommand("generate", "Recover the best arrangement of a bag");
  add_tables(gen_cmd);
  add_search(gen_cmd);
  gen_cmd->add_option("--model", rc.model, "exact, approx, or a label such as AM3");
  gen_cmd->add_option("--order", rc.order, "Integer order or 'full'");
  gen_cmd->add_option("--bag", rc.bags, "Bag of words (default: stdin lines)");

  auto* eval_cmd = app.add_subcommand("eval", "Error distribution over a test file");
  add_tables(eval_cmd);
  add_search(eval_cmd);
  eval_cmd->add_option("--test", rc.test, "Test sentences")->required();
  eval_cmd->add_option("--models", rc.models, "Comma-separated labels");
  eval_cmd->add_option("--tsv", rc.tsv, "Also write the table as TSV");
  eval_cmd->add_option("--threads", rc.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--open", rc.open,
                     "Train on 4/5 of --test and evaluate the held-out lines");
  eval_cmd->add_option("--distance-cap", rc.distance_cap, "Pair distance cap (--open)")
      ->check(CLI::PositiveNumber);

  auto* params_cmd = app.add_subcommand("params", "Parameter counts per model");
  add_tables(params_cmd);
  params_cmd->add_option("--models", rc.models, "Comma-separated labels");

  auto* cx_cmd = app.add_subcommand(
      "counterexample", "Search for a bag that unsafe merging gets wrong");
  cx_cmd->add_option("--seed", rc.seed, "RNG seed");
  cx_cmd->add_option("--trials", rc.trials, "Maximum random instances");
  cx_cmd->add_option("--out", rc.out, "Write the instance to this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  rc.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (rc.subcommand == "train") return cli_detail::cmd_train(rc, out);
    if (rc.subcommand == "score") return cli_detail::cmd_score(rc, in, out, err);
    if (rc.subcommand == "generate") return cli_detail::cmd_generate(rc, in, out, err);
    if (rc.subcommand == "eval") return cli_detail::cmd_eval(rc, out);
    if (rc.subcommand == "params") return cli_detail::cmd_params(rc, out);
    return cli_detail::cmd_counterexample(rc, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace bagorder
