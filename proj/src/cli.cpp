#include "corchete/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "corchete/client.hpp"
#include "corchete/cyk.hpp"
#include "corchete/evaluator.hpp"
#include "corchete/ingest.hpp"
#include "corchete/pcfg.hpp"
#include "corchete/render.hpp"
#include "corchete/repair.hpp"
#include "corchete/tree.hpp"

namespace corchete::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Carries an exit code and error category out of a subcommand.
class Failure : public std::runtime_error {
 public:
  Failure(int code, std::string category, const std::string& message)
      : std::runtime_error(message), code_(code), category_(std::move(category)) {}
  int code() const noexcept { return code_; }
  const std::string& category() const noexcept { return category_; }

 private:
  int code_;
  std::string category_;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ingest::IngestError(ingest::IngestErrorKind::Io, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ingest::IngestError(ingest::IngestErrorKind::Io, "cannot write '" + path.string() + "'");
  return out;
}

void write_file(const fs::path& path, std::string_view content) {
  auto out = open_out(path);
  out << content;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Manifest {
  std::string subcommand;
  ordered_json inputs = ordered_json::object();
  ordered_json outputs = ordered_json::object();
  ordered_json config = ordered_json::object();

  void write(const fs::path& path) const {
    ordered_json j;
    j["subcommand"] = subcommand;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["config"] = config;
    j["version"] = CORCHETE_VERSION;
    j["timestamp"] = utc_timestamp();
    write_file(path, j.dump(2) + "\n");
  }
};

fs::path manifest_path(const fs::path& artifact) { return fs::path(artifact.string() + ".manifest.json"); }

ordered_json eval_config_json(const eval::EvalConfig& c) {
  ordered_json j;
  j["include_preterminals"] = c.include_preterminals;
  j["ignore_labels"] = std::vector<std::string>(c.ignore_labels.begin(), c.ignore_labels.end());
  j["aggregation"] = c.aggregation == eval::Aggregation::Micro ? "micro" : "macro";
  return j;
}

ordered_json endpoint_json(const client::EndpointConfig& c) {
  ordered_json j;
  j["base_url"] = c.base_url;
  j["timeout_s"] = c.timeout_s;
  j["max_in_flight"] = c.max_in_flight;
  j["max_new_tokens"] = c.max_new_tokens;
  j["stop"] = c.stop;
  j["temperature"] = c.temperature;
  j["prompt_template"] = c.prompt_template;
  return j;
}

// Trees in a corpus file are stored one per line; empty lines mark
// predictions that could not be recovered.
std::vector<std::optional<SyntaxTree>> read_prediction_lines(const fs::path& path) {
  std::vector<std::optional<SyntaxTree>> out;
  for (const auto& line : split_lines(read_file(path))) {
    if (normalize_whitespace(line).empty()) {
      out.emplace_back();
      continue;
    }
    try {
      out.emplace_back(parse_bracketed(line));
    } catch (const ParseError&) {
      out.emplace_back();
    }
  }
  return out;
}

struct RawGeneration {
  std::string id;
  std::optional<std::string> raw;
};

// Accepts the JSONL written by `predict` or plain newline-delimited text.
std::vector<RawGeneration> read_raw(const fs::path& path) {
  const auto lines = split_lines(read_file(path));
  std::vector<RawGeneration> out;
  bool jsonl = !lines.empty();
  for (const auto& line : lines) {
    if (line.empty() || line.front() != '{') {
      jsonl = false;
      break;
    }
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("raw")) {
      jsonl = false;
      break;
    }
  }
  if (jsonl) {
    for (const auto& line : lines) {
      const auto rec = client::record_from_jsonl(line);
      out.push_back({rec.id, rec.raw});
    }
    return out;
  }
  for (std::size_t i = 0; i < lines.size(); ++i) out.push_back({path.filename().string() + ":" + std::to_string(i + 1), lines[i]});
  return out;
}

std::optional<double> mean_latency(const fs::path& predictions) {
  std::vector<client::PredictionRecord> records;
  for (const auto& line : split_lines(read_file(predictions)))
    if (!line.empty()) records.push_back(client::record_from_jsonl(line));
  const auto s = client::summarize(records);
  if (s.successes == 0) return std::nullopt;
  return s.mean_s;
}

void apply_env(client::EndpointConfig& cfg, bool url_given, bool timeout_given) {
  if (const char* url = std::getenv("CORCHETE_ENDPOINT"); url && *url && !url_given) cfg.base_url = url;
  if (const char* t = std::getenv("CORCHETE_TIMEOUT"); t && *t && !timeout_given) {
    char* end = nullptr;
    const double v = std::strtod(t, &end);
    if (end == t || *end != '\0') throw client::ConfigError("CORCHETE_TIMEOUT is not a number: '" + std::string(t) + "'");
    cfg.timeout_s = v;
  }
}

int emit(std::ostream& err, std::string_view category, std::string_view message, int code) {
  std::string line(message);
  if (line.starts_with(std::string(category) + ": ")) line.erase(0, category.size() + 2);
  for (auto& c : line)
    if (c == '\n' || c == '\r') c = ' ';
  err << "error:" << category << ":" << line << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constituency parsing toolkit for bracketed Spanish trees", "corchete"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CORCHETE_VERSION));

  std::string tokenizer_id = "whitespace";

  // convert
  fs::path xml_dir, label_map_path, convert_out;
  ingest::ConvertOptions convert_opts;
  auto* convert = app.add_subcommand("convert", "Convert XML treebank files to bracket notation");
  convert->add_option("--xml-dir", xml_dir, "Directory of *.xml files")->required()->check(CLI::ExistingDirectory);
  convert->add_option("--label-map", label_map_path, "Label map file")->required()->check(CLI::ExistingFile);
  convert->add_option("--out", convert_out, "Output bracket corpus")->required();
  convert->add_option("--tokenizer", tokenizer_id, "Tokenizer used for token counts");
  convert->add_option("--sentence-tag", convert_opts.sentence_tag, "Element delimiting a sentence");
  convert->add_option("--token-attr", convert_opts.token_attribute, "Attribute holding a word form");

  // stats
  fs::path stats_corpus;
  auto* stats = app.add_subcommand("stats", "Corpus statistics as JSON");
  stats->add_option("--corpus", stats_corpus)->required()->check(CLI::ExistingFile);
  stats->add_option("--tokenizer", tokenizer_id);

  // filter
  fs::path filter_corpus, filter_out;
  std::size_t limit = 512;
  auto* filter = app.add_subcommand("filter", "Drop examples above a token limit");
  filter->add_option("--corpus", filter_corpus)->required()->check(CLI::ExistingFile);
  filter->add_option("--limit", limit)->capture_default_str();
  filter->add_option("--tokenizer", tokenizer_id);
  filter->add_option("--out", filter_out)->required();

  // split
  fs::path split_corpus, out_train, out_test;
  double train_frac = 0.8;
  std::uint64_t seed = 0;
  auto* split = app.add_subcommand("split", "Seeded train/test split");
  split->add_option("--corpus", split_corpus)->required()->check(CLI::ExistingFile);
  split->add_option("--train-frac", train_frac)->capture_default_str();
  split->add_option("--seed", seed)->capture_default_str();
  split->add_option("--out-train", out_train, "Training file (<s> format)")->required();
  split->add_option("--out-test", out_test, "Held-out bracket corpus")->required();
  split->add_option("--tokenizer", tokenizer_id);

  // induce
  fs::path treebank, grammar_out;
  std::size_t order = 2, unk = 2;
  auto* induce = app.add_subcommand("induce", "Induce a PCFG from a treebank");
  induce->add_option("--treebank", treebank)->required()->check(CLI::ExistingFile);
  induce->add_option("--order", order)->capture_default_str();
  induce->add_option("--unk", unk, "Frequency below which tokens use signatures (0 disables)")->capture_default_str();
  induce->add_option("--out", grammar_out)->required();

  // parse-cyk
  fs::path grammar_in, cyk_sentences, cyk_out;
  auto* parse_cyk = app.add_subcommand("parse-cyk", "Parse sentences with a PCFG");
  parse_cyk->add_option("--grammar", grammar_in)->required()->check(CLI::ExistingFile);
  parse_cyk->add_option("--sentences", cyk_sentences)->required()->check(CLI::ExistingFile);
  parse_cyk->add_option("--out", cyk_out)->required();

  // predict
  client::EndpointConfig endpoint;
  fs::path predict_sentences, predict_out;
  auto* predict = app.add_subcommand("predict", "Query a /generate endpoint for every sentence");
  auto* url_opt = predict->add_option("--endpoint", endpoint.base_url);
  predict->add_option("--sentences", predict_sentences)->required()->check(CLI::ExistingFile);
  predict->add_option("--out", predict_out, "JSONL predictions")->required();
  auto* timeout_opt = predict->add_option("--timeout", endpoint.timeout_s)->capture_default_str();
  predict->add_option("--max-in-flight", endpoint.max_in_flight)->capture_default_str();
  predict->add_option("--max-new-tokens", endpoint.max_new_tokens)->capture_default_str();
  predict->add_option("--stop", endpoint.stop)->capture_default_str();
  predict->add_option("--temperature", endpoint.temperature)->capture_default_str();
  predict->add_option("--template", endpoint.prompt_template);

  // repair
  fs::path raw_in, repair_out;
  auto* repair_cmd = app.add_subcommand("repair", "Repair raw generations into bracket trees");
  repair_cmd->add_option("--raw", raw_in)->required()->check(CLI::ExistingFile);
  repair_cmd->add_option("--out", repair_out)->required();

  // eval
  fs::path gold_in, pred_in, eval_out, eval_predictions;
  eval::EvalConfig eval_cfg;
  std::vector<std::string> ignore;
  bool macro = false;
  std::string model_name = "model";
  auto* evaluate = app.add_subcommand("eval", "Labeled bracket precision, recall and F1");
  evaluate->add_option("--gold", gold_in)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--pred", pred_in)->required()->check(CLI::ExistingFile);
  evaluate->add_flag("--include-preterminals", eval_cfg.include_preterminals);
  auto* ignore_opt = evaluate->add_option("--ignore", ignore, "Label excluded from scoring (repeatable)");
  evaluate->add_flag("--macro", macro, "Average per-sentence scores");
  evaluate->add_option("--model", model_name);
  evaluate->add_option("--predictions", eval_predictions, "predict JSONL, for the Time column")->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval_out, "JSON report");

  // render
  fs::path tree_file, render_out;
  std::string format = "ascii";
  auto* render_cmd = app.add_subcommand("render", "Draw trees as ASCII or SVG files");
  render_cmd->add_option("--tree-file", tree_file)->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--format", format)->check(CLI::IsMember({"ascii", "svg"}))->capture_default_str();
  render_cmd->add_option("--out", render_out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << CORCHETE_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    return emit(err, "usage", e.what(), kUsage);
  }

  try {
    Manifest m;
    if (*convert) {
      m.subcommand = "convert";
      const auto tok = ingest::TokenizerHandle::resolve(tokenizer_id);
      const auto map = ingest::LabelMap::load(label_map_path);
      const auto records = ingest::convert_directory(xml_dir, map, tok, convert_opts);
      ingest::write_brackets(records, convert_out);
      m.inputs = {{"xml_dir", xml_dir.string()}};
      m.outputs = {{"corpus", convert_out.string()}, {"ids", convert_out.string() + ".ids"}};
      m.config = {{"label_map", label_map_path.string()},
                  {"tokenizer", tok.id()},
                  {"sentence_tag", convert_opts.sentence_tag},
                  {"token_attribute", convert_opts.token_attribute}};
      m.write(manifest_path(convert_out));
      out << "converted " << records.size() << " sentences\n";
    } else if (*stats) {
      const auto tok = ingest::TokenizerHandle::resolve(tokenizer_id);
      const auto records = ingest::read_corpus(stats_corpus, tok);
      auto s = ingest::corpus_stats(records);
      auto j = ordered_json::parse(ingest::stats_to_json(s));
      j["tokenizer"] = tok.id();
      out << j.dump(2) << "\n";
    } else if (*filter) {
      m.subcommand = "filter";
      const auto tok = ingest::TokenizerHandle::resolve(tokenizer_id);
      const auto records = ingest::read_corpus(filter_corpus, tok);
      const auto result = ingest::filter_by_token_limit(records, limit, tok);
      ingest::write_brackets(result.kept, filter_out);
      m.inputs = {{"corpus", filter_corpus.string()}};
      m.outputs = {{"corpus", filter_out.string()}};
      m.config = {{"tokenizer", tok.id()}, {"limit", limit}};
      m.write(manifest_path(filter_out));
      out << "kept " << result.kept.size() << " rejected " << result.rejected.size() << " (tokenizer " << tok.id()
          << ", limit " << limit << ")\n";
    } else if (*split) {
      m.subcommand = "split";
      const auto tok = ingest::TokenizerHandle::resolve(tokenizer_id);
      const auto records = ingest::read_corpus(split_corpus, tok);
      const auto result = ingest::split(records, train_frac, seed);
      ingest::emit_training_file(result.train, out_train);
      ingest::write_brackets(result.test, out_test);
      m.inputs = {{"corpus", split_corpus.string()}};
      m.outputs = {{"train", out_train.string()}, {"test", out_test.string()}};
      m.config = {{"train_frac", train_frac}, {"seed", seed}, {"tokenizer", tok.id()}};
      m.write(manifest_path(out_train));
      m.write(manifest_path(out_test));
      out << "train " << result.train.size() << " test " << result.test.size() << "\n";
    } else if (*induce) {
      m.subcommand = "induce";
      const auto tok = ingest::TokenizerHandle::resolve("whitespace");
      std::vector<SyntaxTree> trees;
      for (const auto& r : ingest::read_corpus(treebank, tok)) trees.push_back(parse_bracketed(r.gold));
      const auto g = pcfg::induce_grammar(trees, order, unk);
      write_file(grammar_out, pcfg::write_grammar(g));
      m.inputs = {{"treebank", treebank.string()}};
      m.outputs = {{"grammar", grammar_out.string()}};
      m.config = {{"order", order}, {"unk_threshold", unk}};
      m.write(manifest_path(grammar_out));
      out << "rules " << g.binary_rules().size() + g.lexical_rules().size() + g.unary_rules().size() << " symbols "
          << g.symbol_count() << "\n";
    } else if (*parse_cyk) {
      m.subcommand = "parse-cyk";
      const auto g = pcfg::read_grammar(read_file(grammar_in));
      const auto sentences = ingest::read_sentences(cyk_sentences);
      auto file = open_out(cyk_out);
      std::size_t failures = 0;
      for (const auto& s : sentences) {
        std::vector<std::string> tokens;
        std::istringstream words(s);
        for (std::string w; words >> w;) tokens.push_back(ingest::sanitize_token(w));
        const auto result = pcfg::cyk_parse(tokens, g);
        if (result)
          file << serialize(result->tree);
        else
          ++failures;
        file << "\n";
      }
      file.close();
      m.inputs = {{"grammar", grammar_in.string()}, {"sentences", cyk_sentences.string()}};
      m.outputs = {{"parses", cyk_out.string()}};
      m.write(manifest_path(cyk_out));
      out << "parsed " << sentences.size() - failures << " of " << sentences.size() << "\n";
    } else if (*predict) {
      m.subcommand = "predict";
      apply_env(endpoint, url_opt->count() > 0, timeout_opt->count() > 0);
      endpoint.validate();

      std::vector<client::SentenceInput> inputs;
      const auto text = read_file(predict_sentences);
      bool trees = false;
      for (const auto& line : split_lines(text)) {
        const auto t = normalize_whitespace(line);
        if (!t.empty()) {
          trees = t.front() == '[' || t.rfind("<s>[", 0) == 0;
          break;
        }
      }
      if (trees) {
        for (const auto& r : ingest::read_corpus(predict_sentences, ingest::TokenizerHandle::resolve("whitespace")))
          inputs.push_back({r.id, r.sentence});
      } else {
        std::size_t k = 0;
        for (const auto& s : ingest::read_sentences(predict_sentences))
          inputs.push_back({predict_sentences.filename().string() + ":" + std::to_string(++k), s});
      }

      const auto batch = client::predict_corpus(inputs, endpoint);
      auto file = open_out(predict_out);
      for (const auto& r : batch.records) file << client::record_to_jsonl(r) << "\n";
      file.close();
      const fs::path summary_path = predict_out.string() + ".latency.json";
      write_file(summary_path, client::summary_to_json(batch.summary) + "\n");

      m.inputs = {{"sentences", predict_sentences.string()}};
      m.outputs = {{"predictions", predict_out.string()}, {"latency", summary_path.string()}};
      m.config = {{"endpoint", endpoint_json(endpoint)}};
      m.write(manifest_path(predict_out));
      out << client::summary_to_json(batch.summary) << "\n";

      if (batch.summary.successes == 0) {
        bool network = true;
        for (const auto& r : batch.records)
          if (r.error && r.error->kind != client::ErrorKind::Timeout && r.error->kind != client::ErrorKind::Transport)
            network = false;
        const auto& first = *batch.records.front().error;
        if (network) throw Failure(kNetworkError, std::string(client::to_string(first.kind)), first.message);
        throw Failure(kDataError, std::string(client::to_string(first.kind)), first.message);
      }
    } else if (*repair_cmd) {
      m.subcommand = "repair";
      const auto raws = read_raw(raw_in);
      auto file = open_out(repair_out);
      auto log = open_out(repair_out.string() + ".log.jsonl");
      std::size_t fatal = 0;
      std::string ids;
      for (const auto& g : raws) {
        ordered_json entry;
        entry["id"] = g.id;
        if (!g.raw) {
          entry["fatal"] = true;
          entry["reason"] = "no generation";
          entry["actions"] = ordered_json::array();
          ++fatal;
        } else {
          const auto o = repair::repair(*g.raw);
          if (o.repaired) file << *o.repaired;
          entry["fatal"] = o.fatal;
          if (o.fatal) {
            entry["reason"] = o.reason;
            ++fatal;
          }
          ordered_json actions = ordered_json::array();
          for (auto a : o.actions) actions.push_back(std::string(repair::to_string(a)));
          entry["actions"] = actions;
        }
        file << "\n";
        log << entry.dump() << "\n";
        ids += g.id + "\n";
      }
      file.close();
      log.close();
      write_file(repair_out.string() + ".ids", ids);
      m.inputs = {{"raw", raw_in.string()}};
      m.outputs = {{"trees", repair_out.string()}, {"log", repair_out.string() + ".log.jsonl"}};
      m.write(manifest_path(repair_out));
      out << "repaired " << raws.size() - fatal << " of " << raws.size() << "\n";
    } else if (*evaluate) {
      m.subcommand = "eval";
      if (ignore_opt->count() > 0) eval_cfg.ignore_labels = {ignore.begin(), ignore.end()};
      eval_cfg.aggregation = macro ? eval::Aggregation::Macro : eval::Aggregation::Micro;

      const auto gold = ingest::read_corpus(gold_in, ingest::TokenizerHandle::resolve("whitespace"));
      auto preds = read_prediction_lines(pred_in);
      // A trailing newline-only line count mismatch is tolerated; anything else is not.
      while (preds.size() > gold.size() && !preds.back()) preds.pop_back();
      if (preds.size() != gold.size())
        throw ingest::IngestError(ingest::IngestErrorKind::MalformedTree,
                                  "gold has " + std::to_string(gold.size()) + " trees but predictions have " +
                                      std::to_string(preds.size()) + " lines");
      std::vector<eval::ScoredPair> pairs;
      for (std::size_t i = 0; i < gold.size(); ++i) pairs.push_back({parse_bracketed(gold[i].gold), preds[i]});
      const auto report = eval::score_corpus(pairs, eval_cfg);

      std::optional<double> latency;
      if (!eval_predictions.empty()) latency = mean_latency(eval_predictions);
      out << eval::report_table({{model_name, latency, report}});
      out << "F1 " << eval::format_score(report.f1) << "\n";
      if (!eval_out.empty()) {
        write_file(eval_out, eval::report_to_json(report, model_name) + "\n");
        m.inputs = {{"gold", gold_in.string()}, {"pred", pred_in.string()}};
        m.outputs = {{"report", eval_out.string()}};
        m.config = {{"eval", eval_config_json(eval_cfg)}, {"model", model_name}};
        m.write(manifest_path(eval_out));
      }
    } else if (*render_cmd) {
      m.subcommand = "render";
      // Every top-level bracket expression is a tree, even when wrapped over
      // several lines; sentence text between them is skipped.
      std::vector<SyntaxTree> trees;
      const std::string text = read_file(tree_file);
      int depth = 0;
      std::size_t begin = 0;
      for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '[') {
          if (depth++ == 0) begin = i;
        } else if (text[i] == ']' && depth > 0 && --depth == 0) {
          trees.push_back(parse_bracketed(normalize_whitespace(text.substr(begin, i + 1 - begin))));
        }
      }
      if (depth > 0) trees.push_back(parse_bracketed(normalize_whitespace(text.substr(begin))));
      fs::create_directories(render_out);
      const std::string ext = format == "svg" ? ".svg" : ".txt";
      ordered_json files = ordered_json::array();
      for (std::size_t i = 0; i < trees.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "tree_%04zu", i + 1);
        const fs::path p = render_out / (name + ext);
        write_file(p, format == "svg" ? render::render_svg(trees[i]) : render::render_ascii(trees[i]));
        files.push_back(p.string());
      }
      m.inputs = {{"tree_file", tree_file.string()}};
      m.outputs = {{"files", files}};
      m.config = {{"format", format}};
      m.write(render_out / "manifest.json");
      out << "rendered " << trees.size() << " trees\n";
    }
  } catch (const Failure& f) {
    err << "error:" << f.category() << ":" << f.what() << "\n";
    return f.code();
  } catch (const ParseError& e) {
    return emit(err, to_string(e.kind()), e.what(), kDataError);
  } catch (const ingest::IngestError& e) {
    return emit(err, ingest::to_string(e.kind()), e.what(), kDataError);
  } catch (const ingest::LabelMapError& e) {
    return emit(err, "LabelMap", e.what(), kDataError);
  } catch (const ingest::TokenizerError& e) {
    return emit(err, "Tokenizer", e.what(), kDataError);
  } catch (const pcfg::GrammarError& e) {
    return emit(err, "Grammar", e.what(), kDataError);
  } catch (const client::ConfigError& e) {
    return emit(err, "usage", e.what(), kUsage);
  } catch (const client::EmptyInputError& e) {
    return emit(err, "EmptyInput", e.what(), kDataError);
  } catch (const eval::EmptyInputError& e) {
    return emit(err, "EmptyInput", e.what(), kDataError);
  } catch (const std::invalid_argument& e) {
    return emit(err, "usage", e.what(), kUsage);
  } catch (const std::exception& e) {
    return emit(err, "data", e.what(), kDataError);
  }
  return kOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace corchete::cli
