#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "corchete/binarize.hpp"
#include "corchete/cli.hpp"
#include "corchete/client.hpp"
#include "corchete/cyk.hpp"
#include "corchete/evaluator.hpp"
#include "corchete/ingest.hpp"
#include "corchete/label_map.hpp"
#include "corchete/pcfg.hpp"
#include "corchete/render.hpp"
#include "corchete/repair.hpp"
#include "corchete/tree.hpp"

namespace py = pybind11;
using namespace corchete;

namespace {

eval::EvalConfig make_eval_config(bool include_preterminals, const std::vector<std::string>& ignore, bool macro) {
  eval::EvalConfig cfg;
  cfg.include_preterminals = include_preterminals;
  cfg.ignore_labels = {ignore.begin(), ignore.end()};
  cfg.aggregation = macro ? eval::Aggregation::Macro : eval::Aggregation::Micro;
  return cfg;
}

std::vector<SyntaxTree> parse_all(const std::vector<std::string>& trees) {
  std::vector<SyntaxTree> out;
  out.reserve(trees.size());
  for (const auto& t : trees) out.push_back(parse_bracketed(t));
  return out;
}

}  // namespace

PYBIND11_MODULE(_corchete, m) {
  m.doc() = "Bracketed constituency trees: conversion, scoring, repair and a PCFG baseline";
  m.attr("__version__") = CORCHETE_VERSION;

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ingest::IngestError>(m, "IngestError", PyExc_ValueError);
  py::register_exception<ingest::LabelMapError>(m, "LabelMapError", PyExc_ValueError);
  py::register_exception<ingest::TokenizerError>(m, "TokenizerError", PyExc_ValueError);
  py::register_exception<pcfg::GrammarError>(m, "GrammarError", PyExc_ValueError);

  // trees
  py::class_<SyntaxTree>(m, "Tree")
      .def(py::init([](const std::string& text) { return parse_bracketed(text); }), py::arg("text"))
      .def_property_readonly("label", [](const SyntaxTree& t) { return t.label(); })
      .def_property_readonly("token", [](const SyntaxTree& t) { return t.token(); })
      .def_property_readonly("is_leaf", &SyntaxTree::is_leaf)
      .def_property_readonly("children", [](const SyntaxTree& t) { return t.children(); })
      .def("leaves", [](const SyntaxTree& t) { return yield_tokens(t); })
      .def("depth", &SyntaxTree::depth)
      .def("spans",
           [](const SyntaxTree& t, bool include_preterminals, const std::vector<std::string>& ignore) {
             std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
             for (const auto& s : extract_spans(t, include_preterminals, {ignore.begin(), ignore.end()}))
               out.emplace_back(s.label, s.start, s.end);
             return out;
           },
           py::arg("include_preterminals") = false, py::arg("ignore") = std::vector<std::string>{})
      .def("__str__", [](const SyntaxTree& t) { return serialize(t); })
      .def("__repr__", [](const SyntaxTree& t) { return "Tree('" + serialize(t) + "')"; })
      .def("__eq__", [](const SyntaxTree& a, const SyntaxTree& b) { return a == b; });

  m.def("parse", &parse_bracketed, py::arg("text"));
  m.def("serialize", &serialize, py::arg("tree"));
  m.def("normalize", [](const std::string& text) { return serialize(parse_bracketed(text)); }, py::arg("text"),
        "Canonical form of a bracket string.");

  // ingest
  py::class_<ingest::CorpusRecord>(m, "CorpusRecord")
      .def_readonly("id", &ingest::CorpusRecord::id)
      .def_readonly("sentence", &ingest::CorpusRecord::sentence)
      .def_readonly("gold", &ingest::CorpusRecord::gold)
      .def_readonly("token_count", &ingest::CorpusRecord::token_count)
      .def_readonly("word_count", &ingest::CorpusRecord::word_count)
      .def("__repr__", [](const ingest::CorpusRecord& r) { return "CorpusRecord(id='" + r.id + "')"; });

  m.def(
      "convert",
      [](const std::filesystem::path& xml_dir, const std::filesystem::path& label_map, const std::string& tokenizer) {
        return ingest::convert_directory(xml_dir, ingest::LabelMap::load(label_map),
                                         ingest::TokenizerHandle::resolve(tokenizer));
      },
      py::arg("xml_dir"), py::arg("label_map"), py::arg("tokenizer") = "whitespace");
  m.def(
      "read_corpus",
      [](const std::filesystem::path& path, const std::string& tokenizer) {
        return ingest::read_corpus(path, ingest::TokenizerHandle::resolve(tokenizer));
      },
      py::arg("path"), py::arg("tokenizer") = "whitespace",
      "Reads a bracket corpus or a training file.");
  m.def("training_example", &ingest::training_example, py::arg("record"));
  m.def(
      "split",
      [](const std::vector<ingest::CorpusRecord>& records, double train_fraction, std::uint64_t seed) {
        auto r = ingest::split(records, train_fraction, seed);
        return py::make_tuple(r.train, r.test);
      },
      py::arg("records"), py::arg("train_fraction") = 0.8, py::arg("seed") = 0);
  m.def(
      "filter_by_token_limit",
      [](const std::vector<ingest::CorpusRecord>& records, std::size_t limit, const std::string& tokenizer) {
        auto r = ingest::filter_by_token_limit(records, limit, ingest::TokenizerHandle::resolve(tokenizer));
        return py::make_tuple(r.kept, r.rejected);
      },
      py::arg("records"), py::arg("limit") = 512, py::arg("tokenizer") = "whitespace");
  m.def(
      "count_tokens",
      [](const std::string& text, const std::string& tokenizer) {
        return ingest::TokenizerHandle::resolve(tokenizer).count(text);
      },
      py::arg("text"), py::arg("tokenizer") = "whitespace");

  // evaluation
  m.def(
      "score",
      [](const std::string& gold, std::optional<std::string> pred, bool include_preterminals,
         const std::vector<std::string>& ignore) {
        std::optional<SyntaxTree> p;
        if (pred) p = parse_bracketed(*pred);
        const auto s = eval::score_pair(parse_bracketed(gold), p, make_eval_config(include_preterminals, ignore, false));
        py::dict d;
        d["matched"] = s.matched;
        d["gold"] = s.gold_count;
        d["pred"] = s.pred_count;
        d["precision"] = s.precision();
        d["recall"] = s.recall();
        d["f1"] = s.f1();
        return d;
      },
      py::arg("gold"), py::arg("pred"), py::arg("include_preterminals") = false,
      py::arg("ignore") = std::vector<std::string>{"Punct"});
  m.def(
      "evaluate",
      [](const std::vector<std::string>& gold, const std::vector<std::optional<std::string>>& pred,
         bool include_preterminals, const std::vector<std::string>& ignore, bool macro) {
        if (gold.size() != pred.size()) throw std::invalid_argument("gold and pred differ in length");
        std::vector<eval::ScoredPair> pairs;
        for (std::size_t i = 0; i < gold.size(); ++i) {
          std::optional<SyntaxTree> p;
          if (pred[i]) p = parse_bracketed(*pred[i]);
          pairs.push_back({parse_bracketed(gold[i]), std::move(p)});
        }
        const auto r = eval::score_corpus(pairs, make_eval_config(include_preterminals, ignore, macro));
        return py::module_::import("json").attr("loads")(eval::report_to_json(r, ""));
      },
      py::arg("gold"), py::arg("pred"), py::arg("include_preterminals") = false,
      py::arg("ignore") = std::vector<std::string>{"Punct"}, py::arg("macro") = false,
      "Corpus scores as a dict; a None prediction counts as a failed parse.");

  // repair
  m.def(
      "repair",
      [](const std::string& raw) {
        const auto o = repair::repair(raw);
        py::dict d;
        d["tree"] = o.repaired ? py::object(py::str(*o.repaired)) : py::object(py::none());
        py::list actions;
        for (auto a : o.actions) actions.append(std::string(repair::to_string(a)));
        d["actions"] = actions;
        d["fatal"] = o.fatal;
        d["reason"] = o.reason;
        return d;
      },
      py::arg("raw"));

  // pcfg
  py::class_<pcfg::Pcfg>(m, "Grammar")
      .def_property_readonly("symbol_count", &pcfg::Pcfg::symbol_count)
      .def_property_readonly("rule_count",
                             [](const pcfg::Pcfg& g) {
                               return g.binary_rules().size() + g.lexical_rules().size() + g.unary_rules().size();
                             })
      .def("max_normalization_error", &pcfg::Pcfg::max_normalization_error)
      .def(
          "parse",
          [](const pcfg::Pcfg& g, const std::vector<std::string>& tokens) -> py::object {
            const auto r = pcfg::cyk_parse(tokens, g);
            if (!r) return py::none();
            return py::make_tuple(serialize(r->tree), r->log_prob);
          },
          py::arg("tokens"), "Best tree and its log-probability, or None.")
      .def("to_text", &pcfg::write_grammar);

  m.def(
      "induce",
      [](const std::vector<std::string>& trees, std::size_t order, std::size_t unk) {
        return pcfg::induce_grammar(parse_all(trees), order, unk);
      },
      py::arg("trees"), py::arg("order") = 2, py::arg("unk") = 2);
  m.def("read_grammar", &pcfg::read_grammar, py::arg("text"));
  m.def(
      "binarize", [](const std::string& tree, std::size_t order) { return serialize(pcfg::binarize(parse_bracketed(tree), order)); },
      py::arg("tree"), py::arg("order") = 2);
  m.def(
      "debinarize", [](const std::string& tree) { return serialize(pcfg::debinarize(parse_bracketed(tree))); },
      py::arg("tree"));

  // rendering
  m.def("render_ascii", [](const std::string& tree) { return render::render_ascii(parse_bracketed(tree)); },
        py::arg("tree"));
  m.def("render_svg", [](const std::string& tree) { return render::render_svg(parse_bracketed(tree)); },
        py::arg("tree"));

  // inference client protocol
  m.def(
      "request_body",
      [](const std::string& sentence, std::size_t max_new_tokens, const std::string& stop, double temperature,
         const std::string& prompt_template) {
        client::EndpointConfig cfg;
        cfg.max_new_tokens = max_new_tokens;
        cfg.stop = stop;
        cfg.temperature = temperature;
        cfg.prompt_template = prompt_template;
        cfg.validate();
        return client::request_body(sentence, cfg);
      },
      py::arg("sentence"), py::arg("max_new_tokens") = 1024, py::arg("stop") = "</s>", py::arg("temperature") = 0.0,
      py::arg("prompt_template") = "<s>{sentence}</s>\n<s>", "JSON body the client POSTs to /generate.");
  m.def(
      "predict",
      [](const std::string& endpoint, const std::vector<std::string>& sentences, double timeout_s,
         std::size_t max_in_flight) {
        client::EndpointConfig cfg;
        cfg.base_url = endpoint;
        cfg.timeout_s = timeout_s;
        cfg.max_in_flight = max_in_flight;
        std::vector<client::SentenceInput> inputs;
        for (std::size_t i = 0; i < sentences.size(); ++i) inputs.push_back({std::to_string(i), sentences[i]});
        client::BatchResult batch;
        {
          py::gil_scoped_release release;
          batch = client::predict_corpus(inputs, cfg);
        }
        py::list out;
        for (const auto& r : batch.records) {
          py::dict d;
          d["raw"] = r.raw ? py::object(py::str(*r.raw)) : py::object(py::none());
          d["error"] = r.error ? py::object(py::str(std::string(client::to_string(r.error->kind)))) : py::object(py::none());
          d["latency_s"] = r.latency_s;
          out.append(d);
        }
        return out;
      },
      py::arg("endpoint"), py::arg("sentences"), py::arg("timeout_s") = 120.0, py::arg("max_in_flight") = 4);

  m.def(
      "main",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool; returns (exit code, stdout, stderr).");
}
