#include "corchete/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <expat.h>
#include <json.hpp>

#include "corchete/tree.hpp"

namespace corchete::ingest {

namespace {

struct XmlElement {
  std::string name;  // empty for a text chunk
  std::string text;
  Attributes attributes;
  std::vector<XmlElement> children;
  long line = 0;
  long column = 0;
};

class DomBuilder {
 public:
  XmlElement parse(std::string_view xml) {
    XML_Parser parser = XML_ParserCreate("UTF-8");
    XML_SetUserData(parser, this);
    XML_SetElementHandler(parser, &DomBuilder::on_start, &DomBuilder::on_end);
    XML_SetCharacterDataHandler(parser, &DomBuilder::on_text);
    parser_ = parser;
    const auto status = XML_Parse(parser, xml.data(), static_cast<int>(xml.size()), 1);
    if (status != XML_STATUS_OK) {
      const std::string msg = XML_ErrorString(XML_GetErrorCode(parser));
      const long line = static_cast<long>(XML_GetCurrentLineNumber(parser));
      const long col = static_cast<long>(XML_GetCurrentColumnNumber(parser));
      XML_ParserFree(parser);
      throw IngestError(IngestErrorKind::MalformedXml, msg, line, col);
    }
    XML_ParserFree(parser);
    if (roots_.empty()) throw IngestError(IngestErrorKind::MalformedXml, "document has no root element");
    return std::move(roots_.front());
  }

 private:
  static void on_start(void* self_ptr, const XML_Char* name, const XML_Char** attrs) {
    auto& self = *static_cast<DomBuilder*>(self_ptr);
    XmlElement e;
    e.name = name;
    e.line = static_cast<long>(XML_GetCurrentLineNumber(self.parser_));
    e.column = static_cast<long>(XML_GetCurrentColumnNumber(self.parser_));
    for (int i = 0; attrs[i]; i += 2) e.attributes.emplace(attrs[i], attrs[i + 1]);
    self.stack_.push_back(std::move(e));
  }

  static void on_end(void* self_ptr, const XML_Char*) {
    auto& self = *static_cast<DomBuilder*>(self_ptr);
    XmlElement e = std::move(self.stack_.back());
    self.stack_.pop_back();
    if (self.stack_.empty())
      self.roots_.push_back(std::move(e));
    else
      self.stack_.back().children.push_back(std::move(e));
  }

  static void on_text(void* self_ptr, const XML_Char* s, int len) {
    auto& self = *static_cast<DomBuilder*>(self_ptr);
    if (self.stack_.empty()) return;
    auto& children = self.stack_.back().children;
    if (children.empty() || !children.back().name.empty()) children.emplace_back();
    children.back().text.append(s, static_cast<std::size_t>(len));
  }

  XML_Parser parser_ = nullptr;
  std::vector<XmlElement> stack_;
  std::vector<XmlElement> roots_;
};

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

class Converter {
 public:
  Converter(const LabelMap& map, const ConvertOptions& options) : map_(map), options_(options) {}

  std::vector<SyntaxTree> convert(const XmlElement& e) const {
    const auto decision = map_.map(e.name, e.attributes);
    if (!decision)
      throw IngestError(IngestErrorKind::UnmappedTag, "no label-map rule for <" + e.name + ">", e.line, e.column);

    std::vector<SyntaxTree> items;
    if (const auto it = e.attributes.find(options_.token_attribute); it != e.attributes.end()) {
      if (const auto token = sanitize_token(it->second); !token.empty()) items.push_back(SyntaxTree::leaf(token));
    }
    for (const auto& child : e.children) {
      if (child.name.empty()) {
        for (const auto& word : split_ws(child.text)) items.push_back(SyntaxTree::leaf(sanitize_token(word)));
      } else {
        auto converted = convert(child);
        std::move(converted.begin(), converted.end(), std::back_inserter(items));
      }
    }
    if (items.empty() || decision->splice) return items;
    std::vector<SyntaxTree> out;
    out.push_back(SyntaxTree::node(decision->label, std::move(items)));
    return out;
  }

 private:
  const LabelMap& map_;
  const ConvertOptions& options_;
};

void collect_sentences(const XmlElement& e, const std::string& tag, std::vector<const XmlElement*>& out) {
  if (e.name == tag) {
    out.push_back(&e);
    return;
  }
  for (const auto& c : e.children)
    if (!c.name.empty()) collect_sentences(c, tag, out);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(IngestErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(IngestErrorKind::Io, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string strip_markers(std::string_view line) {
  std::string s = normalize_whitespace(line);
  if (s.starts_with("<s>")) s.erase(0, 3);
  if (s.ends_with("</s>")) s.erase(s.size() - 4);
  return normalize_whitespace(s);
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

void collect_labels(const SyntaxTree& t, std::map<std::string, std::size_t>& labels) {
  if (t.is_leaf()) return;
  ++labels[t.label()];
  for (const auto& c : t.children()) collect_labels(c, labels);
}

}  // namespace

std::string_view to_string(IngestErrorKind kind) {
  switch (kind) {
    case IngestErrorKind::MalformedXml: return "MalformedXml";
    case IngestErrorKind::UnmappedTag: return "UnmappedTag";
    case IngestErrorKind::EmptySentence: return "EmptySentence";
    case IngestErrorKind::NoSingleRoot: return "NoSingleRoot";
    case IngestErrorKind::MalformedTree: return "MalformedTree";
    case IngestErrorKind::Io: return "Io";
  }
  return "Unknown";
}

IngestError::IngestError(IngestErrorKind kind, const std::string& detail, long line, long column)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail +
                         (line > 0 ? " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                                   : "")),
      kind_(kind),
      line_(line),
      column_(column) {}

std::string sanitize_token(std::string_view raw) {
  std::string out;
  bool pending_underscore = false;
  for (char c : normalize_whitespace(raw)) {
    if (c == ' ') {
      pending_underscore = true;
      continue;
    }
    if (pending_underscore) out += '_';
    pending_underscore = false;
    if (c == '[')
      out += "-LSB-";
    else if (c == ']')
      out += "-RSB-";
    else
      out += c;
  }
  return out;
}

std::string training_example(const CorpusRecord& record) {
  return "<s>" + record.sentence + "</s>\n<s>" + record.gold + "</s>";
}

CorpusRecord make_record(std::string id, std::string_view gold, const TokenizerHandle& tok) {
  const SyntaxTree tree = parse_bracketed(gold);
  const auto words = yield_tokens(tree);
  CorpusRecord r;
  r.id = std::move(id);
  r.sentence = join(words);
  r.gold = serialize(tree);
  r.word_count = words.size();
  r.token_count = tok.count(training_example(r));
  return r;
}

std::vector<CorpusRecord> convert_document(std::string_view xml, const LabelMap& map, const TokenizerHandle& tok,
                                           const ConvertOptions& options) {
  const XmlElement root = DomBuilder{}.parse(xml);
  std::vector<const XmlElement*> sentences;
  collect_sentences(root, options.sentence_tag, sentences);
  if (sentences.empty()) sentences.push_back(&root);

  const Converter converter(map, options);
  std::vector<CorpusRecord> records;
  records.reserve(sentences.size());
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const XmlElement& s = *sentences[k];
    const auto id_attr = s.attributes.find("id");
    std::string id = id_attr != s.attributes.end() ? id_attr->second
                                                   : options.document_id + "#" + std::to_string(k + 1);
    auto items = converter.convert(s);
    if (items.empty()) throw IngestError(IngestErrorKind::EmptySentence, "sentence '" + id + "' has no tokens", s.line, s.column);
    if (items.size() != 1 || items.front().is_leaf())
      throw IngestError(IngestErrorKind::NoSingleRoot,
                        "sentence '" + id + "' converts to " + std::to_string(items.size()) + " top-level items",
                        s.line, s.column);
    records.push_back(make_record(std::move(id), serialize(items.front()), tok));
  }
  return records;
}

std::vector<CorpusRecord> convert_directory(const std::filesystem::path& dir, const LabelMap& map,
                                            const TokenizerHandle& tok, ConvertOptions options) {
  if (!std::filesystem::is_directory(dir)) throw IngestError(IngestErrorKind::Io, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<CorpusRecord> records;
  for (const auto& file : files) {
    options.document_id = std::filesystem::relative(file, dir).generic_string();
    try {
      auto doc = convert_document(read_text_file(file), map, tok, options);
      std::move(doc.begin(), doc.end(), std::back_inserter(records));
    } catch (const IngestError& e) {
      throw IngestError(e.kind(), file.string() + ": " + e.what());
    }
  }
  return records;
}

FilterResult filter_by_token_limit(const std::vector<CorpusRecord>& records, std::size_t limit,
                                   const TokenizerHandle& tok) {
  FilterResult result;
  for (auto r : records) {
    r.token_count = tok.count(training_example(r));
    (r.token_count <= limit ? result.kept : result.rejected).push_back(std::move(r));
  }
  return result;
}

SplitResult split(const std::vector<CorpusRecord>& records, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
  const std::size_t n = records.size();
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));

  // Fisher-Yates over mt19937_64, with rejection sampling so the permutation
  // does not depend on the standard library's distribution implementation.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do draw = rng();
    while (draw >= limit);
    std::swap(order[i - 1], order[draw % bound]);
  }

  std::vector<bool> in_train(n, false);
  for (std::size_t k = 0; k < n_train; ++k) in_train[order[k]] = true;
  SplitResult result;
  result.train.reserve(n_train);
  result.test.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) (in_train[i] ? result.train : result.test).push_back(records[i]);
  return result;
}

void write_training(const std::vector<CorpusRecord>& records, std::ostream& out) {
  for (const auto& r : records) out << "<s>" << r.sentence << "</s>\n<s>" << r.gold << "</s>\n";
}

void emit_training_file(const std::vector<CorpusRecord>& records, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError(IngestErrorKind::Io, "cannot write " + path.string());
  write_training(records, out);
  if (!out) throw IngestError(IngestErrorKind::Io, "write failed for " + path.string());
}

CorpusStats corpus_stats(const std::vector<CorpusRecord>& records, std::size_t histogram_bucket) {
  CorpusStats s;
  s.histogram_bucket = histogram_bucket == 0 ? 1 : histogram_bucket;
  for (const auto& r : records) {
    ++s.sentences;
    s.words += r.word_count;
    s.max_token_count = std::max(s.max_token_count, r.token_count);
    ++s.token_histogram[(r.token_count / s.histogram_bucket) * s.histogram_bucket];
    collect_labels(parse_bracketed(r.gold), s.labels);
  }
  return s;
}

std::string stats_to_json(const CorpusStats& stats) {
  nlohmann::ordered_json j;
  j["sentences"] = stats.sentences;
  j["words"] = stats.words;
  j["max_token_count"] = stats.max_token_count;
  j["histogram_bucket"] = stats.histogram_bucket;
  auto& hist = j["token_histogram"] = nlohmann::ordered_json::object();
  for (const auto& [bucket, count] : stats.token_histogram) hist[std::to_string(bucket)] = count;
  auto& labels = j["labels"] = nlohmann::ordered_json::object();
  for (const auto& [label, count] : stats.labels) labels[label] = count;
  return j.dump(2);
}

void write_brackets(const std::vector<CorpusRecord>& records, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  std::ofstream ids(path.string() + ".ids", std::ios::binary | std::ios::trunc);
  if (!out || !ids) throw IngestError(IngestErrorKind::Io, "cannot write " + path.string());
  for (const auto& r : records) {
    out << r.gold << '\n';
    ids << r.id << '\n';
  }
  if (!out || !ids) throw IngestError(IngestErrorKind::Io, "write failed for " + path.string());
}

std::vector<CorpusRecord> read_corpus(const std::filesystem::path& path, const TokenizerHandle& tok) {
  const auto lines = read_lines(path);
  std::vector<std::pair<std::size_t, std::string>> trees;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string s = strip_markers(lines[i]);
    if (s.starts_with("[")) trees.emplace_back(i + 1, std::move(s));
  }

  std::vector<std::string> ids;
  if (const std::filesystem::path sidecar = path.string() + ".ids"; std::filesystem::exists(sidecar)) {
    for (auto& id : read_lines(sidecar))
      if (!id.empty()) ids.push_back(std::move(id));
    if (ids.size() != trees.size()) ids.clear();
  }

  std::vector<CorpusRecord> records;
  records.reserve(trees.size());
  const std::string stem = path.filename().string();
  for (std::size_t k = 0; k < trees.size(); ++k) {
    std::string id = ids.empty() ? stem + ":" + std::to_string(trees[k].first) : ids[k];
    try {
      records.push_back(make_record(std::move(id), trees[k].second, tok));
    } catch (const ParseError& e) {
      throw IngestError(IngestErrorKind::MalformedTree, path.string() + ":" + std::to_string(trees[k].first) + ": " + e.what());
    }
  }
  return records;
}

std::vector<std::string> read_sentences(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<std::string> stripped;
  bool trees = false;
  for (const auto& line : lines) {
    std::string s = strip_markers(line);
    if (s.empty()) continue;
    trees = trees || s.starts_with("[");
    stripped.push_back(std::move(s));
  }
  if (!trees) return stripped;
  std::vector<std::string> out;
  for (const auto& s : stripped)
    if (s.starts_with("[")) out.push_back(join(yield_tokens(parse_bracketed(s))));
  return out;
}

}  // namespace corchete::ingest
