#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "corchete/label_map.hpp"
#include "corchete/tokenizer.hpp"

namespace corchete::ingest {

enum class IngestErrorKind { MalformedXml, UnmappedTag, EmptySentence, NoSingleRoot, MalformedTree, Io };

std::string_view to_string(IngestErrorKind kind);

class IngestError : public std::runtime_error {
 public:
  IngestError(IngestErrorKind kind, const std::string& detail, long line = 0, long column = 0);

  IngestErrorKind kind() const noexcept { return kind_; }
  long line() const noexcept { return line_; }
  long column() const noexcept { return column_; }

 private:
  IngestErrorKind kind_;
  long line_;
  long column_;
};

/// One sentence of the corpus.
struct CorpusRecord {
  std::string id;
  std::string sentence;  // tokens joined by single spaces
  std::string gold;      // canonical bracket notation
  std::size_t token_count = 0;  // tokenizer count of the full training example
  std::size_t word_count = 0;

  friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

struct ConvertOptions {
  /// Element delimiting one sentence; the document root is used when absent.
  std::string sentence_tag = "sentence";
  /// Attribute holding a word form, AnCora style.
  std::string token_attribute = "wd";
  /// Prefix for record ids of sentences without an `id` attribute.
  std::string document_id = "doc";
};

/// Replaces `[` and `]` with `-LSB-` / `-RSB-` and inner whitespace with `_`.
std::string sanitize_token(std::string_view raw);

/// The two-line training example, `<s>sentence</s>\n<s>gold</s>`.
std::string training_example(const CorpusRecord& record);

/// Builds a record from a gold tree, counting tokens with `tok`.
CorpusRecord make_record(std::string id, std::string_view gold, const TokenizerHandle& tok);

std::vector<CorpusRecord> convert_document(std::string_view xml, const LabelMap& map, const TokenizerHandle& tok,
                                           const ConvertOptions& options = {});

/// Converts every `*.xml` file under `dir`, in file-name order.
std::vector<CorpusRecord> convert_directory(const std::filesystem::path& dir, const LabelMap& map,
                                            const TokenizerHandle& tok, ConvertOptions options = {});

struct FilterResult {
  std::vector<CorpusRecord> kept;
  std::vector<CorpusRecord> rejected;
};

inline constexpr std::size_t kNoTokenLimit = std::numeric_limits<std::size_t>::max();

/// Recounts every record with `tok`; keeps those within `limit`, order preserved.
FilterResult filter_by_token_limit(const std::vector<CorpusRecord>& records, std::size_t limit,
                                   const TokenizerHandle& tok);

struct SplitResult {
  std::vector<CorpusRecord> train;
  std::vector<CorpusRecord> test;
};

/// Seeded uniform split with |train| = round(train_fraction * N). Each side
/// keeps the input's relative order.
SplitResult split(const std::vector<CorpusRecord>& records, double train_fraction, std::uint64_t seed);

void write_training(const std::vector<CorpusRecord>& records, std::ostream& out);
void emit_training_file(const std::vector<CorpusRecord>& records, const std::filesystem::path& path);

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t max_token_count = 0;
  std::size_t histogram_bucket = 64;
  std::map<std::size_t, std::size_t> token_histogram;  // bucket start -> sentences
  std::map<std::string, std::size_t> labels;           // label -> occurrences

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

CorpusStats corpus_stats(const std::vector<CorpusRecord>& records, std::size_t histogram_bucket = 64);
std::string stats_to_json(const CorpusStats& stats);

/// Writes gold trees one per line, plus ids in a `<path>.ids` sidecar.
void write_brackets(const std::vector<CorpusRecord>& records, const std::filesystem::path& path);

/// Reads a bracket corpus or a training file (only the analysis lines are
/// taken). Ids come from the `.ids` sidecar when it matches.
std::vector<CorpusRecord> read_corpus(const std::filesystem::path& path, const TokenizerHandle& tok);

/// Reads sentences to parse: plain lines, `<s>`-wrapped lines, or the yields
/// of bracketed trees when the file holds trees.
std::vector<std::string> read_sentences(const std::filesystem::path& path);

}  // namespace corchete::ingest
