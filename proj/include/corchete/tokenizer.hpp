#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corchete::ingest {

class TokenizerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named token-counting function.
///
/// Recognized identifiers:
///   `whitespace`   runs of non-space characters
///   `chars`        UTF-8 code points
///   `bytes`        raw bytes
///   `bpe:PATH`     byte-level BPE; PATH is a `tokenizer.json` file or a
///                  directory holding `vocab.json` and `merges.txt`
///                  (plus an optional `added_tokens.json`)
///
/// Counting is deterministic and safe to call from several threads.
class TokenizerHandle {
 public:
  class Impl;

  static TokenizerHandle resolve(std::string_view id);

  const std::string& id() const noexcept;
  std::size_t count(std::string_view text) const;
  /// Surface pieces; byte-level BPE pieces are in their byte-mapped alphabet.
  std::vector<std::string> tokenize(std::string_view text) const;

 private:
  explicit TokenizerHandle(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Splits text the way the GPT-2 byte-level pre-tokenizer does, classifying
/// letters and digits by code point range rather than full Unicode tables.
std::vector<std::string> gpt2_pretokenize(std::string_view text);

}  // namespace corchete::ingest
