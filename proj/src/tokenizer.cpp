#include "corchete/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace corchete::ingest {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t offset;
  std::size_t length;
};

std::vector<CodePoint> decode_utf8(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = b;
    if (b >= 0xF0 && b < 0xF8) {
      len = 4;
      cp = b & 0x07;
    } else if (b >= 0xE0) {
      len = b < 0xF0 ? 3 : 1;
      cp = b & 0x0F;
    } else if (b >= 0xC0) {
      len = 2;
      cp = b & 0x1F;
    }
    if (len > 1) {
      bool ok = i + len <= s.size();
      for (std::size_t k = 1; ok && k < len; ++k) {
        const auto cb = static_cast<unsigned char>(s[i + k]);
        ok = (cb & 0xC0) == 0x80;
        cp = (cp << 6) | (cb & 0x3F);
      }
      if (!ok) {
        len = 1;
        cp = 0xFFFD;
      }
    } else if (b >= 0x80) {
      cp = 0xFFFD;
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_unicode_space(char32_t c) {
  return c == ' ' || (c >= 0x09 && c <= 0x0D) || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F ||
         c == 0x3000;
}

bool is_unicode_number(char32_t c) {
  return (c >= '0' && c <= '9') || c == 0xB2 || c == 0xB3 || c == 0xB9 || (c >= 0xBC && c <= 0xBE) ||
         (c >= 0x0660 && c <= 0x0669) || (c >= 0x2070 && c <= 0x2079) || (c >= 0x2080 && c <= 0x2089) ||
         (c >= 0xFF10 && c <= 0xFF19);
}

// Approximation of \p{L}: Latin, Greek, Cyrillic and the remaining scripts,
// minus the punctuation and symbol blocks.
bool is_unicode_letter(char32_t c) {
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (c < 0x100) return c == 0xAA || c == 0xB5 || c == 0xBA || (c >= 0xC0 && c != 0xD7 && c != 0xF7);
  if (c == 0xFFFD || is_unicode_space(c) || is_unicode_number(c)) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE30 && c <= 0xFE4F) return false;
  if (c >= 0xFF00 && c <= 0xFF20) return false;
  if (c >= 0x0300 && c <= 0x036F) return false;
  return true;
}

enum class CharClass { Letter, Number, Space, Other };

CharClass classify(char32_t c) {
  if (is_unicode_space(c)) return CharClass::Space;
  if (is_unicode_letter(c)) return CharClass::Letter;
  if (is_unicode_number(c)) return CharClass::Number;
  return CharClass::Other;
}

std::size_t count_code_points(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// GPT-2 maps every byte to a printable code point before applying merges.
const std::array<std::string, 256>& byte_alphabet() {
  static const std::array<std::string, 256> table = [] {
    std::array<std::string, 256> t;
    int extra = 0;
    for (int b = 0; b < 256; ++b) {
      const bool printable = (b >= 33 && b <= 126) || (b >= 161 && b <= 172) || (b >= 174 && b <= 255);
      append_utf8(t[b], printable ? static_cast<char32_t>(b) : static_cast<char32_t>(256 + extra++));
    }
    return t;
  }();
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TokenizerError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<std::string> gpt2_pretokenize(std::string_view text) {
  const auto cps = decode_utf8(text);
  const std::size_t n = cps.size();
  std::vector<std::string> out;

  auto cls = [&](std::size_t k) { return classify(cps[k].value); };
  auto emit = [&](std::size_t from, std::size_t to) {
    const std::size_t begin = cps[from].offset;
    const std::size_t end = to < n ? cps[to].offset : text.size();
    out.emplace_back(text.substr(begin, end - begin));
  };
  auto run_of = [&](std::size_t k, CharClass c) {
    while (k < n && cls(k) == c) ++k;
    return k;
  };
  auto run_of_other = [&](std::size_t k) {
    while (k < n && cls(k) == CharClass::Other) ++k;
    return k;
  };

  std::size_t p = 0;
  while (p < n) {
    // 's 't 're 've 'm 'll 'd
    if (cps[p].value == '\'' && p + 1 < n) {
      const char32_t a = cps[p + 1].value;
      const char32_t b = p + 2 < n ? cps[p + 2].value : 0;
      std::size_t len = 0;
      if (a == 's' || a == 't' || a == 'm' || a == 'd') len = 2;
      if ((a == 'r' && b == 'e') || (a == 'v' && b == 'e') || (a == 'l' && b == 'l')) len = 3;
      if (len) {
        emit(p, p + len);
        p += len;
        continue;
      }
    }
    const bool lead_space = cps[p].value == ' ' && p + 1 < n;
    const std::size_t q = lead_space ? p + 1 : p;
    const CharClass c = cls(q);
    if (c == CharClass::Letter || c == CharClass::Number) {
      const std::size_t end = run_of(q, c);
      emit(p, end);
      p = end;
      continue;
    }
    if (c == CharClass::Other) {
      const std::size_t end = run_of_other(q);
      emit(p, end);
      p = end;
      continue;
    }
    if (cls(p) == CharClass::Space) {
      // \s+(?!\S) leaves the last space for the following word, then \s+.
      const std::size_t end = run_of(p, CharClass::Space);
      if (end < n && end - p > 1) {
        emit(p, end - 1);
        p = end - 1;
      } else {
        emit(p, end);
        p = end;
      }
      continue;
    }
    emit(p, p + 1);
    ++p;
  }
  return out;
}

class TokenizerHandle::Impl {
 public:
  explicit Impl(std::string id) : id_(std::move(id)) {}
  virtual ~Impl() = default;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
  virtual std::size_t count(std::string_view text) const { return tokenize(text).size(); }
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

namespace {

class WhitespaceTokenizer final : public TokenizerHandle::Impl {
 public:
  WhitespaceTokenizer() : Impl("whitespace") {}
  std::vector<std::string> tokenize(std::string_view text) const override { return split_whitespace(text); }
};

class CharTokenizer final : public TokenizerHandle::Impl {
 public:
  CharTokenizer() : Impl("chars") {}
  std::vector<std::string> tokenize(std::string_view text) const override {
    std::vector<std::string> out;
    for (const auto& cp : decode_utf8(text)) out.emplace_back(text.substr(cp.offset, cp.length));
    return out;
  }
  std::size_t count(std::string_view text) const override { return count_code_points(text); }
};

class ByteTokenizer final : public TokenizerHandle::Impl {
 public:
  ByteTokenizer() : Impl("bytes") {}
  std::vector<std::string> tokenize(std::string_view text) const override {
    std::vector<std::string> out;
    for (char c : text) out.emplace_back(1, c);
    return out;
  }
  std::size_t count(std::string_view text) const override { return text.size(); }
};

class BpeTokenizer final : public TokenizerHandle::Impl {
 public:
  BpeTokenizer(std::string id, std::unordered_map<std::string, int> ranks, std::vector<std::string> specials)
      : Impl(std::move(id)), ranks_(std::move(ranks)), specials_(std::move(specials)) {
    // Longest special token wins when two share a prefix.
    std::sort(specials_.begin(), specials_.end(),
              [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  }

  std::vector<std::string> tokenize(std::string_view text) const override {
    std::vector<std::string> out;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
      const std::string* hit = nullptr;
      for (const auto& sp : specials_) {
        if (text.substr(i, sp.size()) == sp) {
          hit = &sp;
          break;
        }
      }
      if (!hit) {
        ++i;
        continue;
      }
      encode_segment(text.substr(start, i - start), out);
      out.push_back(*hit);
      i += hit->size();
      start = i;
    }
    encode_segment(text.substr(start), out);
    return out;
  }

 private:
  void encode_segment(std::string_view segment, std::vector<std::string>& out) const {
    for (const auto& word : gpt2_pretokenize(segment)) {
      const auto pieces = encode_word(word);
      out.insert(out.end(), pieces.begin(), pieces.end());
    }
  }

  std::vector<std::string> encode_word(const std::string& word) const {
    {
      std::lock_guard lock(cache_mutex_);
      if (auto it = cache_.find(word); it != cache_.end()) return it->second;
    }
    const auto& alphabet = byte_alphabet();
    std::vector<std::string> symbols;
    symbols.reserve(word.size());
    for (unsigned char b : word) symbols.push_back(alphabet[b]);

    while (symbols.size() > 1) {
      int best_rank = std::numeric_limits<int>::max();
      std::size_t best = 0;
      for (std::size_t k = 0; k + 1 < symbols.size(); ++k) {
        const auto it = ranks_.find(symbols[k] + ' ' + symbols[k + 1]);
        if (it != ranks_.end() && it->second < best_rank) {
          best_rank = it->second;
          best = k;
        }
      }
      if (best_rank == std::numeric_limits<int>::max()) break;
      const std::string left = symbols[best];
      const std::string right = symbols[best + 1];
      std::vector<std::string> merged;
      merged.reserve(symbols.size());
      for (std::size_t k = 0; k < symbols.size(); ++k) {
        if (k + 1 < symbols.size() && symbols[k] == left && symbols[k + 1] == right) {
          merged.push_back(left + right);
          ++k;
        } else {
          merged.push_back(symbols[k]);
        }
      }
      symbols = std::move(merged);
    }
    std::lock_guard lock(cache_mutex_);
    cache_.emplace(word, symbols);
    return symbols;
  }

  std::unordered_map<std::string, int> ranks_;
  std::vector<std::string> specials_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::string, std::vector<std::string>> cache_;
};

std::shared_ptr<const TokenizerHandle::Impl> load_bpe(const std::string& id, const std::filesystem::path& path) {
  std::unordered_map<std::string, int> ranks;
  std::vector<std::string> specials;
  int rank = 0;

  if (std::filesystem::is_directory(path)) {
    std::istringstream merges(read_file(path / "merges.txt"));
    std::string line;
    while (std::getline(merges, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.starts_with("#version")) continue;
      if (line.find(' ') == std::string::npos) throw TokenizerError("malformed merge '" + line + "'");
      ranks.emplace(line, rank++);
    }
    if (const auto added = path / "added_tokens.json"; std::filesystem::exists(added)) {
      const auto j = nlohmann::json::parse(read_file(added));
      for (const auto& [token, _] : j.items()) specials.push_back(token);
    }
  } else {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw TokenizerError("malformed tokenizer file " + path.string() + ": " + e.what());
    }
    const auto& model = j.at("model");
    if (model.value("type", "BPE") != "BPE") throw TokenizerError("only BPE tokenizer.json models are supported");
    for (const auto& m : model.at("merges")) {
      if (m.is_string())
        ranks.emplace(m.get<std::string>(), rank++);
      else
        ranks.emplace(m.at(0).get<std::string>() + ' ' + m.at(1).get<std::string>(), rank++);
    }
    if (j.contains("added_tokens"))
      for (const auto& t : j["added_tokens"]) specials.push_back(t.at("content").get<std::string>());
  }
  return std::make_shared<BpeTokenizer>(id, std::move(ranks), std::move(specials));
}

}  // namespace

TokenizerHandle TokenizerHandle::resolve(std::string_view id) {
  if (id == "whitespace") return TokenizerHandle(std::make_shared<WhitespaceTokenizer>());
  if (id == "chars") return TokenizerHandle(std::make_shared<CharTokenizer>());
  if (id == "bytes") return TokenizerHandle(std::make_shared<ByteTokenizer>());
  if (id.starts_with("bpe:")) {
    const std::filesystem::path path(std::string(id.substr(4)));
    if (!std::filesystem::exists(path)) throw TokenizerError("tokenizer path not found: " + path.string());
    return TokenizerHandle(load_bpe(std::string(id), path));
  }
  throw TokenizerError("unknown tokenizer '" + std::string(id) + "'");
}

const std::string& TokenizerHandle::id() const noexcept { return impl_->id(); }

std::size_t TokenizerHandle::count(std::string_view text) const { return impl_->count(text); }

std::vector<std::string> TokenizerHandle::tokenize(std::string_view text) const { return impl_->tokenize(text); }

}  // namespace corchete::ingest
