#pragma once

// Line and token helpers shared by the text-format parsers.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqqcsp/error.hpp"

namespace eqqcsp::detail {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

inline std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// Line-oriented reader shared by the formula and relation grammars.
class Reader {
 public:
  Reader(std::string_view text, std::vector<std::string>* warnings = nullptr,
         std::string_view comment_word = {})
      : text_(text), warnings_(warnings), comment_word_(comment_word) {}

  // Next non-blank, non-comment line ('#' or a leading comment_word), tokenized; false at end of input.
  bool next(std::vector<Token>& toks) {
    while (pos_ <= text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view line = text_.substr(pos_, end - pos_);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      line_text_ = line;
      pos_ = end + 1;
      ++line_no_;
      toks = tokenize(line);
      if (toks.empty() || toks[0].text.front() == '#') continue;
      if (!comment_word_.empty() && toks[0].text == comment_word_) continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what, int column) const {
    throw ParseError(what, line_no_, column);
  }

  int line() const { return line_no_; }
  std::string_view line_text() const { return line_text_; }

  void warn(const std::string& what) const {
    if (warnings_) {
      warnings_->push_back("line " + std::to_string(line_no_) + ": " + what);
    }
  }

  int var(const Token& t, int num_vars) const {
    auto v = to_int(t.text);
    if (!v) fail("expected variable index, got '" + std::string(t.text) + "'",
                 t.column);
    if (*v < 1 || *v > num_vars) {
      fail("variable " + std::to_string(*v) + " out of range 1.." +
               std::to_string(num_vars),
           t.column);
    }
    return *v;
  }

 private:
  std::string_view text_;
  std::vector<std::string>* warnings_;
  std::string_view comment_word_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
  std::string_view line_text_;
};

}  // namespace eqqcsp::detail
