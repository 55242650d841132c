#pragma once

// Tokenizer shared by the term parser and the transducer DSL.

#include <cstddef>
#include <string>
#include <string_view>

#include "mttkit/errors.hpp"

namespace mttkit::detail {

enum class Tok { ident, number, punct, arrow, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  Lexer(std::string_view src, bool allow_comments) : src_(src), comments_(allow_comments) {
    advance();
  }

  const Token& peek() const { return cur_; }

  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

  bool at_punct(char c) const { return cur_.kind == Tok::punct && cur_.text[0] == c; }
  bool at_ident(std::string_view word) const {
    return cur_.kind == Tok::ident && cur_.text == word;
  }

  Token expect_punct(char c) {
    if (!at_punct(c)) fail(std::string("expected '") + c + "'");
    return next();
  }
  Token expect_ident(std::string_view what = "identifier") {
    if (cur_.kind != Tok::ident) fail("expected " + std::string(what));
    return next();
  }
  Token expect_keyword(std::string_view word) {
    if (!at_ident(word)) fail("expected '" + std::string(word) + "'");
    return next();
  }
  std::size_t expect_number() {
    if (cur_.kind != Tok::number) fail("expected number");
    return std::stoul(next().text);
  }
  void expect_arrow() {
    if (cur_.kind != Tok::arrow) fail("expected '->'");
    next();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(cur_.line, cur_.column, what + describe());
  }

 private:
  std::string describe() const {
    if (cur_.kind == Tok::end) return " at end of input";
    return " near '" + cur_.text + "'";
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++col_;
        ++pos_;
      } else if (c == '#' && comments_) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

  void advance() {
    skip_space();
    cur_ = Token{};
    cur_.line = line_;
    cur_.column = col_;
    if (pos_ >= src_.size()) return;
    const std::size_t start = pos_;
    char c = src_[pos_];
    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      cur_.kind = Tok::ident;
    } else if (c >= '0' && c <= '9') {
      while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') ++pos_;
      cur_.kind = Tok::number;
    } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      pos_ += 2;
      cur_.kind = Tok::arrow;
    } else if (std::string_view("{}()[],:;/=").find(c) != std::string_view::npos) {
      ++pos_;
      cur_.kind = Tok::punct;
    } else {
      throw SyntaxError(line_, col_, std::string("unexpected character '") + c + "'");
    }
    cur_.text = std::string(src_.substr(start, pos_ - start));
    col_ += pos_ - start;
  }

  std::string_view src_;
  bool comments_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token cur_;
};

}  // namespace mttkit::detail
