// Copyright 2026 The ghzw-calculus Authors
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

#include "ghzw/dsl.hpp"

#include <cctype>
#include <cstdlib>

namespace ghzw {

cplx parse_complex(const std::string& token) {
  // Forms: R, Ii, R+Ii, R-Ii where R and I are decimal literals and a bare
  // "i" means 1i.  Throws ParseError on anything else.
  const char* s = token.c_str();
  auto fail = [&] { throw ParseError("bad complex literal '" + token + "'"); };

  auto read_real = [&](const char*& p) -> double {
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p) fail();
    p = end;
    return v;
  };

  const char* p = s;
  double first_sign = 1.0;
  if (*p == '+' || *p == '-') {
    // strtod consumes the sign itself; peek only for the bare "i" cases.
    if (*(p + 1) == 'i' && *(p + 2) == '\0') {
      return {0.0, *p == '-' ? -1.0 : 1.0};
    }
  }
  if (*p == 'i' && *(p + 1) == '\0') return {0.0, 1.0};

  double first = read_real(p);
  if (*p == '\0') return {first, 0.0};
  if (*p == 'i' && *(p + 1) == '\0') return {0.0, first};
  if (*p != '+' && *p != '-') fail();
  first_sign = (*p == '-') ? -1.0 : 1.0;
  if (*(p + 1) == 'i' && *(p + 2) == '\0') return {first, first_sign};
  double second = read_real(p);
  if (*p != 'i' || *(p + 1) != '\0') fail();
  return {first, second};
}

namespace {

struct Token {
  enum class Kind { lparen, rparen, word, end };
  Kind kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      advance();
    }
    const int line = line_, col = col_;
    if (pos_ >= s_.size()) return {Token::Kind::end, "", line, col};
    const char c = s_[pos_];
    if (c == '(') {
      advance();
      return {Token::Kind::lparen, "(", line, col};
    }
    if (c == ')') {
      advance();
      return {Token::Kind::rparen, ")", line, col};
    }
    std::string word;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')') {
      word.push_back(s_[pos_]);
      advance();
    }
    return {Token::Kind::word, word, line, col};
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, const std::set<std::string>& algebras)
      : lex_(text), algebras_(algebras) {
    cur_ = lex_.next();
  }

  Diagram parse() {
    Diagram d = expr();
    expect(Token::Kind::end, "end of input");
    return d;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    throw ParseError(std::to_string(cur_.line) + ":" + std::to_string(cur_.col) +
                     ": " + msg);
  }

  void bump() { cur_ = lex_.next(); }

  void expect(Token::Kind k, const std::string& what) {
    if (cur_.kind != k) error("expected " + what);
    if (k != Token::Kind::end) bump();
  }

  std::string word(const std::string& what) {
    if (cur_.kind != Token::Kind::word) error("expected " + what);
    std::string w = cur_.text;
    bump();
    return w;
  }

  std::string algebra_name() {
    const int line = cur_.line, col = cur_.col;
    std::string a = word("algebra name");
    if (!algebras_.count(a)) {
      throw ParseError(std::to_string(line) + ":" + std::to_string(col) +
                       ": unknown algebra '" + a + "'");
    }
    return a;
  }

  Diagram expr() {
    if (cur_.kind == Token::Kind::word) {
      const std::string w = cur_.text;
      if (w == "id") {
        bump();
        return identity_diagram(1);
      }
      if (w == "tick") {
        bump();
        return tick_diagram();
      }
      if (w == "swap") {
        bump();
        return swap_diagram();
      }
      error("unknown atom '" + w + "'");
    }
    expect(Token::Kind::lparen, "'('");
    const int hline = cur_.line, hcol = cur_.col;
    const std::string head = word("form head");
    if (head == "seq" || head == "par") {
      std::vector<Diagram> parts;
      parts.push_back(expr());
      parts.push_back(expr());
      while (cur_.kind != Token::Kind::rparen) parts.push_back(expr());
      bump();  // ')'
      Diagram acc = parts[0];
      for (size_t i = 1; i < parts.size(); ++i) {
        if (head == "seq") {
          try {
            acc = compose_seq(acc, parts[i]);
          } catch (const DiagramError& e) {
            throw ParseError(std::to_string(hline) + ":" + std::to_string(hcol) +
                             ": " + e.what());
          }
        } else {
          acc = compose_par(acc, parts[i]);
        }
      }
      return acc;
    }
    if (auto op = gen_op_from_name(head)) {
      std::string alg = algebra_name();
      expect(Token::Kind::rparen, "')'");
      return generator_diagram(alg, *op);
    }
    if (head == "state" || head == "effect") {
      const std::string name = word("variable name");
      std::optional<std::vector<cplx>> vec;
      if (cur_.kind == Token::Kind::word) {
        std::vector<cplx> v;
        while (cur_.kind == Token::Kind::word) {
          try {
            v.push_back(parse_complex(cur_.text));
          } catch (const ParseError&) {
            error("bad complex literal '" + cur_.text + "'");
          }
          bump();
        }
        vec = std::move(v);
      }
      expect(Token::Kind::rparen, "')'");
      int legs = 1;
      if (vec) {
        size_t len = vec->size();
        legs = 0;
        while ((1u << legs) < len) ++legs;
        if (len < 2 || (1u << legs) != len) {
          throw ParseError(std::to_string(hline) + ":" + std::to_string(hcol) +
                           ": amplitude list length must be a power of two >= 2");
        }
      }
      return head == "state" ? state_diagram(name, std::move(vec), legs)
                             : effect_diagram(name, std::move(vec), legs);
    }
    error("unknown form '" + head + "'");
  }

  Lexer lex_;
  Token cur_;
  std::set<std::string> algebras_;
};

}  // namespace

Diagram parse_dsl(const std::string& text, const std::set<std::string>& algebras) {
  return Parser(text, algebras).parse();
}

}  // namespace ghzw
