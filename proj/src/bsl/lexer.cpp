#include "eo/bsl/lexer.hpp"

#include <array>
#include <cctype>

namespace eo::bsl
{

std::string to_string(const SourceLocation & loc)
{
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

std::string_view to_string(TokenKind kind)
{
  switch (kind) {
    case TokenKind::Colon: return "':'";
    case TokenKind::Ident: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Dollar: return "'$'";
    case TokenKind::Variable: return "variable";
    case TokenKind::Dot: return "'.'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Comma: return "','";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Eq: return "'=='";
    case TokenKind::StrictEq: return "'==='";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Ge: return "'>='";
    case TokenKind::And: return "'&&'";
    case TokenKind::Or: return "'||'";
    case TokenKind::Newline: return "end of line";
  }
  return "?";
}

namespace
{

bool ident_start(char c)
{
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

bool ident_char(char c)
{
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

bool blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class Lexer
{
public:
  Lexer(std::string_view src, std::vector<Token> & out, SourceLocation origin)
  : src_(src), out_(out), line_(origin.line), line_start_(0), column_base_(origin.column - 1)
  {
  }

  void document()
  {
    while (pos_ < src_.size()) {
      std::size_t eol = src_.find('\n', pos_);
      if (eol == std::string_view::npos) eol = src_.size();
      line(eol);
      pos_ = eol + 1;
      line_start_ = pos_;
      column_base_ = 0;
      ++line_;
    }
  }

  void value_only()
  {
    value(src_.size(), /*newline_is_space=*/true);
  }

private:
  SourceLocation here(std::size_t at) const
  {
    return {line_, static_cast<int>(at - line_start_) + 1 + column_base_};
  }

  void push(TokenKind kind, std::size_t begin, std::size_t end, std::string text, int count = 1)
  {
    out_.push_back(Token{kind, std::move(text), count, here(begin), begin, end});
  }

  void skip_blank(std::size_t eol)
  {
    while (pos_ < eol && blank(src_[pos_])) ++pos_;
  }

  std::size_t scan_ident(std::size_t at, std::size_t eol) const
  {
    while (at < eol && ident_char(src_[at])) ++at;
    return at;
  }

  // Header line: `<Word>: (Instance|Individual|Model): ...`
  bool try_header(std::size_t eol)
  {
    std::size_t p = pos_;
    if (p >= eol || !ident_start(src_[p])) return false;
    std::size_t w1_end = scan_ident(p, eol);
    std::size_t q = w1_end;
    while (q < eol && blank(src_[q])) ++q;
    if (q >= eol || src_[q] != ':') return false;
    std::size_t c1 = q++;
    if (q < eol && src_[q] == ':') return false;
    while (q < eol && blank(src_[q])) ++q;
    if (q >= eol || !ident_start(src_[q])) return false;
    std::size_t w2 = q;
    std::size_t w2_end = scan_ident(q, eol);
    std::string_view kw = src_.substr(w2, w2_end - w2);
    if (kw != "Instance" && kw != "Individual" && kw != "Model") return false;
    q = w2_end;
    while (q < eol && blank(src_[q])) ++q;
    if (q >= eol || src_[q] != ':') return false;
    push(TokenKind::Ident, p, w1_end, std::string(src_.substr(p, w1_end - p)));
    push(TokenKind::Colon, c1, c1 + 1, ":");
    push(TokenKind::Ident, w2, w2_end, std::string(kw));
    push(TokenKind::Colon, q, q + 1, ":");
    pos_ = q + 1;
    return true;
  }

  // Body line: `<colons> <Keyword>: ...`
  void body(std::size_t eol)
  {
    std::size_t start = pos_;
    while (pos_ < eol && src_[pos_] == ':') ++pos_;
    push(TokenKind::Colon, start, pos_, std::string(src_.substr(start, pos_ - start)),
         static_cast<int>(pos_ - start));
    skip_blank(eol);
    if (pos_ >= eol || src_[pos_] == '#') return;
    if (!ident_start(src_[pos_])) {
      throw LexError("expected keyword after ':'", here(pos_));
    }
    std::size_t kw_end = scan_ident(pos_, eol);
    push(TokenKind::Ident, pos_, kw_end, std::string(src_.substr(pos_, kw_end - pos_)));
    pos_ = kw_end;
    skip_blank(eol);
    if (pos_ < eol && src_[pos_] == ':') {
      push(TokenKind::Colon, pos_, pos_ + 1, ":");
      ++pos_;
    }
  }

  void line(std::size_t eol)
  {
    skip_blank(eol);
    if (pos_ >= eol || src_[pos_] == '#') return;
    if (src_[pos_] == ':') {
      body(eol);
    } else {
      try_header(eol);
    }
    value(eol, false);
    push(TokenKind::Newline, eol, eol, "");
  }

  void value(std::size_t eol, bool newline_is_space)
  {
    while (pos_ < eol) {
      char c = src_[pos_];
      if (blank(c)) {
        ++pos_;
        continue;
      }
      if (c == '\n') {
        if (!newline_is_space) return;
        ++pos_;
        ++line_;
        line_start_ = pos_;
        column_base_ = 0;
        continue;
      }
      if (c == '#') {
        while (pos_ < eol && src_[pos_] != '\n') ++pos_;
        continue;
      }
      std::size_t start = pos_;
      auto next = [&](std::size_t k) { return pos_ + k < eol ? src_[pos_ + k] : '\0'; };
      auto single = [&](TokenKind kind, std::size_t len) {
        pos_ += len;
        push(kind, start, pos_, std::string(src_.substr(start, len)));
      };
      if (c == '$') {
        char n = next(1);
        if (ident_start(n)) {
          std::size_t e = scan_ident(pos_ + 1, eol);
          push(TokenKind::Variable, start, e, std::string(src_.substr(pos_ + 1, e - pos_ - 1)));
          pos_ = e;
        } else {
          single(TokenKind::Dollar, 1);
        }
      } else if (c == '.') {
        single(TokenKind::Dot, 1);
      } else if (c == '(') {
        single(TokenKind::LParen, 1);
      } else if (c == ')') {
        single(TokenKind::RParen, 1);
      } else if (c == '{') {
        single(TokenKind::LBrace, 1);
      } else if (c == '}') {
        single(TokenKind::RBrace, 1);
      } else if (c == ',') {
        single(TokenKind::Comma, 1);
      } else if (c == ':') {
        while (pos_ < eol && src_[pos_] == ':') ++pos_;
        push(TokenKind::Colon, start, pos_, std::string(src_.substr(start, pos_ - start)),
             static_cast<int>(pos_ - start));
      } else if (c == '+') {
        single(TokenKind::Plus, 1);
      } else if (c == '=') {
        if (next(1) == '=' && next(2) == '=') {
          single(TokenKind::StrictEq, 3);
        } else if (next(1) == '=') {
          single(TokenKind::Eq, 2);
        } else {
          throw LexError("unexpected '=' (use '==' or '===')", here(pos_));
        }
      } else if (c == '<') {
        single(TokenKind::Lt, 1);
      } else if (c == '>') {
        if (next(1) == '=') {
          single(TokenKind::Ge, 2);
        } else {
          single(TokenKind::Gt, 1);
        }
      } else if (c == '&' && next(1) == '&') {
        single(TokenKind::And, 2);
      } else if (c == '|' && next(1) == '|') {
        single(TokenKind::Or, 2);
      } else if (c == '"' || c == '\'') {
        string_literal(eol);
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && std::isdigit(static_cast<unsigned char>(next(1))))) {
        number(eol);
      } else if (ident_start(c)) {
        identifier(eol);
      } else {
        throw LexError(std::string("illegal character '") + c + "'", here(pos_));
      }
    }
  }

  void string_literal(std::size_t eol)
  {
    std::size_t start = pos_;
    char quote = src_[pos_++];
    std::string text;
    while (true) {
      if (pos_ >= eol || src_[pos_] == '\n') throw LexError("unterminated string", here(start));
      char c = src_[pos_++];
      if (c == quote) break;
      if (c == '\\' && pos_ < eol && src_[pos_] != '\n') c = src_[pos_++];
      text.push_back(c);
    }
    push(TokenKind::String, start, pos_, std::move(text));
  }

  void number(std::size_t eol)
  {
    std::size_t start = pos_;
    if (src_[pos_] == '-') ++pos_;
    while (pos_ < eol && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ + 1 < eol && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      while (pos_ < eol && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < eol && ident_char(src_[pos_])) {
      // Names such as "3rd Camp" are identifiers, not numbers.
      pos_ = start;
      identifier(eol);
      return;
    }
    push(TokenKind::Number, start, pos_, std::string(src_.substr(start, pos_ - start)));
  }

  // Words separated by blanks merge into one identifier ("John Doe").
  void identifier(std::size_t eol)
  {
    std::size_t start = pos_;
    pos_ = scan_ident(pos_, eol);
    while (true) {
      std::size_t q = pos_;
      while (q < eol && blank(src_[q])) ++q;
      if (q == pos_ || q >= eol || !ident_char(src_[q])) break;
      pos_ = scan_ident(q, eol);
    }
    push(TokenKind::Ident, start, pos_, std::string(src_.substr(start, pos_ - start)));
  }

  std::string_view src_;
  std::vector<Token> & out_;
  std::size_t pos_ = 0;
  int line_;
  std::size_t line_start_;
  int column_base_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source)
{
  std::vector<Token> out;
  Lexer(source, out, {1, 1}).document();
  return out;
}

std::vector<Token> tokenize_value(std::string_view source, SourceLocation origin)
{
  std::vector<Token> out;
  Lexer(source, out, origin).value_only();
  return out;
}

}  // namespace eo::bsl
