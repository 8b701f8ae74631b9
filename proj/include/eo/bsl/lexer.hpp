#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eo::bsl
{

/// 1-based position in BSL source. Never participates in structural equality.
struct SourceLocation
{
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceLocation &, const SourceLocation &) { return true; }
};

std::string to_string(const SourceLocation & loc);

class BslError : public std::runtime_error
{
public:
  BslError(const std::string & what, SourceLocation loc)
  : std::runtime_error(to_string(loc) + ": " + what), detail_(what), location_(loc)
  {
  }
  SourceLocation location() const { return location_; }
  /// Message without the location prefix.
  const std::string & detail() const { return detail_; }

private:
  std::string detail_;
  SourceLocation location_;
};

class LexError : public BslError
{
public:
  using BslError::BslError;
};

class ParseError : public BslError
{
public:
  ParseError(const std::string & what, SourceLocation loc, std::vector<std::string> expected = {})
  : BslError(what, loc), expected_(std::move(expected))
  {
  }
  const std::vector<std::string> & expected() const { return expected_; }

private:
  std::vector<std::string> expected_;
};

class ExprParseError : public ParseError
{
public:
  using ParseError::ParseError;
};

class SetDoParseError : public ParseError
{
public:
  using ParseError::ParseError;
};

enum class TokenKind {
  Colon,     // run of ':' characters; `count` holds the run length
  Ident,     // identifier; in value position may contain spaces ("John Doe")
  Number,
  String,    // quoted with ' or "; text holds the unquoted content
  Dollar,    // '$' followed by '.', '(' or '$'
  Variable,  // '$Name' context variable; text holds Name
  Dot,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Plus,
  Eq,        // ==
  StrictEq,  // ===
  Lt,
  Gt,
  Ge,
  And,
  Or,
  Newline,
};

std::string_view to_string(TokenKind kind);

struct Token
{
  TokenKind kind;
  std::string text;
  int count = 1;
  SourceLocation loc;
  std::size_t begin = 0;  // byte offsets into the source
  std::size_t end = 0;
};

/// Line-oriented lexer for BSL documents. Comments and blank lines produce no
/// tokens; every other line ends with a Newline token.
std::vector<Token> tokenize(std::string_view source);

/// Lexes a bare payload (expression or SetDo text). Newlines are whitespace.
std::vector<Token> tokenize_value(std::string_view source, SourceLocation origin = {1, 1});

}  // namespace eo::bsl
