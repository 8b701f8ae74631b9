#include "eo/bsl/parser.hpp"

#include <optional>
#include <span>

namespace eo::bsl
{

namespace
{

using Tokens = std::span<const Token>;

std::string collapse_whitespace(std::string_view text)
{
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string raw_text(std::string_view source, Tokens toks)
{
  if (toks.empty()) return {};
  return collapse_whitespace(source.substr(toks.front().begin, toks.back().end - toks.front().begin));
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

class ExprParser
{
public:
  ExprParser(Tokens toks, SourceLocation end_loc) : toks_(toks), end_loc_(end_loc) {}

  ExprPtr parse_all()
  {
    if (toks_.empty()) fail("empty expression", {"expression"});
    ExprPtr e = parse_or();
    if (pos_ < toks_.size()) {
      fail("unexpected " + std::string(to_string(peek()->kind)) + " after expression", {"'&&'", "'||'", "end"});
    }
    return e;
  }

private:
  const Token * peek(std::size_t k = 0) const { return pos_ + k < toks_.size() ? &toks_[pos_ + k] : nullptr; }

  bool at(TokenKind kind, std::size_t k = 0) const
  {
    const Token * t = peek(k);
    return t && t->kind == kind;
  }

  SourceLocation loc() const { return pos_ < toks_.size() ? toks_[pos_].loc : end_loc_; }

  [[noreturn]] void fail(const std::string & what, std::vector<std::string> expected = {}) const
  {
    throw ExprParseError(what, loc(), std::move(expected));
  }

  const Token & expect(TokenKind kind)
  {
    if (!at(kind)) {
      fail("expected " + std::string(to_string(kind)), {std::string(to_string(kind))});
    }
    return toks_[pos_++];
  }

  ExprPtr parse_or()
  {
    ExprPtr lhs = parse_and();
    while (at(TokenKind::Or)) {
      SourceLocation l = loc();
      ++pos_;
      lhs = make_expr(Binary{BinaryOp::Or, lhs, parse_and()}, l);
    }
    return lhs;
  }

  ExprPtr parse_and()
  {
    ExprPtr lhs = parse_comparison();
    while (at(TokenKind::And)) {
      SourceLocation l = loc();
      ++pos_;
      lhs = make_expr(Binary{BinaryOp::And, lhs, parse_comparison()}, l);
    }
    return lhs;
  }

  static std::optional<BinaryOp> comparison(TokenKind kind)
  {
    switch (kind) {
      case TokenKind::Eq: return BinaryOp::Eq;
      case TokenKind::StrictEq: return BinaryOp::StrictEq;
      case TokenKind::Lt: return BinaryOp::Lt;
      case TokenKind::Gt: return BinaryOp::Gt;
      case TokenKind::Ge: return BinaryOp::Ge;
      default: return std::nullopt;
    }
  }

  ExprPtr parse_comparison()
  {
    ExprPtr lhs = parse_unary();
    while (const Token * t = peek()) {
      auto op = comparison(t->kind);
      if (!op) break;
      SourceLocation l = loc();
      ++pos_;
      lhs = make_expr(Binary{*op, lhs, parse_unary()}, l);
    }
    return lhs;
  }

  ExprPtr parse_unary()
  {
    if (at(TokenKind::Plus)) {
      SourceLocation l = loc();
      ++pos_;
      return make_expr(NumCoerce{parse_unary()}, l);
    }
    return parse_primary();
  }

  ExprPtr deref(ExprPtr relation, SourceLocation l)
  {
    expect(TokenKind::Dot);
    std::string property = expect(TokenKind::Ident).text;
    const auto * ref = std::get_if<PropRef>(&relation->node);
    if (!ref || !ref->variable.empty()) {
      throw ExprParseError("relation navigation supports a single hop from $.<relation>", l,
                           {"$.<relation>"});
    }
    return make_expr(Deref{std::move(relation), std::move(property)}, l);
  }

  ExprPtr parse_primary()
  {
    const Token * t = peek();
    if (!t) fail("expected operand", {"literal", "'$'", "'('", "'+'"});
    SourceLocation l = t->loc;
    switch (t->kind) {
      case TokenKind::Number: {
        ++pos_;
        return make_expr(Literal{*parse_number(t->text)}, l);
      }
      case TokenKind::String: {
        ++pos_;
        return make_expr(Literal{t->text}, l);
      }
      case TokenKind::Variable: {
        ++pos_;
        return make_expr(PropRef{t->text, ""}, l);
      }
      case TokenKind::Dollar: {
        ++pos_;
        if (at(TokenKind::Dot)) {
          ++pos_;
          return make_expr(PropRef{"", expect(TokenKind::Ident).text}, l);
        }
        if (at(TokenKind::LParen)) {
          ++pos_;
          ExprPtr inner = parse_or();
          expect(TokenKind::RParen);
          return deref(std::move(inner), l);
        }
        fail("unknown sigil after '$'", {"'$.'", "'$('"});
      }
      case TokenKind::LParen: {
        ++pos_;
        // ($$.rel).p is the alternate spelling of $($.rel).p
        if (at(TokenKind::Dollar) && at(TokenKind::Dollar, 1)) {
          pos_ += 2;
          expect(TokenKind::Dot);
          SourceLocation rl = loc();
          auto relation = make_expr(PropRef{"", expect(TokenKind::Ident).text}, rl);
          expect(TokenKind::RParen);
          return deref(std::move(relation), l);
        }
        ExprPtr inner = parse_or();
        expect(TokenKind::RParen);
        if (at(TokenKind::Dot)) return deref(std::move(inner), l);
        return inner;
      }
      default:
        fail("unexpected " + std::string(to_string(t->kind)), {"literal", "'$'", "'('", "'+'"});
    }
  }

  Tokens toks_;
  SourceLocation end_loc_;
  std::size_t pos_ = 0;
};

SourceLocation end_of(Tokens toks, SourceLocation fallback)
{
  if (toks.empty()) return fallback;
  SourceLocation l = toks.back().loc;
  l.column += static_cast<int>(toks.back().end - toks.back().begin);
  return l;
}

ExprPtr parse_expr_tokens(Tokens toks, SourceLocation fallback)
{
  return ExprParser(toks, end_of(toks, fallback)).parse_all();
}

// ---------------------------------------------------------------------------
// SetDo
// ---------------------------------------------------------------------------

class SetDoParser
{
public:
  SetDoParser(Tokens toks, SourceLocation fallback) : toks_(toks), end_loc_(end_of(toks, fallback)) {}

  std::vector<SetDoAction> parse_all()
  {
    std::vector<SetDoAction> actions;
    bool wrapped = at(TokenKind::LParen);
    if (wrapped) ++pos_;
    while (true) {
      actions.push_back(object());
      if (at(TokenKind::Comma) && at(TokenKind::LBrace, 1)) {
        ++pos_;
        continue;
      }
      break;
    }
    if (wrapped) expect(TokenKind::RParen);
    if (pos_ < toks_.size()) fail("unexpected tokens after SetDo payload");
    return actions;
  }

private:
  bool at(TokenKind kind, std::size_t k = 0) const
  {
    return pos_ + k < toks_.size() && toks_[pos_ + k].kind == kind;
  }

  SourceLocation loc() const { return pos_ < toks_.size() ? toks_[pos_].loc : end_loc_; }

  [[noreturn]] void fail(const std::string & what, std::vector<std::string> expected = {}) const
  {
    throw SetDoParseError(what, loc(), std::move(expected));
  }

  const Token & expect(TokenKind kind)
  {
    if (!at(kind)) fail("expected " + std::string(to_string(kind)), {std::string(to_string(kind))});
    return toks_[pos_++];
  }

  // Tokens up to the next ',' or '}' outside parentheses.
  Tokens value_slice()
  {
    std::size_t start = pos_;
    int depth = 0;
    while (pos_ < toks_.size()) {
      TokenKind k = toks_[pos_].kind;
      if (depth == 0 && (k == TokenKind::Comma || k == TokenKind::RBrace)) break;
      if (k == TokenKind::LParen) ++depth;
      if (k == TokenKind::RParen) {
        if (depth == 0) break;
        --depth;
      }
      ++pos_;
    }
    if (pos_ == start) fail("missing value", {"value"});
    return toks_.subspan(start, pos_ - start);
  }

  SetDoAction object()
  {
    SetDoAction action;
    action.loc = loc();
    expect(TokenKind::LBrace);
    bool have_do = false;
    while (!at(TokenKind::RBrace)) {
      const Token & key = at(TokenKind::String) ? toks_[pos_++] : expect(TokenKind::String);
      expect(TokenKind::Colon);
      if (key.text == "$do" || key.text == "do") {
        if (have_do) fail("duplicate '$do' key");
        action.act = expect(TokenKind::String).text;
        if (action.act != "EditIndividual") fail("unsupported act '" + action.act + "'", {"'EditIndividual'"});
        have_do = true;
      } else if (key.text == "$IndividualID") {
        if (action.target) fail("duplicate '$IndividualID' key");
        action.target = parse_expr_tokens(value_slice(), loc());
      } else if (key.text == "$Condition") {
        if (action.guard) fail("duplicate '$Condition' key");
        action.guard = parse_expr_tokens(value_slice(), loc());
      } else if (!key.text.empty() && key.text.front() == '$') {
        fail("unknown system key '" + key.text + "'");
      } else {
        Tokens v = value_slice();
        if (v.size() != 1 || (v[0].kind != TokenKind::Number && v[0].kind != TokenKind::String)) {
          throw SetDoParseError("assignment to '" + key.text + "' must be a literal", v[0].loc, {"literal"});
        }
        Scalar value = v[0].kind == TokenKind::Number ? Scalar{*parse_number(v[0].text)} : Scalar{v[0].text};
        if (!action.assignments.emplace(key.text, std::move(value)).second) {
          fail("duplicate assignment to '" + key.text + "'");
        }
      }
      if (at(TokenKind::Comma)) {
        ++pos_;
      } else if (!at(TokenKind::RBrace)) {
        fail("expected ',' or '}'", {"','", "'}'"});
      }
    }
    expect(TokenKind::RBrace);
    if (!have_do) throw SetDoParseError("SetDo action is missing '$do'", action.loc, {"'$do'"});
    if (!action.target) throw SetDoParseError("SetDo action is missing '$IndividualID'", action.loc, {"'$IndividualID'"});
    if (!action.guard) throw SetDoParseError("SetDo action is missing '$Condition'", action.loc, {"'$Condition'"});
    return action;
  }

  Tokens toks_;
  SourceLocation end_loc_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

struct Statement
{
  bool header = false;
  std::string first;    // header: concept/declaration word; body: keyword
  std::string second;   // header: Instance|Individual|Model
  int colons = 0;       // body only
  std::vector<Token> payload;
  SourceLocation loc;
};

bool is_header(Tokens line)
{
  if (line.size() < 4) return false;
  if (line[0].kind != TokenKind::Ident || line[1].kind != TokenKind::Colon || line[1].count != 1) return false;
  if (line[2].kind != TokenKind::Ident || line[3].kind != TokenKind::Colon || line[3].count != 1) return false;
  return line[2].text == "Instance" || line[2].text == "Individual" || line[2].text == "Model";
}

std::vector<Statement> statements(const std::vector<Token> & toks)
{
  std::vector<Statement> out;
  std::size_t i = 0;
  while (i < toks.size()) {
    std::size_t j = i;
    while (toks[j].kind != TokenKind::Newline) ++j;
    Tokens line(toks.data() + i, j - i);
    i = j + 1;
    if (line.empty()) continue;
    if (line[0].kind == TokenKind::Colon) {
      Statement s;
      s.loc = line[0].loc;
      s.colons = line[0].count;
      if (line.size() < 2 || line[1].kind != TokenKind::Ident) {
        throw ParseError("expected keyword after ':'", line.size() < 2 ? line[0].loc : line[1].loc, {"identifier"});
      }
      if (line.size() < 3 || line[2].kind != TokenKind::Colon) {
        throw ParseError("expected ':' after '" + line[1].text + "'", line[1].loc, {"':'"});
      }
      s.first = line[1].text;
      s.payload.assign(line.begin() + 3, line.end());
      out.push_back(std::move(s));
    } else if (is_header(line)) {
      Statement s;
      s.header = true;
      s.loc = line[0].loc;
      s.first = line[0].text;
      s.second = line[2].text;
      s.payload.assign(line.begin() + 4, line.end());
      out.push_back(std::move(s));
    } else {
      if (out.empty()) {
        throw ParseError("expected a declaration", line[0].loc, {"Concept:", "<Concept>: Model:", "<Concept>: Individual:"});
      }
      out.back().payload.insert(out.back().payload.end(), line.begin(), line.end());
    }
  }
  return out;
}

template <typename T>
std::vector<T> nest(std::vector<T> & flat, std::size_t & i, int depth)
{
  std::vector<T> out;
  while (i < flat.size() && flat[i].depth >= depth) {
    if (flat[i].depth == depth) {
      out.push_back(std::move(flat[i]));
      ++i;
    } else if (flat[i].depth == depth + 1 && !out.empty()) {
      out.back().nested = nest(flat, i, depth + 1);
    } else {
      throw ParseError("nesting skips a level", flat[i].loc);
    }
  }
  return out;
}

template <typename T>
std::vector<T> nest(std::vector<T> flat)
{
  std::size_t i = 0;
  auto out = nest(flat, i, 0);
  if (i != flat.size()) throw ParseError("nesting skips a level", flat[i].loc);
  return out;
}

constexpr int kMaxColons = 5;

class DocumentParser
{
public:
  explicit DocumentParser(std::string_view source) : source_(source) {}

  Document run()
  {
    auto toks = tokenize(source_);
    for (auto & s : statements(toks)) {
      if (s.header) {
        finish();
        header(s);
      } else {
        body(s);
      }
    }
    finish();
    return std::move(doc_);
  }

private:
  std::string name_of(const Statement & s) const
  {
    std::string name = raw_text(source_, s.payload);
    if (name.empty()) throw ParseError("expected a name", s.loc, {"name"});
    return name;
  }

  Scalar value_of(const Statement & s) const
  {
    if (s.payload.empty()) throw ParseError("expected a value for '" + s.first + "'", s.loc, {"value"});
    if (s.payload.size() == 1 && s.payload[0].kind == TokenKind::Number) return *parse_number(s.payload[0].text);
    if (s.payload.size() == 1 && s.payload[0].kind == TokenKind::String) return s.payload[0].text;
    return raw_text(source_, s.payload);
  }

  void header(const Statement & s)
  {
    if (s.second == "Instance") {
      if (s.first != "Concept") throw ParseError("expected 'Concept: Instance:'", s.loc, {"Concept"});
      doc_.declarations.emplace_back(ConceptDecl{name_of(s), s.loc});
    } else if (s.second == "Individual" && (s.first == "Attribute" || s.first == "Relation")) {
      PropertyDecl p;
      p.kind = s.first == "Attribute" ? PropertyKind::Attribute : PropertyKind::Relation;
      p.name = name_of(s);
      p.loc = s.loc;
      doc_.declarations.emplace_back(std::move(p));
    } else if (s.second == "Model") {
      ModelDecl m;
      m.concept_name = s.first;
      m.name = name_of(s);
      m.loc = s.loc;
      doc_.declarations.emplace_back(std::move(m));
    } else {
      IndividualDecl ind;
      ind.concept_name = s.first;
      ind.name = name_of(s);
      ind.loc = s.loc;
      doc_.declarations.emplace_back(std::move(ind));
    }
  }

  void body(Statement & s)
  {
    if (doc_.declarations.empty()) throw ParseError("property line outside a declaration", s.loc);
    if (s.colons > kMaxColons) throw ParseError("nesting deeper than four levels", s.loc);
    std::visit(
      [&](auto & decl) {
        using T = std::decay_t<decltype(decl)>;
        if constexpr (std::is_same_v<T, ConceptDecl>) {
          throw ParseError("concept declarations take no properties", s.loc);
        } else if constexpr (std::is_same_v<T, PropertyDecl>) {
          property_body(decl, s);
        } else if constexpr (std::is_same_v<T, ModelDecl>) {
          model_body(s);
        } else {
          individual_body(decl, s);
        }
      },
      doc_.declarations.back());
  }

  void property_body(PropertyDecl & decl, const Statement & s)
  {
    if (s.colons != 1) throw ParseError("unexpected nesting in property declaration", s.loc, {"':'"});
    if (s.first == "DataType") {
      if (decl.kind != PropertyKind::Attribute) throw ParseError("relations take a Range, not a DataType", s.loc, {"Range"});
      std::string name = name_of(s);
      auto type = data_type(name);
      if (!type) throw ParseError("unknown data type '" + name + "'", s.loc, {"Numeric", "Boolean", "String"});
      decl.data_type = type;
    } else if (s.first == "Range") {
      if (decl.kind != PropertyKind::Relation) throw ParseError("attributes take a DataType, not a Range", s.loc, {"DataType"});
      decl.range = name_of(s);
    } else {
      throw ParseError("unexpected '" + s.first + "' in property declaration", s.loc, {"DataType", "Range"});
    }
  }

  void model_body(Statement & s)
  {
    if (s.first == "Attribute" || s.first == "Relation") {
      PropertyUse use;
      use.kind = s.first == "Attribute" ? PropertyKind::Attribute : PropertyKind::Relation;
      use.property = name_of(s);
      use.depth = s.colons - 1;
      use.loc = s.loc;
      uses_.push_back(std::move(use));
      return;
    }
    if (s.colons < 2) throw ParseError("expected a property", s.loc, {"Attribute", "Relation"});
    if (uses_.empty() || uses_.back().depth + 1 > s.colons) {
      throw ParseError("restriction '" + s.first + "' has no owning property", s.loc);
    }
    uses_.back().restrictions.push_back(restriction(s));
  }

  Restriction restriction(const Statement & s) const
  {
    Restriction r;
    r.colons = s.colons;
    r.loc = s.loc;
    auto kind = restriction_kind(s.first);
    Tokens payload(s.payload);
    if (!kind) {
      r.kind = RestrictionKind::Unsupported;
      r.keyword = s.first;
      r.raw = raw_text(source_, payload);
      return r;
    }
    r.kind = *kind;
    switch (*kind) {
      case RestrictionKind::Condition:
      case RestrictionKind::SetValue:
        r.expr = parse_expr_tokens(payload, s.loc);
        break;
      case RestrictionKind::SetDo:
        if (payload.empty()) throw SetDoParseError("empty SetDo payload", s.loc, {"'{'"});
        r.actions = SetDoParser(payload, s.loc).parse_all();
        break;
      default:
        r.scalar = value_of(s);
        break;
    }
    return r;
  }

  void individual_body(IndividualDecl & decl, const Statement & s)
  {
    if (s.first == "SetModel" && s.colons == 1) {
      if (!decl.model.empty()) throw ParseError("duplicate SetModel", s.loc);
      decl.model = name_of(s);
      return;
    }
    ValueEntry v;
    v.property = s.first;
    v.value = value_of(s);
    v.depth = s.colons - 1;
    v.loc = s.loc;
    values_.push_back(std::move(v));
  }

  void finish()
  {
    if (doc_.declarations.empty()) return;
    auto & last = doc_.declarations.back();
    if (auto * m = std::get_if<ModelDecl>(&last); m && !uses_.empty()) {
      m->properties = nest(std::move(uses_));
    } else if (auto * ind = std::get_if<IndividualDecl>(&last); ind && !values_.empty()) {
      ind->values = nest(std::move(values_));
    }
    uses_.clear();
    values_.clear();
  }

  std::string_view source_;
  Document doc_;
  std::vector<PropertyUse> uses_;
  std::vector<ValueEntry> values_;
};

}  // namespace

Document parse_document(std::string_view source)
{
  return DocumentParser(source).run();
}

ExprPtr parse_expression(std::string_view text)
{
  std::vector<Token> toks;
  try {
    toks = tokenize_value(text);
  } catch (const LexError & e) {
    throw ExprParseError(e.detail(), e.location());
  }
  return parse_expr_tokens(toks, {1, 1});
}

std::vector<SetDoAction> parse_setdo(std::string_view text)
{
  std::vector<Token> toks;
  try {
    toks = tokenize_value(text);
  } catch (const LexError & e) {
    throw SetDoParseError(e.detail(), e.location());
  }
  if (toks.empty()) throw SetDoParseError("empty SetDo payload", {1, 1}, {"'{'"});
  return SetDoParser(toks, {1, 1}).parse_all();
}

}  // namespace eo::bsl
