#include "eo/bsl/printer.hpp"

#include <cctype>
#include <sstream>

namespace eo::bsl
{

namespace
{

int precedence(const Expr & e)
{
  if (const auto * b = std::get_if<Binary>(&e.node)) {
    switch (b->op) {
      case BinaryOp::Or: return 1;
      case BinaryOp::And: return 2;
      default: return 3;
    }
  }
  return 4;
}

std::string quote(std::string_view text, char q)
{
  std::string out(1, q);
  for (char c : text) {
    if (c == q || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back(q);
  return out;
}

std::string literal(const Scalar & v, char q)
{
  if (const auto * d = std::get_if<double>(&v)) return format_number(*d);
  return quote(canonical(v), q);
}

void print(std::ostream & os, const Expr & e)
{
  std::visit(
    [&](const auto & n) {
      using T = std::decay_t<decltype(n)>;
      if constexpr (std::is_same_v<T, Literal>) {
        os << literal(n.value, '"');
      } else if constexpr (std::is_same_v<T, PropRef>) {
        if (n.variable.empty()) {
          os << "$." << n.property;
        } else {
          os << '$' << n.variable;
        }
      } else if constexpr (std::is_same_v<T, NumCoerce>) {
        os << '+';
        if (precedence(*n.operand) < 4) {
          os << '(';
          print(os, *n.operand);
          os << ')';
        } else {
          print(os, *n.operand);
        }
      } else if constexpr (std::is_same_v<T, Deref>) {
        os << "$(";
        print(os, *n.relation);
        os << ")." << n.property;
      } else {
        const int p = precedence(e);
        // Left-associative: parenthesize a right operand of equal precedence.
        bool lp = precedence(*n.lhs) < p;
        bool rp = precedence(*n.rhs) <= p;
        if (lp) os << '(';
        print(os, *n.lhs);
        if (lp) os << ')';
        os << ' ' << to_string(n.op) << ' ';
        if (rp) os << '(';
        print(os, *n.rhs);
        if (rp) os << ')';
      }
    },
    e.node);
}

// Plain text survives re-lexing as a merged identifier; anything else is quoted.
bool plain_text(std::string_view s)
{
  if (s.empty() || parse_number(s)) return false;
  auto word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
  };
  if (!word_char(s.front()) || !word_char(s.back())) return false;
  if (std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ' ') {
      if (s[i + 1] == ' ') return false;
      continue;
    }
    if (!word_char(s[i])) return false;
  }
  return true;
}

std::string value_text(const Scalar & v)
{
  if (const auto * d = std::get_if<double>(&v)) return format_number(*d);
  std::string s = canonical(v);
  return plain_text(s) ? s : quote(s, '"');
}

void print_uses(std::ostream & os, const std::vector<PropertyUse> & uses)
{
  for (const auto & u : uses) {
    os << std::string(u.depth + 1, ':') << ' ' << to_string(u.kind) << ": " << u.property << '\n';
    for (const auto & r : u.restrictions) {
      os << std::string(r.colons, ':') << ' ';
      switch (r.kind) {
        case RestrictionKind::Condition:
        case RestrictionKind::SetValue:
          os << to_string(r.kind) << ": " << print_expression(*r.expr);
          break;
        case RestrictionKind::SetDo:
          os << "SetDo: " << print_setdo(r.actions);
          break;
        case RestrictionKind::Unsupported:
          os << r.keyword << ": " << r.raw;
          break;
        default:
          os << to_string(r.kind) << ": " << value_text(r.scalar);
          break;
      }
      os << '\n';
    }
    print_uses(os, u.nested);
  }
}

void print_values(std::ostream & os, const std::vector<ValueEntry> & values)
{
  for (const auto & v : values) {
    os << std::string(v.depth + 1, ':') << ' ' << v.property << ": " << value_text(v.value) << '\n';
    print_values(os, v.nested);
  }
}

}  // namespace

std::string print_expression(const Expr & expr)
{
  std::ostringstream os;
  print(os, expr);
  return os.str();
}

std::string print_setdo(const std::vector<SetDoAction> & actions)
{
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const auto & a = actions[i];
    if (i) os << ", ";
    os << "{'$do': " << quote(a.act, '\'') << ", '$IndividualID': " << print_expression(*a.target)
       << ", '$Condition': " << print_expression(*a.guard);
    for (const auto & [key, value] : a.assignments) {
      os << ", " << quote(key, '\'') << ": " << literal(value, '"');
    }
    os << '}';
  }
  os << ')';
  return os.str();
}

std::string pretty_print(const Document & doc)
{
  std::ostringstream os;
  bool first = true;
  for (const auto & decl : doc.declarations) {
    if (!first) os << '\n';
    first = false;
    std::visit(
      [&](const auto & d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConceptDecl>) {
          os << "Concept: Instance: " << d.name << '\n';
        } else if constexpr (std::is_same_v<T, PropertyDecl>) {
          os << to_string(d.kind) << ": Individual: " << d.name << '\n';
          if (d.data_type) os << ": DataType: " << to_string(*d.data_type) << '\n';
          if (d.range) os << ": Range: " << *d.range << '\n';
        } else if constexpr (std::is_same_v<T, ModelDecl>) {
          os << d.concept_name << ": Model: " << d.name << '\n';
          print_uses(os, d.properties);
        } else {
          os << d.concept_name << ": Individual: " << d.name << '\n';
          if (!d.model.empty()) os << ": SetModel: " << d.model << '\n';
          print_values(os, d.values);
        }
      },
      decl);
  }
  return os.str();
}

}  // namespace eo::bsl
