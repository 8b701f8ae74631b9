#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eo/bsl/lexer.hpp"
#include "eo/core/scalar.hpp"

namespace eo::bsl
{

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Deep structural comparison; null pointers compare equal only to each other.
bool same_expr(const ExprPtr & a, const ExprPtr & b);

struct Literal
{
  Scalar value;  // double or std::string
  friend bool operator==(const Literal &, const Literal &) = default;
};

/// `$.p` (variable empty) or a context variable such as `$Value` / `$CurrentIndividual`.
struct PropRef
{
  std::string variable;
  std::string property;
  friend bool operator==(const PropRef &, const PropRef &) = default;
};

/// Unary `+`: forces a numeric reading of its operand.
struct NumCoerce
{
  ExprPtr operand;
  friend bool operator==(const NumCoerce & a, const NumCoerce & b) { return same_expr(a.operand, b.operand); }
};

/// Single-hop relation navigation, `$($.rel).p` or `($$.rel).p`.
struct Deref
{
  ExprPtr relation;  // always a PropRef with an empty variable
  std::string property;
  friend bool operator==(const Deref & a, const Deref & b)
  {
    return a.property == b.property && same_expr(a.relation, b.relation);
  }
};

enum class BinaryOp { Eq, StrictEq, Lt, Gt, Ge, And, Or };

std::string_view to_string(BinaryOp op);

struct Binary
{
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
  friend bool operator==(const Binary & a, const Binary & b)
  {
    return a.op == b.op && same_expr(a.lhs, b.lhs) && same_expr(a.rhs, b.rhs);
  }
};

struct Expr
{
  std::variant<Literal, PropRef, NumCoerce, Deref, Binary> node;
  SourceLocation loc;
  friend bool operator==(const Expr &, const Expr &) = default;
};

template <typename Node>
ExprPtr make_expr(Node node, SourceLocation loc = {})
{
  return std::make_shared<const Expr>(Expr{std::move(node), loc});
}

/// One `{'$do': 'EditIndividual', ...}` object of a SetDo payload.
struct SetDoAction
{
  std::string act = "EditIndividual";
  ExprPtr target;
  ExprPtr guard;
  std::map<std::string, Scalar> assignments;
  SourceLocation loc;

  friend bool operator==(const SetDoAction & a, const SetDoAction & b)
  {
    return a.act == b.act && same_expr(a.target, b.target) && same_expr(a.guard, b.guard) &&
           a.assignments == b.assignments;
  }
};

enum class RestrictionKind { Condition, SetValue, SetDo, Default, Multiple, Required, Unsupported };

std::string_view to_string(RestrictionKind kind);
std::optional<RestrictionKind> restriction_kind(std::string_view keyword);

struct Restriction
{
  RestrictionKind kind = RestrictionKind::Unsupported;
  int colons = 2;
  ExprPtr expr;                      // Condition, SetValue
  std::vector<SetDoAction> actions;  // SetDo
  Scalar scalar;                     // Default, Multiple, Required
  std::string keyword;               // Unsupported: the keyword as written
  std::string raw;                   // Unsupported: payload text
  SourceLocation loc;

  friend bool operator==(const Restriction & a, const Restriction & b)
  {
    return a.kind == b.kind && a.colons == b.colons && same_expr(a.expr, b.expr) && a.actions == b.actions &&
           a.scalar == b.scalar && a.keyword == b.keyword && a.raw == b.raw;
  }
};

enum class PropertyKind { Attribute, Relation };
enum class DataType { Numeric, Boolean, String };

std::string_view to_string(PropertyKind kind);
std::string_view to_string(DataType type);
std::optional<DataType> data_type(std::string_view name);

/// A property listed in a model body. `depth` is the colon count minus one.
struct PropertyUse
{
  PropertyKind kind = PropertyKind::Attribute;
  std::string property;
  int depth = 0;
  std::vector<Restriction> restrictions;
  std::vector<PropertyUse> nested;
  SourceLocation loc;

  const Restriction * find(RestrictionKind k) const;
  friend bool operator==(const PropertyUse &, const PropertyUse &) = default;
};

struct ConceptDecl
{
  std::string name;
  SourceLocation loc;
  friend bool operator==(const ConceptDecl &, const ConceptDecl &) = default;
};

/// `Attribute: Individual: <name>` + `: DataType:` or `Relation: Individual: <name>` + `: Range:`.
struct PropertyDecl
{
  PropertyKind kind = PropertyKind::Attribute;
  std::string name;
  std::optional<DataType> data_type;
  std::optional<std::string> range;
  SourceLocation loc;
  friend bool operator==(const PropertyDecl &, const PropertyDecl &) = default;
};

struct ModelDecl
{
  std::string concept_name;
  std::string name;
  std::vector<PropertyUse> properties;
  SourceLocation loc;

  const PropertyUse * find(std::string_view property) const;
  friend bool operator==(const ModelDecl &, const ModelDecl &) = default;
};

/// `: <property>: <value>` inside an individual; nested entries carry more colons.
struct ValueEntry
{
  std::string property;
  Scalar value;
  int depth = 0;
  std::vector<ValueEntry> nested;
  SourceLocation loc;
  friend bool operator==(const ValueEntry &, const ValueEntry &) = default;
};

struct IndividualDecl
{
  std::string concept_name;
  std::string name;
  std::string model;  // from `: SetModel:`; empty if absent
  std::vector<ValueEntry> values;
  SourceLocation loc;
  friend bool operator==(const IndividualDecl &, const IndividualDecl &) = default;
};

inline constexpr std::string_view kViewConcept = "View";

using Declaration = std::variant<ConceptDecl, PropertyDecl, ModelDecl, IndividualDecl>;

struct Document
{
  std::vector<Declaration> declarations;
  friend bool operator==(const Document &, const Document &) = default;
};

}  // namespace eo::bsl
