#include "eo/bsl/ast.hpp"

namespace eo::bsl
{

bool same_expr(const ExprPtr & a, const ExprPtr & b)
{
  if (!a || !b) return !a && !b;
  return a == b || *a == *b;
}

std::string_view to_string(BinaryOp op)
{
  switch (op) {
    case BinaryOp::Eq: return "==";
    case BinaryOp::StrictEq: return "===";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

std::string_view to_string(RestrictionKind kind)
{
  switch (kind) {
    case RestrictionKind::Condition: return "Condition";
    case RestrictionKind::SetValue: return "SetValue";
    case RestrictionKind::SetDo: return "SetDo";
    case RestrictionKind::Default: return "Default";
    case RestrictionKind::Multiple: return "Multiple";
    case RestrictionKind::Required: return "Required";
    case RestrictionKind::Unsupported: return "Unsupported";
  }
  return "?";
}

std::optional<RestrictionKind> restriction_kind(std::string_view keyword)
{
  if (keyword == "Condition") return RestrictionKind::Condition;
  if (keyword == "SetValue") return RestrictionKind::SetValue;
  if (keyword == "SetDo") return RestrictionKind::SetDo;
  if (keyword == "Default") return RestrictionKind::Default;
  if (keyword == "Multiple") return RestrictionKind::Multiple;
  if (keyword == "Required") return RestrictionKind::Required;
  return std::nullopt;
}

std::string_view to_string(PropertyKind kind)
{
  return kind == PropertyKind::Attribute ? "Attribute" : "Relation";
}

std::string_view to_string(DataType type)
{
  switch (type) {
    case DataType::Numeric: return "Numeric";
    case DataType::Boolean: return "Boolean";
    case DataType::String: return "String";
  }
  return "?";
}

std::optional<DataType> data_type(std::string_view name)
{
  if (name == "Numeric") return DataType::Numeric;
  if (name == "Boolean") return DataType::Boolean;
  if (name == "String") return DataType::String;
  return std::nullopt;
}

const Restriction * PropertyUse::find(RestrictionKind k) const
{
  for (const auto & r : restrictions) {
    if (r.kind == k) return &r;
  }
  return nullptr;
}

const PropertyUse * ModelDecl::find(std::string_view property) const
{
  for (const auto & p : properties) {
    if (p.property == property) return &p;
  }
  return nullptr;
}

}  // namespace eo::bsl
