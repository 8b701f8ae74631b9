#include "eo/engine/evaluate.hpp"

#include <algorithm>

namespace eo::engine
{

using namespace eo::bsl;

void EvalContext::record(const EventId & id)
{
  if (std::find(reads.begin(), reads.end(), id) == reads.end()) reads.push_back(id);
}

bool truthy(const Scalar & v)
{
  if (is_null(v)) return false;
  if (const auto * d = std::get_if<double>(&v)) return *d != 0;
  if (const auto * s = std::get_if<std::string>(&v)) {
    auto n = parse_number(*s);
    return n ? *n != 0 : !s->empty();
  }
  return true;
}

namespace
{

Scalar boolean(bool b) { return b ? 1.0 : 0.0; }

Scalar read(EvalContext & ctx, const EventId & individual, const std::string & property)
{
  auto heads = ctx.graph.heads(individual, property);
  for (const auto & h : heads) ctx.record(h);
  return ctx.graph.current_value(individual, property);
}

Scalar compare(BinaryOp op, const Scalar & l, const Scalar & r)
{
  if (is_null(l) || is_null(r)) return 0.0;
  if (op == BinaryOp::StrictEq) return boolean(canonical(l) == canonical(r));
  auto ln = to_number(l);
  auto rn = to_number(r);
  if (ln && rn) {
    switch (op) {
      case BinaryOp::Eq: return boolean(*ln == *rn);
      case BinaryOp::Lt: return boolean(*ln < *rn);
      case BinaryOp::Gt: return boolean(*ln > *rn);
      default: return boolean(*ln >= *rn);
    }
  }
  auto ls = canonical(l);
  auto rs = canonical(r);
  switch (op) {
    case BinaryOp::Eq: return boolean(ls == rs);
    case BinaryOp::Lt: return boolean(ls < rs);
    case BinaryOp::Gt: return boolean(ls > rs);
    default: return boolean(ls >= rs);
  }
}

struct Evaluator
{
  EvalContext & ctx;

  Scalar operator()(const Literal & n) const { return n.value; }

  Scalar operator()(const PropRef & n) const
  {
    if (n.variable == "Value") return ctx.trigger_value;
    if (n.variable == "CurrentIndividual") return IndividualRef{ctx.current_individual};
    if (!n.variable.empty()) return Scalar{};
    return read(ctx, ctx.current_individual, n.property);
  }

  Scalar operator()(const NumCoerce & n) const
  {
    Scalar v = evaluate(*n.operand, ctx);
    if (is_null(v)) return v;
    auto d = to_number(v);
    if (!d) throw CoercionError("cannot read '" + canonical(v) + "' as a number");
    return *d;
  }

  Scalar operator()(const Deref & n) const
  {
    Scalar target = evaluate(*n.relation, ctx);
    const auto * ref = std::get_if<IndividualRef>(&target);
    if (!ref || !ctx.graph.contains(ref->id)) return Scalar{};
    return read(ctx, ref->id, n.property);
  }

  Scalar operator()(const Binary & n) const
  {
    Scalar l = evaluate(*n.lhs, ctx);
    Scalar r = evaluate(*n.rhs, ctx);
    switch (n.op) {
      case BinaryOp::And: return boolean(truthy(l) && truthy(r));
      case BinaryOp::Or: return boolean(truthy(l) || truthy(r));
      default: return compare(n.op, l, r);
    }
  }
};

}  // namespace

Scalar evaluate(const Expr & expr, EvalContext & ctx) { return std::visit(Evaluator{ctx}, expr.node); }

}  // namespace eo::engine
