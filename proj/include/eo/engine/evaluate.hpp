#pragma once

#include <stdexcept>
#include <vector>

#include "eo/bsl/ast.hpp"
#include "eo/graph/event_graph.hpp"

namespace eo::engine
{

class CoercionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct EvalContext
{
  const graph::EventGraph & graph;
  EventId current_individual;
  Scalar trigger_value;          // `$Value`
  std::vector<EventId> reads{};  // head events consulted, first-read order, no duplicates

  void record(const EventId & id);
};

/// Evaluates an expression. Booleans come back as Numeric 0/1; unset values make comparisons false.
Scalar evaluate(const bsl::Expr & expr, EvalContext & ctx);

/// Condition truth: non-zero numbers, non-empty non-"0" strings, and references are true.
bool truthy(const Scalar & v);

}  // namespace eo::engine
