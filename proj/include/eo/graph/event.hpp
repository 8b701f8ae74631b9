#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eo/core/scalar.hpp"

namespace eo::graph
{

using Timestamp = std::chrono::system_clock::time_point;

/// One immutable record of world history.
struct Event
{
  EventId id;
  std::optional<EventId> base;  // entity/property initiation event this refers to
  std::string type;             // property name, or a schema/initiation kind
  Scalar value;
  std::string actor;
  std::vector<EventId> cause;
  std::optional<std::string> model;
  Timestamp timestamp;  // informational only
};

/// An event before the graph assigns its id.
struct EventDraft
{
  std::optional<EventId> base;
  std::string type;
  Scalar value;
  std::string actor = "engine";
  std::vector<EventId> cause;
  std::optional<std::string> model;
  std::optional<Timestamp> timestamp;
};

/// Type of the event that brings an individual into existence; its value is the name.
inline constexpr std::string_view kIndividualType = "Individual";
/// Retracts one value of a Multiple property; its base is the retracted value event.
inline constexpr std::string_view kRetractType = "$retract";

class GraphError : public std::runtime_error
{
public:
  GraphError(std::string code, const std::string & what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string & code() const { return code_; }

private:
  std::string code_;
};

#define EO_GRAPH_ERROR(Name)                                                              \
  class Name : public GraphError                                                          \
  {                                                                                       \
  public:                                                                                 \
    explicit Name(const std::string & what) : GraphError(#Name, what) {}                  \
  }

EO_GRAPH_ERROR(UnknownCause);
EO_GRAPH_ERROR(UnknownBase);
EO_GRAPH_ERROR(UnknownEvent);
EO_GRAPH_ERROR(UnknownIndividual);
EO_GRAPH_ERROR(DuplicateIndividual);
EO_GRAPH_ERROR(NotAPath);
EO_GRAPH_ERROR(CorruptDocument);
EO_GRAPH_ERROR(DanglingCause);

#undef EO_GRAPH_ERROR

}  // namespace eo::graph
