#pragma once

#include <span>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "eo/graph/event_graph.hpp"

namespace eo::graph
{

/// Portable record: {id, base, type, value, actor, cause[], model, ts}.
/// Values: numbers and strings as JSON scalars, null, or {"ref": "<id>"}.
/// `ts` is microseconds since the Unix epoch.
nlohmann::json to_json(const Event & e);
Event event_from_json(const nlohmann::json & j);

nlohmann::json scalar_to_json(const Scalar & v);
Scalar scalar_from_json(const nlohmann::json & j);

/**
 * Builds a self-contained document of `roots` in append (causal) order. With
 * `closure`, every ancestor reachable through cause, base, summary links, and
 * individual references is included, so the result always imports cleanly.
 */
nlohmann::json export_subgraph(const EventGraph & g, std::span<const EventId> roots, bool closure);
nlohmann::json export_all(const EventGraph & g);

struct ImportResult
{
  EventGraph graph;
  std::unordered_map<EventId, EventId> remap;  // document id -> new id
};

/// Loads a document into a fresh graph under fresh ids. Throws CorruptDocument or DanglingCause.
ImportResult import_subgraph(const nlohmann::json & doc);

}  // namespace eo::graph
