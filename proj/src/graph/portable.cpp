#include "eo/graph/portable.hpp"

#include <algorithm>
#include <unordered_set>

namespace eo::graph
{

using nlohmann::json;

namespace
{

constexpr const char * kFormat = "eo-graph/1";

EventId parse_id(const json & j, const char * field)
{
  if (!j.is_string()) throw CorruptDocument(std::string("field '") + field + "' must be an id string");
  auto id = EventId::parse(j.get<std::string>());
  if (!id) throw CorruptDocument(std::string("malformed id in '") + field + "'");
  return *id;
}

}  // namespace

json scalar_to_json(const Scalar & v)
{
  return std::visit(
    [](const auto & x) -> json {
      using T = std::decay_t<decltype(x)>;
      if constexpr (std::is_same_v<T, std::monostate>) {
        return nullptr;
      } else if constexpr (std::is_same_v<T, IndividualRef>) {
        return json{{"ref", x.id.hex()}};
      } else {
        return x;
      }
    },
    v);
}

Scalar scalar_from_json(const json & j)
{
  if (j.is_null()) return Scalar{};
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object() && j.contains("ref")) return IndividualRef{parse_id(j.at("ref"), "value.ref")};
  throw CorruptDocument("unsupported value encoding");
}

json to_json(const Event & e)
{
  json cause = json::array();
  for (const auto & c : e.cause) cause.push_back(c.hex());
  auto ts = std::chrono::duration_cast<std::chrono::microseconds>(e.timestamp.time_since_epoch()).count();
  return json{
    {"id", e.id.hex()},
    {"base", e.base ? json(e.base->hex()) : json(nullptr)},
    {"type", e.type},
    {"value", scalar_to_json(e.value)},
    {"actor", e.actor},
    {"cause", std::move(cause)},
    {"model", e.model ? json(*e.model) : json(nullptr)},
    {"ts", ts},
  };
}

Event event_from_json(const json & j)
{
  if (!j.is_object()) throw CorruptDocument("event record must be an object");
  for (const char * field : {"id", "base", "type", "value", "actor", "cause", "model", "ts"}) {
    if (!j.contains(field)) throw CorruptDocument(std::string("event record lacks '") + field + "'");
  }
  Event e;
  e.id = parse_id(j.at("id"), "id");
  if (!j.at("base").is_null()) e.base = parse_id(j.at("base"), "base");
  if (!j.at("type").is_string() || !j.at("actor").is_string()) throw CorruptDocument("type and actor must be strings");
  e.type = j.at("type").get<std::string>();
  e.value = scalar_from_json(j.at("value"));
  e.actor = j.at("actor").get<std::string>();
  if (!j.at("cause").is_array()) throw CorruptDocument("cause must be an array");
  for (const auto & c : j.at("cause")) e.cause.push_back(parse_id(c, "cause"));
  if (!j.at("model").is_null()) e.model = j.at("model").get<std::string>();
  if (!j.at("ts").is_number_integer()) throw CorruptDocument("ts must be an integer");
  e.timestamp = Timestamp(std::chrono::microseconds(j.at("ts").get<std::int64_t>()));
  return e;
}

json export_subgraph(const EventGraph & g, std::span<const EventId> roots, bool closure)
{
  std::unordered_set<EventId> selected;
  std::vector<EventId> stack;
  for (const auto & r : roots) {
    g.at(r);
    if (selected.insert(r).second) stack.push_back(r);
  }
  while (closure && !stack.empty()) {
    EventId id = stack.back();
    stack.pop_back();
    const Event & e = g.at(id);
    auto visit = [&](const EventId & dep) {
      if (selected.insert(dep).second) stack.push_back(dep);
    };
    for (const auto & c : e.cause) visit(c);
    for (const auto & c : g.summary_causes(id)) visit(c);
    if (e.base) visit(*e.base);
    if (const auto * ref = std::get_if<IndividualRef>(&e.value)) visit(ref->id);
  }

  std::vector<std::size_t> order;
  for (const auto & id : selected) order.push_back(g.position(id));
  std::sort(order.begin(), order.end());

  json events = json::array();
  for (std::size_t pos : order) {
    const Event & e = g.events()[pos];
    json record = to_json(e);
    if (g.archived(e.id)) record["archived"] = true;
    if (auto s = g.summary_causes(e.id); !s.empty()) {
      json links = json::array();
      for (const auto & c : s) links.push_back(c.hex());
      record["summary_cause"] = std::move(links);
    }
    events.push_back(std::move(record));
  }
  json multiple = json::array();
  for (const auto & p : g.multiple_properties()) multiple.push_back(p);
  return json{{"format", kFormat}, {"multiple", std::move(multiple)}, {"events", std::move(events)}};
}

json export_all(const EventGraph & g)
{
  std::vector<EventId> all;
  all.reserve(g.size());
  for (const auto & e : g.events()) all.push_back(e.id);
  return export_subgraph(g, all, false);
}

ImportResult import_subgraph(const json & doc)
{
  if (!doc.is_object() || doc.value("format", "") != kFormat || !doc.contains("events") || !doc.at("events").is_array()) {
    throw CorruptDocument("not an eo-graph/1 document");
  }
  ImportResult result;
  if (doc.contains("multiple")) {
    for (const auto & p : doc.at("multiple")) result.graph.declare_multiple(p.get<std::string>());
  }
  std::unordered_set<EventId> fresh_ids;
  auto map_id = [&](const EventId & old, const char * what) {
    auto it = result.remap.find(old);
    if (it == result.remap.end()) throw DanglingCause(std::string(what) + " " + old.hex() + " precedes nothing in the document");
    return it->second;
  };
  for (const auto & record : doc.at("events")) {
    Event e = event_from_json(record);
    if (result.remap.count(e.id)) throw CorruptDocument("duplicate event id " + e.id.hex());
    EventId old = e.id;
    EventId fresh;
    do {
      fresh = EventId::generate();
    } while (!fresh_ids.insert(fresh).second);
    for (auto & c : e.cause) c = map_id(c, "cause");
    if (e.base) e.base = map_id(*e.base, "base");
    if (auto * ref = std::get_if<IndividualRef>(&e.value)) ref->id = map_id(ref->id, "reference");
    e.id = fresh;
    try {
      result.graph.append_event(std::move(e));
    } catch (const DuplicateIndividual & err) {
      throw CorruptDocument(err.what());
    }
    result.remap.emplace(old, fresh);
    if (record.value("archived", false)) result.graph.mark_archived(fresh);
    if (record.contains("summary_cause")) {
      for (const auto & c : record.at("summary_cause")) {
        result.graph.add_summary_cause(fresh, map_id(parse_id(c, "summary_cause"), "summary cause"));
      }
    }
  }
  return result;
}

}  // namespace eo::graph
