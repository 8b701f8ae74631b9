#pragma once

#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "eo/graph/event.hpp"

namespace eo::graph
{

struct CausalTrace
{
  EventId root;
  /// (effect, cause) pairs in breadth-first discovery order.
  std::vector<std::pair<EventId, EventId>> edges;
  std::vector<EventId> nodes;  // root first, then in discovery order
  int depth = 0;               // hops reached
};

/**
 * Append-only temporal event graph.
 *
 * Events are stored in append order, which is the total order used everywhere;
 * timestamps are carried but never consulted. The graph keeps three indexes:
 * the value history per (base, type), the current heads per (base, type), and
 * the events per base (individual). A head set holds one event for ordinary
 * properties and any number for properties declared Multiple.
 *
 * Not internally synchronized: callers serialize writers (see engine/service).
 */
class EventGraph
{
public:
  using Listener = std::function<void(const Event &)>;

  EventGraph() = default;
  EventGraph(const EventGraph & other);
  EventGraph & operator=(const EventGraph & other);
  EventGraph(EventGraph &&) noexcept = default;
  EventGraph & operator=(EventGraph &&) noexcept = default;

  EventId append(EventDraft draft);
  /// Appends a fully formed event keeping its id (branching and import).
  void append_event(Event event);

  std::size_t size() const { return events_.size(); }
  const std::vector<Event> & events() const { return events_; }
  const Event * find(const EventId & id) const;
  const Event & at(const EventId & id) const;
  std::size_t position(const EventId & id) const;
  bool contains(const EventId & id) const { return index_.count(id) != 0; }

  // Individuals -----------------------------------------------------------
  std::optional<EventId> find_individual(std::string_view name) const;
  EventId individual(std::string_view name) const;  // throws UnknownIndividual
  bool is_individual(const EventId & id) const;
  const std::string & individual_name(const EventId & id) const;
  std::vector<EventId> individuals() const;

  // State -----------------------------------------------------------------
  Scalar current_value(const EventId & individual, std::string_view property) const;
  std::vector<EventId> heads(const EventId & base, std::string_view property) const;
  std::optional<EventId> head(const EventId & base, std::string_view property) const;
  std::vector<const Event *> history(const EventId & individual, std::string_view property) const;
  /// Properties with at least one value event on `base`, in first-write order.
  std::vector<std::string> properties(const EventId & base) const;
  std::vector<const Event *> events_on(const EventId & base) const;

  void declare_multiple(const std::string & property) { multiple_.insert(property); }
  bool is_multiple(std::string_view property) const { return multiple_.count(std::string(property)) != 0; }
  const std::set<std::string> & multiple_properties() const { return multiple_; }

  // Causality -------------------------------------------------------------
  /// Causes as seen through transitive reduction: archived causes are replaced by
  /// their own effective causes and summary links are added.
  std::vector<EventId> effective_causes(const EventId & id) const;
  CausalTrace causal_trace(const EventId & root, int max_depth) const;

  // Derived handles -------------------------------------------------------
  EventGraph branch(const EventId & at) const;
  EventGraph transitive_reduce(std::span<const EventId> chain) const;

  bool archived(const EventId & id) const { return archived_.count(id) != 0; }
  std::vector<EventId> summary_causes(const EventId & id) const;
  void mark_archived(const EventId & id);
  void add_summary_cause(const EventId & result, const EventId & intent);

  // Observers -------------------------------------------------------------
  std::size_t subscribe(Listener listener);
  void unsubscribe(std::size_t token);

private:
  using Key = std::pair<EventId, std::string>;

  void index_event(std::size_t pos);

  std::vector<Event> events_;
  std::unordered_map<EventId, std::size_t> index_;
  std::map<Key, std::vector<std::size_t>> history_;
  std::map<Key, std::vector<EventId>> heads_;
  std::unordered_map<EventId, std::vector<std::size_t>> by_base_;
  std::map<std::string, EventId, std::less<>> individuals_by_name_;
  std::set<std::string> multiple_;
  std::unordered_set<EventId> archived_;
  std::unordered_map<EventId, std::vector<EventId>> summary_;
  std::map<std::size_t, Listener> listeners_;
  std::size_t next_listener_ = 0;
};

}  // namespace eo::graph
