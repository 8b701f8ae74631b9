#include "eo/graph/event_graph.hpp"

#include <algorithm>
#include <deque>

namespace eo::graph
{

EventGraph::EventGraph(const EventGraph & other)
: events_(other.events_),
  index_(other.index_),
  history_(other.history_),
  heads_(other.heads_),
  by_base_(other.by_base_),
  individuals_by_name_(other.individuals_by_name_),
  multiple_(other.multiple_),
  archived_(other.archived_),
  summary_(other.summary_)
{
}

EventGraph & EventGraph::operator=(const EventGraph & other)
{
  if (this != &other) {
    EventGraph copy(other);
    *this = std::move(copy);
  }
  return *this;
}

EventId EventGraph::append(EventDraft draft)
{
  Event e;
  do {
    e.id = EventId::generate();
  } while (contains(e.id));
  e.base = draft.base;
  e.type = std::move(draft.type);
  e.value = std::move(draft.value);
  e.actor = std::move(draft.actor);
  e.cause = std::move(draft.cause);
  e.model = std::move(draft.model);
  e.timestamp = draft.timestamp.value_or(std::chrono::system_clock::now());
  EventId id = e.id;
  append_event(std::move(e));
  return id;
}

void EventGraph::append_event(Event event)
{
  if (event.id.nil() || contains(event.id)) throw CorruptDocument("duplicate or nil event id " + event.id.hex());
  for (const auto & c : event.cause) {
    if (!contains(c)) throw UnknownCause("cause " + c.hex() + " is not in the graph");
  }
  if (event.base && !contains(*event.base)) throw UnknownBase("base " + event.base->hex() + " is not in the graph");
  if (const auto * ref = std::get_if<IndividualRef>(&event.value); ref && !is_individual(ref->id)) {
    throw UnknownBase("value refers to unknown individual " + ref->id.hex());
  }
  if (event.type == kIndividualType && !event.base) {
    const auto * name = std::get_if<std::string>(&event.value);
    if (!name || name->empty()) throw CorruptDocument("individual initiation event needs a name");
    if (individuals_by_name_.count(*name)) throw DuplicateIndividual("individual '" + *name + "' already exists");
  }
  if (event.type == kRetractType && !event.base) throw UnknownBase("retraction needs the retracted event as base");

  events_.push_back(std::move(event));
  index_event(events_.size() - 1);
  const Event & stored = events_.back();
  for (const auto & [token, listener] : listeners_) listener(stored);
}

void EventGraph::index_event(std::size_t pos)
{
  const Event & e = events_[pos];
  index_.emplace(e.id, pos);
  if (!e.base) {
    if (e.type == kIndividualType) individuals_by_name_.emplace(std::get<std::string>(e.value), e.id);
    return;
  }
  if (e.type == kRetractType) {
    const Event & target = at(*e.base);
    if (target.base) {
      auto it = heads_.find({*target.base, target.type});
      if (it != heads_.end()) std::erase(it->second, target.id);
    }
    return;
  }
  by_base_[*e.base].push_back(pos);
  Key key{*e.base, e.type};
  history_[key].push_back(pos);
  auto & h = heads_[key];
  if (is_multiple(e.type)) {
    h.push_back(e.id);
  } else {
    h.assign(1, e.id);
  }
}

const Event * EventGraph::find(const EventId & id) const
{
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &events_[it->second];
}

const Event & EventGraph::at(const EventId & id) const
{
  const Event * e = find(id);
  if (!e) throw UnknownEvent("event " + id.hex() + " is not in the graph");
  return *e;
}

std::size_t EventGraph::position(const EventId & id) const
{
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownEvent("event " + id.hex() + " is not in the graph");
  return it->second;
}

std::optional<EventId> EventGraph::find_individual(std::string_view name) const
{
  auto it = individuals_by_name_.find(name);
  if (it == individuals_by_name_.end()) return std::nullopt;
  return it->second;
}

EventId EventGraph::individual(std::string_view name) const
{
  auto id = find_individual(name);
  if (!id) throw UnknownIndividual("unknown individual '" + std::string(name) + "'");
  return *id;
}

bool EventGraph::is_individual(const EventId & id) const
{
  const Event * e = find(id);
  return e && !e->base && e->type == kIndividualType;
}

const std::string & EventGraph::individual_name(const EventId & id) const
{
  if (!is_individual(id)) throw UnknownIndividual("event " + id.hex() + " is not an individual");
  return std::get<std::string>(at(id).value);
}

std::vector<EventId> EventGraph::individuals() const
{
  std::vector<std::pair<std::size_t, EventId>> found;
  for (const auto & [name, id] : individuals_by_name_) found.emplace_back(position(id), id);
  std::sort(found.begin(), found.end());
  std::vector<EventId> out;
  for (const auto & [pos, id] : found) out.push_back(id);
  return out;
}

Scalar EventGraph::current_value(const EventId & individual, std::string_view property) const
{
  if (!is_individual(individual)) throw UnknownIndividual("event " + individual.hex() + " is not an individual");
  auto h = head(individual, property);
  return h ? at(*h).value : Scalar{};
}

std::vector<EventId> EventGraph::heads(const EventId & base, std::string_view property) const
{
  auto it = heads_.find({base, std::string(property)});
  return it == heads_.end() ? std::vector<EventId>{} : it->second;
}

std::optional<EventId> EventGraph::head(const EventId & base, std::string_view property) const
{
  auto it = heads_.find({base, std::string(property)});
  if (it == heads_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

std::vector<const Event *> EventGraph::history(const EventId & individual, std::string_view property) const
{
  if (!is_individual(individual)) throw UnknownIndividual("event " + individual.hex() + " is not an individual");
  std::vector<const Event *> out;
  auto it = history_.find({individual, std::string(property)});
  if (it != history_.end()) {
    for (std::size_t pos : it->second) out.push_back(&events_[pos]);
  }
  return out;
}

std::vector<std::string> EventGraph::properties(const EventId & base) const
{
  std::vector<std::string> out;
  auto it = by_base_.find(base);
  if (it == by_base_.end()) return out;
  for (std::size_t pos : it->second) {
    const auto & type = events_[pos].type;
    if (std::find(out.begin(), out.end(), type) == out.end()) out.push_back(type);
  }
  return out;
}

std::vector<const Event *> EventGraph::events_on(const EventId & base) const
{
  std::vector<const Event *> out;
  auto it = by_base_.find(base);
  if (it != by_base_.end()) {
    for (std::size_t pos : it->second) out.push_back(&events_[pos]);
  }
  return out;
}

std::vector<EventId> EventGraph::summary_causes(const EventId & id) const
{
  auto it = summary_.find(id);
  return it == summary_.end() ? std::vector<EventId>{} : it->second;
}

std::vector<EventId> EventGraph::effective_causes(const EventId & id) const
{
  std::vector<EventId> out;
  std::unordered_set<EventId> seen;
  auto add = [&](const EventId & c) {
    if (seen.insert(c).second) out.push_back(c);
  };
  // Archived causes are looked through, depth-first in cause order.
  std::unordered_set<EventId> expanded;
  std::function<void(const EventId &)> visit = [&](const EventId & c) {
    if (!archived(c)) {
      add(c);
      return;
    }
    if (!expanded.insert(c).second) return;
    for (const auto & cc : at(c).cause) visit(cc);
    for (const auto & cc : summary_causes(c)) visit(cc);
  };
  for (const auto & c : summary_causes(id)) visit(c);
  for (const auto & c : at(id).cause) visit(c);
  return out;
}

CausalTrace EventGraph::causal_trace(const EventId & root, int max_depth) const
{
  at(root);
  CausalTrace trace;
  trace.root = root;
  trace.nodes.push_back(root);
  std::unordered_map<EventId, int> depth{{root, 0}};
  std::deque<EventId> queue{root};
  while (!queue.empty()) {
    EventId current = queue.front();
    queue.pop_front();
    int d = depth[current];
    if (d >= max_depth) continue;
    for (const auto & c : effective_causes(current)) {
      trace.edges.emplace_back(current, c);
      if (depth.emplace(c, d + 1).second) {
        trace.nodes.push_back(c);
        trace.depth = std::max(trace.depth, d + 1);
        queue.push_back(c);
      }
    }
  }
  return trace;
}

EventGraph EventGraph::branch(const EventId & at_id) const
{
  std::size_t last = position(at_id);
  EventGraph out;
  out.multiple_ = multiple_;
  for (std::size_t i = 0; i <= last; ++i) {
    out.append_event(events_[i]);
    if (archived(events_[i].id)) out.archived_.insert(events_[i].id);
    if (auto s = summary_.find(events_[i].id); s != summary_.end()) out.summary_.insert(*s);
  }
  return out;
}

EventGraph EventGraph::transitive_reduce(std::span<const EventId> chain) const
{
  if (chain.size() < 2) throw NotAPath("a chain needs at least two events");
  for (const auto & id : chain) at(id);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const auto & causes = at(chain[i]).cause;
    if (std::find(causes.begin(), causes.end(), chain[i - 1]) == causes.end()) {
      throw NotAPath("event " + chain[i].hex() + " is not caused by " + chain[i - 1].hex());
    }
  }
  EventGraph out(*this);
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) out.mark_archived(chain[i]);
  out.add_summary_cause(chain.back(), chain.front());
  return out;
}

void EventGraph::mark_archived(const EventId & id)
{
  at(id);
  archived_.insert(id);
}

void EventGraph::add_summary_cause(const EventId & result, const EventId & intent)
{
  if (position(intent) >= position(result)) throw NotAPath("summary link must point to an earlier event");
  auto & s = summary_[result];
  if (std::find(s.begin(), s.end(), intent) == s.end()) s.push_back(intent);
}

std::size_t EventGraph::subscribe(Listener listener)
{
  std::size_t token = next_listener_++;
  listeners_.emplace(token, std::move(listener));
  return token;
}

void EventGraph::unsubscribe(std::size_t token)
{
  listeners_.erase(token);
}

}  // namespace eo::graph
