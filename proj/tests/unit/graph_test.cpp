#include <doctest.h>

#include <random>

#include "eo/graph/event_graph.hpp"
#include "eo/graph/portable.hpp"

using namespace eo;
using namespace eo::graph;

namespace
{

EventId person(EventGraph & g, const std::string & name)
{
  return g.append({.type = std::string(kIndividualType), .value = name});
}

EventId set(EventGraph & g, EventId who, const std::string & prop, Scalar v, std::vector<EventId> cause = {})
{
  return g.append({.base = who, .type = prop, .value = std::move(v), .cause = std::move(cause)});
}

// Random trace over a few individuals; causes always point backwards.
EventGraph random_graph(std::mt19937 & rng, int n_events)
{
  EventGraph g;
  std::vector<EventId> people{person(g, "a"), person(g, "b"), person(g, "c")};
  std::vector<EventId> all(people);
  const std::vector<std::string> props{"x", "y", "z", "link"};
  for (int i = 0; i < n_events; ++i) {
    EventId who = people[rng() % people.size()];
    std::string prop = props[rng() % props.size()];
    Scalar v = prop == "link" ? Scalar{IndividualRef{people[rng() % people.size()]}} : Scalar{double(rng() % 5)};
    std::vector<EventId> cause;
    for (int k = 0, m = int(rng() % 3); k < m; ++k) cause.push_back(all[rng() % all.size()]);
    all.push_back(set(g, who, prop, v, cause));
  }
  return g;
}

}  // namespace

TEST_CASE("append: new head, supersede, history kept")
{
  EventGraph g;
  auto john = person(g, "John Doe");
  auto first = set(g, john, "warmth", 50.0);
  CHECK(g.head(john, "warmth") == first);
  auto second = set(g, john, "warmth", 20.0);
  CHECK(g.head(john, "warmth") == second);
  CHECK(g.current_value(john, "warmth") == Scalar{20.0});
  auto hist = g.history(john, "warmth");
  REQUIRE(hist.size() == 2);
  CHECK(hist[0]->id == first);
  CHECK(hist[1]->id == second);
  CHECK(g.at(first).value == Scalar{50.0});
}

TEST_CASE("append: unknown cause and base are rejected")
{
  EventGraph g;
  auto john = person(g, "John Doe");
  CHECK_THROWS_AS(set(g, john, "warmth", 1.0, {EventId::generate()}), UnknownCause);
  CHECK_THROWS_AS(g.append({.base = EventId::generate(), .type = "warmth", .value = 1.0}), UnknownBase);
  CHECK_THROWS_AS(person(g, "John Doe"), DuplicateIndividual);
  CHECK(g.size() == 1);
}

TEST_CASE("append: listeners see each event once")
{
  EventGraph g;
  int seen = 0;
  auto token = g.subscribe([&](const Event &) { ++seen; });
  auto john = person(g, "John Doe");
  set(g, john, "warmth", 1.0);
  g.unsubscribe(token);
  set(g, john, "warmth", 2.0);
  CHECK(seen == 2);
}

TEST_CASE("current_value and history of unset properties")
{
  EventGraph g;
  auto john = person(g, "John Doe");
  CHECK(is_null(g.current_value(john, "never")));
  CHECK(g.history(john, "never").empty());
  CHECK_THROWS_AS(g.current_value(EventId::generate(), "x"), UnknownIndividual);
  CHECK_THROWS_AS(g.history(EventId::generate(), "x"), UnknownIndividual);
}

TEST_CASE("multiple-valued properties keep a head set; retraction removes one value")
{
  EventGraph g;
  g.declare_multiple("Exclude");
  auto view = person(g, "View");
  auto a = set(g, view, "Exclude", std::string("energyMin"));
  auto b = set(g, view, "Exclude", std::string("warmthMin"));
  CHECK(g.heads(view, "Exclude") == std::vector<EventId>{a, b});
  g.append({.base = a, .type = std::string(kRetractType)});
  CHECK(g.heads(view, "Exclude") == std::vector<EventId>{b});
  CHECK(g.history(view, "Exclude").size() == 2);
}

TEST_CASE("causal_trace: depth limits and genesis roots")
{
  EventGraph g;
  auto john = person(g, "John Doe");
  auto a = set(g, john, "a", 1.0);
  auto b = set(g, john, "b", 1.0, {a});
  auto c = set(g, john, "c", 1.0, {b, a});

  auto none = g.causal_trace(c, 0);
  CHECK(none.edges.empty());
  CHECK(none.nodes == std::vector<EventId>{c});

  auto full = g.causal_trace(c, 10);
  CHECK(full.depth == 1);  // a is one hop from c directly
  CHECK(full.edges.size() == 3);
  CHECK(full.edges[0] == std::pair{c, b});
  CHECK(full.edges[1] == std::pair{c, a});

  auto d = set(g, john, "d", 1.0, {c});
  CHECK(g.causal_trace(d, 10).depth == 2);
  CHECK(g.causal_trace(d, 1).nodes.size() == 2);

  CHECK(g.causal_trace(john, 5).edges.empty());
  CHECK_THROWS_AS(g.causal_trace(EventId::generate(), 1), UnknownEvent);
}

TEST_CASE("branch: prefix copy, original untouched")
{
  EventGraph g;
  auto john = person(g, "John Doe");
  auto a = set(g, john, "warmth", 50.0);
  set(g, john, "warmth", 20.0);
  auto early = g.branch(a);
  CHECK(early.size() == 2);
  CHECK(early.current_value(john, "warmth") == Scalar{50.0});
  CHECK(g.current_value(john, "warmth") == Scalar{20.0});

  auto same = g.branch(g.events().back().id);
  CHECK(same.size() == g.size());
  CHECK(same.current_value(john, "warmth") == Scalar{20.0});
  CHECK_THROWS_AS(g.branch(EventId::generate()), UnknownEvent);
}

TEST_CASE("transitive_reduce: two-event chain and path validation")
{
  EventGraph g;
  auto john = person(g, "John Doe");
  auto a = set(g, john, "a", 1.0);
  auto b = set(g, john, "b", 1.0, {a});
  auto c = set(g, john, "c", 1.0);
  std::vector<EventId> pair{a, b};
  auto reduced = g.transitive_reduce(pair);
  CHECK(reduced.size() == g.size());
  CHECK_FALSE(reduced.archived(a));
  CHECK_FALSE(reduced.archived(b));
  std::vector<EventId> broken{a, c};
  CHECK_THROWS_AS(g.transitive_reduce(broken), NotAPath);
}

TEST_CASE("transitive_reduce: interior archived, trace follows the summary link")
{
  EventGraph g;
  auto john = person(g, "John Doe");
  auto side = set(g, john, "side", 1.0);
  auto intent = set(g, john, "intent", 1.0);
  auto mid = set(g, john, "mid", 1.0, {intent, side});
  auto result = set(g, john, "result", 1.0, {mid});
  std::vector<EventId> chain{intent, mid, result};
  auto reduced = g.transitive_reduce(chain);
  CHECK(reduced.archived(mid));
  CHECK(reduced.current_value(john, "mid") == g.current_value(john, "mid"));

  auto before = g.causal_trace(result, 10);
  auto after = reduced.causal_trace(result, 10);
  std::set<EventId> live_before;
  for (auto & n : before.nodes) {
    if (!reduced.archived(n)) live_before.insert(n);
  }
  std::set<EventId> live_after(after.nodes.begin(), after.nodes.end());
  CHECK(live_before == live_after);
  CHECK(std::find(after.edges.begin(), after.edges.end(), std::pair{result, intent}) != after.edges.end());
}

TEST_CASE("property: state never depends on timestamps")
{
  std::mt19937 rng(7);
  for (int round = 0; round < 20; ++round) {
    auto g = random_graph(rng, 60);
    EventGraph shuffled;
    for (auto e : g.events()) {
      e.timestamp = Timestamp(std::chrono::seconds(rng() % 100000));
      shuffled.append_event(e);
    }
    for (auto who : g.individuals()) {
      for (const auto & p : {"x", "y", "z", "link"}) {
        CHECK(g.current_value(who, p) == shuffled.current_value(who, p));
      }
    }
  }
}

TEST_CASE("property: history is non-empty whenever a value is set; no cause cycles")
{
  std::mt19937 rng(11);
  for (int round = 0; round < 20; ++round) {
    auto g = random_graph(rng, 80);
    for (auto who : g.individuals()) {
      for (const auto & p : {"x", "y", "z", "link"}) {
        if (!is_null(g.current_value(who, p))) CHECK(g.history(who, p).size() >= 1);
      }
    }
    for (const auto & e : g.events()) {
      for (const auto & c : e.cause) CHECK(g.position(c) < g.position(e.id));
    }
  }
}

TEST_CASE("property: export/import preserves state, history lengths and reachability")
{
  std::mt19937 rng(3);
  for (int round = 0; round < 10; ++round) {
    auto g = random_graph(rng, 50);
    auto imported = import_subgraph(export_all(g));
    const auto & h = imported.graph;
    REQUIRE(h.size() == g.size());
    std::set<EventId> new_ids;
    for (auto & [old_id, new_id] : imported.remap) new_ids.insert(new_id);
    CHECK(new_ids.size() == imported.remap.size());
    for (auto who : g.individuals()) {
      auto mapped = imported.remap.at(who);
      CHECK(h.individual_name(mapped) == g.individual_name(who));
      for (const auto & p : {"x", "y", "z"}) {
        CHECK(h.current_value(mapped, p) == g.current_value(who, p));
        CHECK(h.history(mapped, p).size() == g.history(who, p).size());
      }
      auto link = g.current_value(who, "link");
      if (auto * r = std::get_if<IndividualRef>(&link)) {
        CHECK(h.current_value(mapped, "link") == Scalar{IndividualRef{imported.remap.at(r->id)}});
      }
    }
    for (const auto & e : g.events()) {
      auto before = g.causal_trace(e.id, 1000).nodes;
      auto after = h.causal_trace(imported.remap.at(e.id), 1000).nodes;
      std::set<EventId> mapped;
      for (auto & n : before) mapped.insert(imported.remap.at(n));
      CHECK(mapped == std::set<EventId>(after.begin(), after.end()));
    }
  }
}

TEST_CASE("export: empty roots, closure completeness, corrupt documents")
{
  EventGraph g;
  auto john = person(g, "John Doe");
  auto a = set(g, john, "a", 1.0);
  auto b = set(g, john, "b", 1.0, {a});
  CHECK(export_subgraph(g, {}, true)["events"].empty());

  std::vector<EventId> roots{b};
  auto closed = export_subgraph(g, roots, true);
  CHECK(closed["events"].size() == 3);
  CHECK_NOTHROW(import_subgraph(closed));

  auto open = export_subgraph(g, roots, false);
  CHECK(open["events"].size() == 1);
  CHECK_THROWS_AS(import_subgraph(open), DanglingCause);

  CHECK_THROWS_AS(import_subgraph(nlohmann::json{{"events", 3}}), CorruptDocument);
  auto bad = closed;
  bad["events"][1].erase("actor");
  CHECK_THROWS_AS(import_subgraph(bad), CorruptDocument);
  CHECK_THROWS_AS(export_subgraph(g, std::vector<EventId>{EventId::generate()}, true), UnknownEvent);
}

TEST_CASE("event ids: 128-bit hex round trip")
{
  auto id = EventId::generate();
  CHECK(id.hex().size() == 32);
  CHECK(EventId::parse(id.hex()) == id);
  CHECK_FALSE(EventId::parse("xyz"));
  CHECK(id.short_hex() == id.hex().substr(0, 6));
}
