// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "eo/bsl/parser.hpp"
#include "eo/bsl/printer.hpp"
#include "eo/cli/commands.hpp"
#include "eo/cli/scenario.hpp"
#include "eo/graph/portable.hpp"
#include "eo/models/registry.hpp"
#include "../unit/world.hpp"

using namespace eo;
using eo::testing::fixture_path;
using eo::testing::read_fixture;

namespace
{

const std::string kJohn = "John Doe";
const std::string kClearing = "Forest Clearing";

struct Check
{
  std::string name;
  std::function<std::string()> body;  // empty string on success, else the reason
};

std::string expect(bool ok, const std::string & why) { return ok ? "" : why; }

std::string golden_trace()
{
  std::ostringstream out, err;
  auto start = std::chrono::steady_clock::now();
  int code = cli::run({"run", fixture_path("winter_feast_table2.script")}, out, err);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (code != 0) return "exit " + std::to_string(code) + ": " + err.str();
  if (seconds >= 1.0) return "took " + std::to_string(seconds) + " s";

  std::vector<std::string> steps;
  std::istringstream in(out.str());
  for (std::string l; std::getline(in, l);) {
    if (l.rfind("step ", 0) == 0) steps.push_back(l);
    else if (!steps.empty()) steps.back() += "\n" + l;
  }
  if (steps.size() != 7) return "expected 7 steps, saw " + std::to_string(steps.size());
  auto step3 = steps[2].substr(steps[2].find("available: "));
  if (step3.substr(0, step3.find(']')).find("action_hunt") != std::string::npos) return "hunt available at step 3";
  if (steps[4].find("John Doe.warmth := 70") == std::string::npos) return "no warmth := 70 at step 5";
  if (steps[6].find("John Doe.isSafe := 1") == std::string::npos) return "no isSafe := 1 at step 7";
  return "";
}

std::string initial_availability()
{
  auto e = testing::winter_engine();
  e.set_property(kJohn, "energy", 20.0);
  e.set_property(kJohn, "warmth", 20.0);
  auto names = e.available_action_names(kJohn);
  return expect(names == std::vector<std::string>{"action_gather"}, "available set differs");
}

std::string reaction_cascade()
{
  auto e = testing::winter_engine();
  e.set_property(kJohn, "energy", 20.0);
  e.trigger_action(kJohn, "action_hunt", 1.0);
  e.set_property(kJohn, "warmth", 20.0);
  e.trigger_action(kJohn, "action_gather", 1.0);

  auto clearing = e.individual(kClearing);
  graph::EventDraft draft;
  draft.base = clearing;
  draft.type = "hasFire";
  draft.value = 1.0;
  draft.actor = "player";
  draft.cause = {*e.graph().head(clearing, "hasFire")};
  draft.model = "Model Location";
  auto r = e.ingest(e.graph().append(std::move(draft)));

  std::multiset<std::tuple<std::string, std::string, std::string>> want{{kJohn, "_reaction_warm_up", "1"},
                                                                        {kJohn, "hasWood", "0"},
                                                                        {kJohn, "warmth", "70"},
                                                                        {kJohn, "warmthLow", "0"},
                                                                        {kJohn, "_reaction_warm_up", "0"}};
  if (testing::derived_set(e, r) != want) return "derived set differs";
  if (r.status != engine::CascadeStatus::Quiescent) return "not quiescent";
  return expect(r.evaluations <= 50, std::to_string(r.evaluations) + " evaluations");
}

std::string idle_cost()
{
  auto bench = [](const std::string & agents) {
    std::ostringstream out, err;
    cli::run({"bench", "--agents", agents, "--touches", "100"}, out, err);
    return nlohmann::json::parse(out.str())["evaluations"].get<std::size_t>();
  };
  auto one = bench("1");
  auto many = bench("1000");
  if (one == 0) return "no evaluations at all";
  return expect(one == many, std::to_string(one) + " vs " + std::to_string(many));
}

std::string static_negatives()
{
  auto registered = [](const models::ModelRegistry & base, const std::string & text) {
    return models::register_document(base, bsl::parse_document(text));
  };
  std::string world = read_fixture("winter_feast.bsl");

  auto clean = registered(models::builtin_registry(), world);
  if (!clean.report.errors.empty() || !clean.report.warnings.empty()) return "Winter Feast is not clean";

  std::string no_deer = world;
  const std::string line = ": Attribute: hasDeer\n";
  no_deer.erase(no_deer.find(line), line.size());
  auto broken = registered(models::builtin_registry(), no_deer);
  std::size_t type_errors = 0;
  bool names_hunt = false;
  for (const auto & d : broken.report.errors) {
    if (d.code != models::codes::kType) continue;
    ++type_errors;
    names_hunt = (d.location + d.message).find("action_hunt") != std::string::npos;
  }
  if (type_errors != 1 || !names_hunt) return std::to_string(type_errors) + " EO-TYPE errors without hasDeer";

  auto gold = registered(*clean.registry, read_fixture("unreachable_gold.bsl"));
  std::size_t unreachable = 0;
  for (const auto & d : gold.report.warnings) unreachable += d.code == models::codes::kUnreachable;
  return expect(gold.report.ok() && unreachable == 1, std::to_string(unreachable) + " EO-UNREACHABLE warnings");
}

std::string replay_determinism()
{
  auto commands = cli::parse_script(read_fixture("winter_feast_table2.script"));
  auto first = testing::winter_engine();
  if (!cli::run_script(first, commands).ok) return "golden script failed";

  auto doc = graph::export_all(first.graph());
  auto imported = graph::import_subgraph(nlohmann::json::parse(doc.dump()));
  auto restored = engine::Engine::restore(first.registry(), std::move(imported.graph));
  if (testing::snapshot(restored) != testing::snapshot(first)) return "imported current values differ";

  auto second = testing::winter_engine();
  cli::run_script(second, commands);
  return expect(testing::value_sequence(first) == testing::value_sequence(second), "event sequences differ");
}

std::string monotone_extension()
{
  auto e = testing::winter_engine();
  auto before = testing::snapshot(e);
  auto r = e.load_source(read_fixture("quest.bsl"));
  if (!r.report.ok()) return "quest rejected";
  auto after = testing::snapshot(e);
  for (const auto & [key, value] : before) {
    if (after.at(key) != value) return key.first + "." + key.second + " changed";
  }
  const std::string quest = "Survive the Winter";
  e.set_property(quest, "hours_passed", 24.0);
  if (e.current_value(kJohn, "isSafe") != Scalar{1.0}) return "survivor not safe";
  return expect(e.current_value(quest, "day1_complete") == Scalar{1.0}, "day1_complete not derived");
}

std::string parser_round_trip()
{
  auto doc = bsl::parse_document(read_fixture("winter_feast.bsl"));
  auto printed = bsl::pretty_print(doc);
  auto again = bsl::parse_document(printed);
  if (!(again == doc)) return "reparsed document differs";
  return expect(bsl::pretty_print(again) == printed, "printing is not idempotent");
}

std::string priority_by_conditions()
{
  const std::vector<std::string> actions{"action_gather", "action_light_fire", "action_hunt", "action_cook",
                                         "action_eat"};
  const std::vector<double> levels{0, 10, 20, 29, 30, 31, 50, 70, 100};
  std::mt19937 rng(20261018);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  auto base = testing::winter_engine();
  std::size_t cold = 0, hunt_offered = 0;
  for (int script = 0; script < 1000; ++script) {
    auto e = base;
    std::size_t steps = 5 + pick(20);
    for (std::size_t s = 0; s < steps; ++s) {
      switch (pick(4)) {
        case 0: e.set_property(kJohn, pick(2) ? "warmth" : "energy", levels[pick(levels.size())]); break;
        case 1: e.set_property(kJohn, std::vector<std::string>{"hasWood", "hasRawMeat", "hasCookedMeat"}[pick(3)],
                               double(pick(2)));
          break;
        case 2: e.set_property(kClearing, pick(2) ? "hasFire" : "hasDeer", double(pick(2))); break;
        default:
          try {
            e.trigger_action(kJohn, actions[pick(actions.size())], 1.0);
          } catch (const engine::EngineError &) {
          }
      }
      auto available = e.available_action_names(kJohn);
      bool hunt = std::find(available.begin(), available.end(), "action_hunt") != available.end();
      if (hunt && e.current_value(kJohn, "warmthLow") == Scalar{1.0})
        return "script " + std::to_string(script) + " step " + std::to_string(s);
      cold += e.current_value(kJohn, "warmthLow") == Scalar{1.0};
      hunt_offered += hunt;
    }
  }
  return expect(cold > 0 && hunt_offered > 0, "scripts never reached a cold or a hunting state");
}

}  // namespace

int main()
{
  const std::vector<Check> checks{
    {"golden trace", golden_trace},
    {"initial availability", initial_availability},
    {"reaction cascade", reaction_cascade},
    {"locality and idle cost", idle_cost},
    {"static analysis negatives", static_negatives},
    {"replay determinism", replay_determinism},
    {"monotone extension", monotone_extension},
    {"parser round-trip", parser_round_trip},
    {"priority as conditions", priority_by_conditions},
  };
  int failures = 0;
  for (const auto & c : checks) {
    std::string why;
    try {
      why = c.body();
    } catch (const std::exception & e) {
      why = std::string("exception: ") + e.what();
    }
    if (why.empty()) {
      std::cout << "PASS " << c.name << "\n";
    } else {
      std::cout << "FAIL " << c.name << ": " << why << "\n";
      ++failures;
    }
  }
  return failures;
}
