#include "eo/cli/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <regex>
#include <sstream>

namespace eo::cli
{

namespace
{

std::string trim(std::string_view s)
{
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool values_equal(const engine::Engine & engine, const Scalar & actual, const Scalar & expected)
{
  auto a = to_number(actual);
  auto b = to_number(expected);
  if (a && b) return *a == *b;
  return engine.display(actual) == canonical(expected);
}

std::string join(const std::vector<std::string> & items)
{
  std::string out;
  for (const auto & s : items) out += (out.empty() ? "" : ", ") + s;
  return "[" + out + "]";
}

}  // namespace

Scalar parse_value(std::string_view text)
{
  std::string t = trim(text);
  if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front()) {
    return t.substr(1, t.size() - 2);
  }
  if (auto n = parse_number(t)) return *n;
  return t;
}

std::vector<ScriptCommand> parse_script(std::string_view text)
{
  static const std::regex target_value(R"(^(.+?)\.([A-Za-z_]\w*)\s+(.+)$)");
  static const std::regex target_only(R"(^(.+?)\.([A-Za-z_]\w*)$)");
  static const std::regex expect(R"(^(.+?)\.([A-Za-z_]\w*)\s*==\s*(.+)$)");
  static const std::regex available(R"(^(.+?)\s*\[(.*)\]$)");

  std::vector<ScriptCommand> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string l = trim(raw);
    if (l.empty() || l[0] == '#') continue;
    auto space = l.find(' ');
    std::string verb = l.substr(0, space);
    std::string rest = space == std::string::npos ? "" : trim(l.substr(space + 1));
    ScriptCommand c;
    c.line = line;
    c.text = l;
    std::smatch m;
    if (verb == "set" && std::regex_match(rest, m, target_value)) {
      c.kind = CommandKind::Set;
      c.individual = m[1];
      c.property = m[2];
      c.value = parse_value(m[3].str());
    } else if (verb == "click" && std::regex_match(rest, m, target_only)) {
      c.kind = CommandKind::Click;
      c.individual = m[1];
      c.property = m[2];
      c.value = 1.0;
    } else if (verb == "expect" && std::regex_match(rest, m, expect)) {
      c.kind = CommandKind::Expect;
      c.individual = m[1];
      c.property = m[2];
      c.value = parse_value(m[3].str());
    } else if (verb == "expect-available" && std::regex_match(rest, m, available)) {
      c.kind = CommandKind::ExpectAvailable;
      c.individual = trim(m[1].str());
      std::stringstream items(m[2].str());
      std::string item;
      while (std::getline(items, item, ',')) {
        if (auto t = trim(item); !t.empty()) c.actions.push_back(t);
      }
    } else {
      throw ScriptError(line, "cannot parse '" + l + "'");
    }
    out.push_back(std::move(c));
  }
  return out;
}

RunResult run_script(engine::Engine & engine, const std::vector<ScriptCommand> & commands)
{
  RunResult run;
  for (const auto & c : commands) {
    StepRecord step;
    step.command = &c;
    try {
      switch (c.kind) {
        case CommandKind::Set: step.cascade = engine.set_property(c.individual, c.property, c.value); break;
        case CommandKind::Click: step.cascade = engine.trigger_action(c.individual, c.property, c.value); break;
        case CommandKind::Expect: {
          Scalar actual = engine.current_value(c.individual, c.property);
          if (!values_equal(engine, actual, c.value)) {
            step.ok = false;
            step.message = c.individual + "." + c.property + " is " + engine.display(actual) + ", expected " +
                           canonical(c.value);
          }
          break;
        }
        case CommandKind::ExpectAvailable: {
          auto got = engine.available_action_names(c.individual);
          auto want = c.actions;
          std::sort(got.begin(), got.end());
          std::sort(want.begin(), want.end());
          if (got != want) {
            step.ok = false;
            step.message = "available " + join(got) + ", expected " + join(want);
          }
          break;
        }
      }
      step.available = engine.available_action_names(c.individual);
    } catch (const std::exception & ex) {
      step.ok = false;
      step.message = ex.what();
    }
    run.steps.push_back(std::move(step));
    if (!run.steps.back().ok) {
      run.ok = false;
      run.failure = "line " + std::to_string(c.line) + ": " + run.steps.back().message;
      break;
    }
  }
  return run;
}

std::string render_transcript(const engine::Engine & engine, const RunResult & run)
{
  std::ostringstream os;
  int step = 0;
  for (const auto & s : run.steps) {
    const auto & c = *s.command;
    bool mutation = c.kind == CommandKind::Set || c.kind == CommandKind::Click;
    if (mutation) {
      os << "step " << ++step << ": " << c.text << "\n";
      for (const auto & id : s.cascade.derived) {
        const auto & e = engine.graph().at(id);
        os << "  " << engine.graph().individual_name(*e.base) << "." << e.type << " := " << engine.display(e.value)
           << "\n";
      }
      if (s.ok) os << "  available: " << join(s.available) << "  (" << s.cascade.evaluations << " evaluations)\n";
    } else {
      os << "  " << (s.ok ? "ok   " : "FAIL ") << c.text << "\n";
    }
    if (!s.ok) os << "  error: " << s.message << "\n";
  }
  return os.str();
}

AutoplayResult autoplay(engine::Engine & engine, std::string_view individual, std::size_t max_steps)
{
  AutoplayResult out;
  EventId id = engine.individual(individual);
  bool has_goal = engine.model_of(id).find("isSafe") != nullptr;
  auto safe = [&] { return has_goal && values_equal(engine, engine.graph().current_value(id, "isSafe"), 1.0); };
  while (out.chain.size() < max_steps && !safe()) {
    auto available = engine.available_action_names(individual);
    if (available.empty()) break;
    out.cascades.push_back(engine.trigger_action(individual, available.front(), 1.0, "autoplay"));
    out.chain.push_back(available.front());
  }
  out.goal_reached = safe();
  return out;
}

std::string bench_agent_name(std::size_t i) { return "Bench Agent " + std::to_string(i + 1); }

BenchResult run_bench(std::string_view bsl_source, std::size_t agents, std::size_t touches, bool touch_all)
{
  engine::Engine engine;
  engine.load_source(bsl_source);
  std::string clones;
  for (std::size_t i = 0; i < agents; ++i) {
    clones += "Survivor: Individual: " + bench_agent_name(i) +
              "\n: SetModel: Model Survivor\n: location: Forest Clearing\n: energy: 50\n: warmth: 50\n"
              ": hasWood: 0\n: hasRawMeat: 0\n: hasCookedMeat: 0\n\n";
  }
  if (!clones.empty()) engine.load_source(clones);

  BenchResult out{agents, touches, 0, 0, 0};
  std::size_t touched = agents == 0 ? 0 : (touch_all ? agents : 1);
  auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < touches; ++k) {
    for (std::size_t i = 0; i < touched; ++i) {
      auto r = engine.set_property(bench_agent_name(i), "energy", k % 2 == 0 ? 20.0 : 50.0, "bench");
      out.evaluations += r.evaluations;
      out.derived_events += r.derived.size();
    }
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace eo::cli
