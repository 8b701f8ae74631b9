#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eo/engine/engine.hpp"

namespace eo::cli
{

class ScriptError : public std::runtime_error
{
public:
  ScriptError(int line, const std::string & what)
  : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
  {
  }
  int line() const { return line_; }

private:
  int line_;
};

enum class CommandKind { Set, Click, Expect, ExpectAvailable };

struct ScriptCommand
{
  CommandKind kind = CommandKind::Set;
  std::string individual;
  std::string property;
  Scalar value;                      // Set, Click (always 1), Expect
  std::vector<std::string> actions;  // ExpectAvailable
  int line = 0;
  std::string text;
};

/// `set I.p v`, `click I.a`, `expect I.p == v`, `expect-available I [a, ...]`, `# comment`.
std::vector<ScriptCommand> parse_script(std::string_view text);

/// Numbers become Numeric, quoted text is unquoted, anything else stays a string.
Scalar parse_value(std::string_view text);

struct StepRecord
{
  const ScriptCommand * command = nullptr;
  engine::CascadeResult cascade;
  std::vector<std::string> available;  // of the command's individual, after the step
  bool ok = true;
  std::string message;
};

struct RunResult
{
  std::vector<StepRecord> steps;
  bool ok = true;
  std::string failure;
};

/// Executes commands in order and stops at the first failure.
RunResult run_script(engine::Engine & engine, const std::vector<ScriptCommand> & commands);

std::string render_transcript(const engine::Engine & engine, const RunResult & run);

struct AutoplayResult
{
  std::vector<std::string> chain;  // actions triggered, in order
  std::vector<engine::CascadeResult> cascades;
  bool goal_reached = false;
};

/// Triggers the first available action (declaration order) until isSafe = 1, nothing is available,
/// or max_steps actions have run.
AutoplayResult autoplay(engine::Engine & engine, std::string_view individual, std::size_t max_steps);

struct BenchResult
{
  std::size_t agents = 0;
  std::size_t touches = 0;
  std::size_t evaluations = 0;
  std::size_t derived_events = 0;
  double wall_ms = 0;
};

/**
 * Loads `bsl_source`, adds `agents` survivor clones, then touches agents by flipping their
 * energy between 20 and 50. Only cascades from touches are counted. With touch_all every
 * agent is touched `touches` times, otherwise only the first one.
 */
BenchResult run_bench(std::string_view bsl_source, std::size_t agents, std::size_t touches, bool touch_all = false);

/// Names the bench gives its clones.
std::string bench_agent_name(std::size_t i);

}  // namespace eo::cli
