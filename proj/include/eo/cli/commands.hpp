#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eo/engine/engine.hpp"

namespace eo::cli
{

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

/// Entry point of the `eo` tool; args excludes the program name.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

/// The Winter Feast program, used when a command is given no BSL files.
std::string_view default_world();

/// Indented causal tree below `root`, following effective causes up to `depth` hops.
std::string render_trace(const engine::Engine & engine, const EventId & root, int depth);

}  // namespace eo::cli
