#include "eo/cli/commands.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "eo/bsl/parser.hpp"
#include "eo/cli/scenario.hpp"
#include "eo/graph/portable.hpp"
#include "eo/models/analysis.hpp"
#include "eo/service/service.hpp"

namespace eo::cli
{

namespace
{

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads the given files, or the default world when there are none.
engine::Engine world(const std::vector<std::string> & files)
{
  engine::Engine e;
  if (files.empty()) {
    e.load_source(default_world());
    return e;
  }
  for (const auto & f : files) e.load_source(read_file(f));
  return e;
}

std::string describe(const engine::Engine & e, const graph::Event & ev)
{
  std::ostringstream os;
  if (!ev.base) {
    os << ev.type << " " << canonical(ev.value);
  } else {
    const auto & g = e.graph();
    os << (g.is_individual(*ev.base) ? g.individual_name(*ev.base) : ev.base->short_hex()) << "." << ev.type
       << " := " << e.display(ev.value);
  }
  os << "  [" << ev.actor << " " << ev.id.short_hex() << "]";
  return os.str();
}

void trace_node(const engine::Engine & e, const EventId & id, int depth, int indent, std::set<EventId> & seen,
                std::ostream & os)
{
  os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << (indent ? "<- " : "") << describe(e, e.graph().at(id));
  if (!seen.insert(id).second) {
    os << "  (repeated)\n";
    return;
  }
  os << "\n";
  if (depth == 0) return;
  for (const auto & c : e.graph().effective_causes(id)) trace_node(e, c, depth - 1, indent + 1, seen, os);
}

std::pair<std::string, std::string> split_selector(const std::string & selector)
{
  auto dot = selector.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == selector.size()) {
    throw UsageError("expected <individual>.<property>, got '" + selector + "'");
  }
  return {selector.substr(0, dot), selector.substr(dot + 1)};
}

int cmd_load(const std::vector<std::string> & files, std::ostream & out)
{
  auto e = world(files);
  std::size_t models = e.registry().models().size();
  std::size_t individuals = e.graph().individuals().size();
  out << "loaded " << e.registry().concepts().size() << " concepts, " << models << " models, " << individuals
      << " individuals, " << e.graph().size() << " events\n";
  out << models::analyze(e.registry()).to_text();
  return kOk;
}

int cmd_run(const std::string & script, const std::vector<std::string> & files, const std::string & graph_export,
            std::ostream & out, std::ostream & err)
{
  auto commands = parse_script(read_file(script));
  auto e = world(files);
  auto result = run_script(e, commands);
  out << render_transcript(e, result);
  if (!graph_export.empty()) {
    std::ofstream f(graph_export);
    if (!f) throw UsageError("cannot write " + graph_export);
    f << graph::export_all(e.graph()).dump(2) << "\n";
  }
  if (!result.ok) {
    err << "expectation failed: " << result.failure << "\n";
    return kFailure;
  }
  return kOk;
}

int cmd_autoplay(const std::string & individual, std::size_t max_steps, const std::vector<std::string> & files,
                 const std::string & setup, std::ostream & out, std::ostream & err)
{
  auto e = world(files);
  if (!setup.empty()) {
    auto r = run_script(e, parse_script(read_file(setup)));
    if (!r.ok) {
      err << "setup failed: " << r.failure << "\n";
      return kFailure;
    }
  }
  auto r = autoplay(e, individual, max_steps);
  for (std::size_t i = 0; i < r.chain.size(); ++i) {
    out << i + 1 << ". " << r.chain[i] << "\n";
    for (const auto & id : r.cascades[i].derived) out << "   " << describe(e, e.graph().at(id)) << "\n";
  }
  out << (r.goal_reached ? "goal reached: isSafe = 1\n" : "stopped without reaching isSafe = 1\n");
  return kOk;
}

int cmd_trace(const std::string & selector, int depth, const std::string & graph_file,
              const std::vector<std::string> & files, const std::string & script, std::ostream & out,
              std::ostream & err)
{
  auto [individual, property] = split_selector(selector);
  engine::Engine e;
  if (!graph_file.empty()) {
    auto doc = nlohmann::json::parse(read_file(graph_file));
    auto registry = world(files).registry();
    e = engine::Engine::restore(registry, graph::import_subgraph(doc).graph);
  } else {
    e = world(files);
    if (!script.empty()) {
      auto r = run_script(e, parse_script(read_file(script)));
      if (!r.ok) {
        err << "script failed: " << r.failure << "\n";
        return kFailure;
      }
    }
  }
  auto head = e.graph().head(e.individual(individual), property);
  if (!head) {
    err << selector << " has no value\n";
    return kFailure;
  }
  out << render_trace(e, *head, depth);
  return kOk;
}

int cmd_analyze(const std::vector<std::string> & files, bool as_json, std::ostream & out)
{
  models::ModelRegistry registry = models::builtin_registry();
  models::AnalysisReport report;
  for (const auto & f : files) {
    auto r = models::register_document(registry, bsl::parse_document(read_file(f)));
    report.merge(r.report);
    if (!r.registry) break;
    registry = std::move(*r.registry);
  }
  if (as_json) {
    out << report.to_json().dump(2) << "\n";
  } else {
    out << report.to_text() << report.errors.size() << " errors, " << report.warnings.size() << " warnings\n";
  }
  return report.ok() ? kOk : kFailure;
}

int cmd_bench(std::size_t agents, std::size_t touches, bool touch_all, const std::vector<std::string> & files,
              std::ostream & out)
{
  std::string source = files.empty() ? std::string(default_world()) : read_file(files.front());
  auto r = run_bench(source, agents, touches, touch_all);
  nlohmann::json j = {{"agents", r.agents},
                      {"touches", r.touches},
                      {"touch_all", touch_all},
                      {"evaluations", r.evaluations},
                      {"derived_events", r.derived_events},
                      {"wall_ms", r.wall_ms}};
  out << j.dump() << "\n";
  return kOk;
}

int cmd_serve(const std::string & addr, const std::vector<std::string> & files, std::ostream & out)
{
  auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw UsageError("--addr expects host:port");
  std::string host = addr.substr(0, colon);
  int port = std::stoi(addr.substr(colon + 1));

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  service::Service svc(world(files));
  service::HttpServer http(svc);
  int bound = http.bind(host, port);
  if (bound < 0) throw UsageError("cannot bind " + addr);
  http.start();
  out << "serving on " << host << ":" << bound << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  http.stop();
  return kOk;
}

}  // namespace

std::string render_trace(const engine::Engine & engine, const EventId & root, int depth)
{
  std::ostringstream os;
  std::set<EventId> seen;
  trace_node(engine, root, depth, 0, seen, os);
  return os.str();
}

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Executable ontology engine", "eo"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string script, graph_export, individual, setup, selector, graph_file, addr = "127.0.0.1:8080";
  std::size_t max_steps = 20, agents = 1, touches = 100;
  int depth = 8;
  bool as_json = false, touch_all = false;

  auto * load = app.add_subcommand("load", "Load BSL files and summarize the result");
  load->add_option("files", files, "BSL files")->required()->check(CLI::ExistingFile);

  auto * run_cmd = app.add_subcommand("run", "Run a scenario script");
  run_cmd->add_option("script", script, "Scenario script")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--bsl", files, "BSL files (default: Winter Feast)")->check(CLI::ExistingFile);
  run_cmd->add_option("--graph-export", graph_export, "Write the final graph as JSON");

  auto * auto_cmd = app.add_subcommand("autoplay", "Trigger the first available action until safe");
  auto_cmd->add_option("individual", individual, "Individual to drive")->required();
  auto_cmd->add_option("--max-steps", max_steps, "Action limit");
  auto_cmd->add_option("--bsl", files, "BSL files (default: Winter Feast)")->check(CLI::ExistingFile);
  auto_cmd->add_option("--setup", setup, "Script run before autoplay")->check(CLI::ExistingFile);

  auto * trace = app.add_subcommand("trace", "Show why a property has its current value");
  trace->add_option("selector", selector, "<individual>.<property>")->required();
  trace->add_option("--depth", depth, "Maximum hops");
  trace->add_option("--graph", graph_file, "Graph exported by run --graph-export")->check(CLI::ExistingFile);
  trace->add_option("--bsl", files, "BSL files (default: Winter Feast)")->check(CLI::ExistingFile);
  trace->add_option("--script", script, "Script to run before tracing")->check(CLI::ExistingFile);

  auto * analyze = app.add_subcommand("analyze", "Static analysis; exits 1 on errors");
  analyze->add_option("files", files, "BSL files")->required()->check(CLI::ExistingFile);
  analyze->add_flag("--json", as_json, "JSON report");

  auto * bench = app.add_subcommand("bench", "Count evaluations with idle agents present");
  bench->add_option("--agents", agents, "Survivor clones")->required();
  bench->add_option("--touches", touches, "Touches per touched agent")->required();
  bench->add_flag("--touch-all", touch_all, "Touch every agent instead of one");
  bench->add_option("--bsl", files, "BSL file (default: Winter Feast)")->check(CLI::ExistingFile);

  auto * serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--addr", addr, "host:port");
  serve->add_option("files", files, "BSL files (default: Winter Feast)")->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError & e) {
    err << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*load) return cmd_load(files, out);
    if (*run_cmd) return cmd_run(script, files, graph_export, out, err);
    if (*auto_cmd) return cmd_autoplay(individual, max_steps, files, setup, out, err);
    if (*trace) return cmd_trace(selector, depth, graph_file, files, script, out, err);
    if (*analyze) return cmd_analyze(files, as_json, out);
    if (*bench) return cmd_bench(agents, touches, touch_all, files, out);
    if (*serve) return cmd_serve(addr, files, out);
  } catch (const UsageError & e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const bsl::BslError & e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const ScriptError & e) {
    err << "script error: " << e.what() << "\n";
    return kUsage;
  } catch (const engine::RegistrationFailed & e) {
    err << e.report().to_text();
    return kFailure;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace eo::cli
