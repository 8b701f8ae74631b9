#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eo/cli/commands.hpp"
#include "eo/cli/scenario.hpp"
#include "world.hpp"

using namespace eo;
using namespace eo::cli;
using eo::testing::fixture_path;

namespace
{

struct Outcome
{
  int code;
  std::string out;
  std::string err;
};

Outcome eo_cmd(std::vector<std::string> args)
{
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string & name, const std::string & content)
{
  auto path = std::filesystem::temp_directory_path() / ("eo_cli_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

std::size_t count_lines(const std::string & text, const std::string & prefix)
{
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) n += l.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST_CASE("script parsing")
{
  auto cmds = parse_script("# header\n\nset John Doe.energy 20\nclick John Doe.action_hunt\n"
                           "expect John Doe.location == Forest Clearing\n"
                           "expect-available John Doe [action_cook, action_eat]\n"
                           "expect-available John Doe []\nset John Doe.location \"Forest Clearing\"\n");
  REQUIRE(cmds.size() == 6);
  CHECK(cmds[0].kind == CommandKind::Set);
  CHECK(cmds[0].individual == "John Doe");
  CHECK(cmds[0].property == "energy");
  CHECK(cmds[0].value == Scalar{20.0});
  CHECK(cmds[0].line == 3);
  CHECK(cmds[1].kind == CommandKind::Click);
  CHECK(cmds[1].value == Scalar{1.0});
  CHECK(cmds[2].value == Scalar{std::string("Forest Clearing")});
  CHECK(cmds[3].actions == std::vector<std::string>{"action_cook", "action_eat"});
  CHECK(cmds[4].actions.empty());
  CHECK(cmds[5].value == Scalar{std::string("Forest Clearing")});

  CHECK(parse_script("").empty());
  CHECK_THROWS_AS(parse_script("jump John Doe.energy 3\n"), ScriptError);
  CHECK_THROWS_AS(parse_script("set energy 3\n"), ScriptError);
  try {
    parse_script("set John Doe.energy 1\nclick John Doe\n");
    FAIL("expected ScriptError");
  } catch (const ScriptError & e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("run: golden scenario transcript")
{
  auto r = eo_cmd({"run", fixture_path("winter_feast_table2.script")});
  CHECK(r.code == kOk);
  CHECK(count_lines(r.out, "step ") == 7);
  CHECK(r.out.find("  available: [action_gather]") != std::string::npos);
  CHECK(r.out.find("John Doe.warmth := 70") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("run: empty script and failing expectation")
{
  auto empty = eo_cmd({"run", fixture_path("empty.script")});
  CHECK(empty.code == kOk);
  CHECK(empty.out.empty());

  auto fail = eo_cmd({"run", fixture_path("hunt_at_step3.script")});
  CHECK(fail.code == kFailure);
  CHECK(fail.err.find("line 5") != std::string::npos);
}

TEST_CASE("usage and parse errors exit 2")
{
  CHECK(eo_cmd({}).code == kUsage);
  CHECK(eo_cmd({"run"}).code == kUsage);
  CHECK(eo_cmd({"run", "/nonexistent.script"}).code == kUsage);
  CHECK(eo_cmd({"bench", "--agents", "x", "--touches", "1"}).code == kUsage);
  CHECK(eo_cmd({"run", temp_file("bad.script", "dance\n")}).code == kUsage);
  CHECK(eo_cmd({"load", temp_file("bad.bsl", "Survivor: Model:\n")}).code == kUsage);
  CHECK(eo_cmd({"trace", "nodot"}).code == kUsage);
  CHECK(eo_cmd({"--help"}).code == kOk);
}

TEST_CASE("analyze exit codes")
{
  auto clean = eo_cmd({"analyze", fixture_path("winter_feast.bsl")});
  CHECK(clean.code == kOk);
  CHECK(clean.out.find("0 errors, 0 warnings") != std::string::npos);

  auto range = eo_cmd({"analyze", fixture_path("winter_feast.bsl"), fixture_path("negative/wrong_range.bsl")});
  CHECK(range.code == kFailure);
  CHECK(range.out.find("EO-RANGE") != std::string::npos);

  std::string text = testing::read_fixture("winter_feast.bsl");
  auto at = text.find(": Attribute: hasDeer\n");
  text.erase(at, std::string(": Attribute: hasDeer\n").size());
  auto deer = eo_cmd({"analyze", "--json", temp_file("no_deer.bsl", text)});
  CHECK(deer.code == kFailure);
  auto json = nlohmann::json::parse(deer.out);
  std::size_t type_errors = 0;
  for (const auto & e : json["errors"]) type_errors += e["code"] == "EO-TYPE";
  CHECK(type_errors == 1);

  auto gold = eo_cmd({"analyze", fixture_path("winter_feast.bsl"), fixture_path("unreachable_gold.bsl")});
  CHECK(gold.code == kOk);
  CHECK(gold.out.find("EO-UNREACHABLE") != std::string::npos);
}

TEST_CASE("load summarizes")
{
  auto r = eo_cmd({"load", fixture_path("winter_feast.bsl"), fixture_path("quest.bsl")});
  CHECK(r.code == kOk);
  CHECK(r.out.find("5 individuals") != std::string::npos);
}

TEST_CASE("autoplay from the cold and hungry state")
{
  auto r = eo_cmd({"autoplay", "John Doe", "--setup", fixture_path("cold_and_hungry.script")});
  CHECK(r.code == kOk);
  std::vector<std::string> chain;
  std::istringstream in(r.out);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty() && std::isdigit(static_cast<unsigned char>(l[0]))) chain.push_back(l.substr(l.find(' ') + 1));
  }
  CHECK(chain == std::vector<std::string>{"action_gather", "action_light_fire", "action_hunt", "action_cook", "action_eat"});
  CHECK(r.out.find("John Doe._reaction_warm_up := 1") != std::string::npos);
  CHECK(r.out.find("goal reached") != std::string::npos);

  auto limited = eo_cmd({"autoplay", "John Doe", "--setup", fixture_path("cold_and_hungry.script"), "--max-steps", "2"});
  CHECK(limited.out.find("stopped without") != std::string::npos);
}

TEST_CASE("bench: idle agents add no evaluations")
{
  auto one = run_bench(default_world(), 1, 100);
  auto many = run_bench(default_world(), 1000, 100);
  CHECK(one.evaluations > 0);
  CHECK(one.evaluations == many.evaluations);
  CHECK(one.derived_events == many.derived_events);
  CHECK(run_bench(default_world(), 0, 100).evaluations == 0);

  auto e10 = run_bench(default_world(), 10, 1, true).evaluations;
  auto e100 = run_bench(default_world(), 100, 1, true).evaluations;
  auto e1000 = run_bench(default_world(), 1000, 1, true).evaluations;
  CHECK(e100 == 10 * e10);
  CHECK(e1000 == 100 * e10);

  auto cli = eo_cmd({"bench", "--agents", "3", "--touches", "4"});
  auto j = nlohmann::json::parse(cli.out);
  CHECK(j["agents"] == 3);
  CHECK(j["evaluations"] == run_bench(default_world(), 1, 4).evaluations);
}

TEST_CASE("trace from an exported graph")
{
  auto exported = (std::filesystem::temp_directory_path() / "eo_cli_test_graph.json").string();
  REQUIRE(eo_cmd({"run", fixture_path("winter_feast_table2.script"), "--graph-export", exported}).code == kOk);
  auto r = eo_cmd({"trace", "John Doe.warmth", "--graph", exported, "--depth", "3"});
  CHECK(r.code == kOk);
  CHECK(r.out.rfind("John Doe.warmth := 70", 0) == 0);
  CHECK(r.out.find("<- John Doe._reaction_warm_up := 1") != std::string::npos);
  CHECK(r.out.find("<- Forest Clearing.hasFire := 1") != std::string::npos);
  CHECK(r.out.find("action_light_fire := 1  [player") != std::string::npos);

  auto live = eo_cmd({"trace", "John Doe.hasWood", "--script", fixture_path("winter_feast_table2.script"), "--depth", "0"});
  CHECK(live.code == kOk);
  CHECK(count_lines(live.out, "") == 1);
  CHECK(eo_cmd({"trace", "John Doe.nothing"}).code == kFailure);
}
