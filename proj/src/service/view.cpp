#include "eo/service/view.hpp"

#include <algorithm>

namespace eo::service
{

namespace
{

void flatten(const std::vector<bsl::ValueEntry> & entries, std::vector<const bsl::ValueEntry *> & out)
{
  for (const auto & e : entries) {
    out.push_back(&e);
    flatten(e.nested, out);
  }
}

const bsl::IndividualDecl & view_decl(const engine::Engine & engine, std::string_view name)
{
  const auto * spec = engine.registry().individual(name);
  if (!spec || spec->decl.concept_name != bsl::kViewConcept) throw UnknownView("no view named '" + std::string(name) + "'");
  return spec->decl;
}

}  // namespace

nlohmann::json ViewState::to_json() const
{
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto & r : rows) rows_json.push_back({{"property", r.property}, {"value", r.value}, {"excluded", r.excluded}});
  nlohmann::json controls_json = nlohmann::json::array();
  for (const auto & c : controls) {
    controls_json.push_back({{"property", c.property},
                             {"title", c.title},
                             {"control_type", c.control_type},
                             {"send_value", c.send_value},
                             {"enabled", c.enabled}});
  }
  return {{"view_id", view_id},   {"concept_page", concept_page}, {"individual", individual},
          {"mode", mode},         {"rows", rows_json},             {"controls", controls_json}};
}

ViewState resolve_view(const engine::Engine & engine, std::string_view view_name)
{
  const auto & decl = view_decl(engine, view_name);
  ViewState view;
  view.view_id = decl.name;
  view.mode = "showcase";

  std::vector<const bsl::ValueEntry *> entries;
  flatten(decl.values, entries);
  std::vector<std::string> excluded;
  std::vector<std::string> included;
  std::string target_name;
  for (const auto * e : entries) {
    std::string v = canonical(e->value);
    if (e->property == "ConceptPage") view.concept_page = v;
    else if (e->property == "IndividualID") target_name = v;
    else if (e->property == "ViewMode") view.mode = v;
    else if (e->property == "Exclude") excluded.push_back(v);
    else if (e->property == "Include") included.push_back(v);
    else if (e->property == "Control") view.controls.push_back({v, v, "button", "1", false});
    else if (!view.controls.empty() && e->property == "Title") view.controls.back().title = v;
    else if (!view.controls.empty() && e->property == "ControlType") view.controls.back().control_type = v;
    else if (!view.controls.empty() && e->property == "Value") view.controls.back().send_value = v;
  }

  auto view_id = engine.graph().find_individual(decl.name);
  if (view_id) {
    Scalar live = engine.graph().current_value(*view_id, "IndividualID");
    if (!is_null(live)) target_name = engine.display(live);
  }
  auto target = engine.graph().find_individual(target_name);
  if (!target) throw UnknownView("view '" + decl.name + "' targets unknown individual '" + target_name + "'");
  view.individual = target_name;

  auto contains = [](const std::vector<std::string> & list, const std::string & s) {
    return std::find(list.begin(), list.end(), s) != list.end();
  };
  for (const auto & p : engine.model_of(*target).properties) {
    if (contains(excluded, p.name)) continue;
    if (!included.empty() && !contains(included, p.name)) continue;
    Scalar v = engine.graph().current_value(*target, p.name);
    if (is_null(v)) continue;
    view.rows.push_back({p.name, engine.display(v), false});
  }
  auto actions = engine.available_actions(*target);
  for (auto & c : view.controls) {
    auto it = std::find_if(actions.begin(), actions.end(), [&](const auto & a) { return a.property == c.property; });
    c.enabled = it != actions.end() && it->available();
  }
  return view;
}

std::vector<std::string> views_of(const engine::Engine & engine, std::string_view individual)
{
  std::vector<std::string> out;
  for (const auto * spec : engine.registry().individuals()) {
    if (spec->decl.concept_name != bsl::kViewConcept) continue;
    try {
      if (resolve_view(engine, spec->decl.name).individual == individual) out.push_back(spec->decl.name);
    } catch (const UnknownView &) {
    }
  }
  return out;
}

}  // namespace eo::service
