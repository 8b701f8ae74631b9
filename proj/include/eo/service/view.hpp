#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "eo/engine/engine.hpp"

namespace eo::service
{

class UnknownView : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ViewRow
{
  std::string property;
  std::string value;
  bool excluded = false;
};

struct ViewControl
{
  std::string property;
  std::string title;
  std::string control_type;
  std::string send_value;
  bool enabled = false;
};

struct ViewState
{
  std::string view_id;
  std::string concept_page;
  std::string individual;
  std::string mode;
  std::vector<ViewRow> rows;
  std::vector<ViewControl> controls;

  nlohmann::json to_json() const;
};

/// Renders a View individual against the engine's current state.
ViewState resolve_view(const engine::Engine & engine, std::string_view view_name);

/// Names of View individuals whose IndividualID points at `individual`.
std::vector<std::string> views_of(const engine::Engine & engine, std::string_view individual);

}  // namespace eo::service
