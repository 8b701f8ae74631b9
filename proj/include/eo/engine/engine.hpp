#pragma once

#include <cstddef>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eo/engine/evaluate.hpp"
#include "eo/engine/subscriptions.hpp"
#include "eo/graph/event_graph.hpp"
#include "eo/models/registry.hpp"

namespace eo::engine
{

class EngineError : public std::runtime_error
{
public:
  EngineError(std::string code, const std::string & what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string & code() const { return code_; }

private:
  std::string code_;
};

#define EO_ENGINE_ERROR(Name)                                                  \
  class Name : public EngineError                                              \
  {                                                                            \
  public:                                                                      \
    explicit Name(const std::string & what) : EngineError(#Name, what) {}      \
  }

EO_ENGINE_ERROR(ActionUnavailable);
EO_ENGINE_ERROR(UnknownAction);
EO_ENGINE_ERROR(UnknownProperty);
EO_ENGINE_ERROR(NotEditable);
EO_ENGINE_ERROR(InvalidValue);

#undef EO_ENGINE_ERROR

/// Thrown by Engine::load when the document does not register.
class RegistrationFailed : public std::runtime_error
{
public:
  explicit RegistrationFailed(models::AnalysisReport report)
  : std::runtime_error("registration failed:\n" + report.to_text()), report_(std::move(report))
  {
  }
  const models::AnalysisReport & report() const { return report_; }

private:
  models::AnalysisReport report_;
};

enum class CascadeStatus { Quiescent, DepthExceeded };

struct CascadeResult
{
  std::vector<EventId> derived;  // append order
  std::size_t evaluations = 0;
  CascadeStatus status = CascadeStatus::Quiescent;
  std::vector<std::string> errors;  // evaluation failures that skipped a restriction
  std::optional<EventId> seed;      // the triggering event, when there is one
};

struct ActionStatus
{
  std::string property;
  Scalar condition_value;
  bool available() const { return truthy(condition_value); }
};

struct LoadResult
{
  models::AnalysisReport report;
  std::vector<EventId> individuals;
  CascadeResult genesis;
};

/**
 * The dataflow core. Holds the registry, the event graph and the subscription index,
 * and keeps derived values current as events arrive.
 *
 * Not thread-safe; callers serialize mutations.
 */
class Engine
{
public:
  static constexpr std::size_t kEvaluationCap = 10000;

  Engine();

  /// Rebuilds an engine over an existing graph (e.g. an imported export) without genesis.
  static Engine restore(models::ModelRegistry registry, graph::EventGraph graph);

  /// Registers a document and appends genesis events for its individuals. Throws RegistrationFailed.
  LoadResult load(const bsl::Document & doc);
  LoadResult load_source(std::string_view bsl_source);

  const graph::EventGraph & graph() const { return graph_; }
  graph::EventGraph & graph() { return graph_; }
  const models::ModelRegistry & registry() const { return registry_; }
  const SubscriptionIndex & subscriptions() const { return index_; }

  EventId individual(std::string_view name) const;  // throws graph::UnknownIndividual
  const models::ModelSpec & model_of(const EventId & individual) const;
  Scalar current_value(std::string_view individual, std::string_view property) const;
  /// Display form: references print as the target individual's name.
  std::string display(const Scalar & v) const;

  /// Re-runs the dependents of an event already in the graph.
  CascadeResult ingest(const EventId & event);

  std::vector<ActionStatus> available_actions(const EventId & individual) const;
  std::vector<ActionStatus> available_actions(std::string_view individual) const;
  std::vector<std::string> available_action_names(std::string_view individual) const;

  CascadeResult trigger_action(std::string_view individual, std::string_view action, const Scalar & value,
                               const std::string & actor = "player");
  CascadeResult set_property(std::string_view individual, std::string_view property, const Scalar & value,
                             const std::string & actor = "player");

  /// Evaluations performed by cascades since construction.
  std::size_t total_evaluations() const { return total_evaluations_; }

private:
  struct Work
  {
    EventId individual;
    std::string property;
    EventId seed;
  };

  struct Cascade
  {
    CascadeResult result;
    std::deque<Work> queue;
    std::set<IndividualProperty> pending;
    bool capped = false;
  };

  const models::ModelProperty & property_of(const EventId & individual, std::string_view property) const;
  Scalar coerce(const std::string & property, const Scalar & value) const;
  CascadeResult write(std::string_view individual, std::string_view property, const Scalar & value,
                      const std::string & actor, bool require_condition);

  bool count_evaluation(Cascade & c);
  void enqueue(Cascade & c, const EventId & individual, const std::string & property, const EventId & seed);
  void enqueue_dependents(Cascade & c, const graph::Event & e);
  void after_append(Cascade & c, const EventId & event);
  void run_setdo(Cascade & c, const graph::Event & e);
  void recompute(Cascade & c, const Work & w);
  void drain(Cascade & c);
  CascadeResult finish(Cascade & c);

  void relink(const EventId & individual);
  void declare_multiples();

  models::ModelRegistry registry_;
  graph::EventGraph graph_;
  SubscriptionIndex index_;
  std::size_t total_evaluations_ = 0;
};

}  // namespace eo::engine
