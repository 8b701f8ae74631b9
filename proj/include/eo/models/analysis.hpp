#pragma once

#include <compare>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eo/models/registry.hpp"

namespace eo::models
{

struct DepNode
{
  std::string model;
  std::string property;
  friend auto operator<=>(const DepNode &, const DepNode &) = default;
};

/// producer -> consumer: the consumer's Condition or SetValue reads the producer.
struct ModelDepGraph
{
  std::set<DepNode> nodes;
  std::set<std::pair<DepNode, DepNode>> edges;

  std::vector<DepNode> producers_of(const DepNode & consumer) const;
  std::vector<DepNode> consumers_of(const DepNode & producer) const;
};

enum class RefVia { Direct, Deref };

/// One syntactic property reference inside a Condition or SetValue.
struct PropertyReference
{
  std::string model;      // model holding the restriction
  std::string consumer;   // property carrying the restriction
  bsl::RestrictionKind restriction;
  std::string property;   // property read
  RefVia via = RefVia::Direct;
  std::string relation;   // Deref: relation navigated from the consumer's individual
};

/// All references in every Condition/SetValue, nested view properties included.
std::vector<PropertyReference> collect_references(const ModelRegistry & registry);

ModelDepGraph build_dependency_graph(const ModelRegistry & registry);
std::vector<Diagnostic> check_reachability(const ModelRegistry & registry, const ModelDepGraph & deps);
std::vector<Diagnostic> check_type_safety(const ModelRegistry & registry);

/// Type safety plus reachability over a registry.
AnalysisReport analyze(const ModelRegistry & registry);

}  // namespace eo::models
