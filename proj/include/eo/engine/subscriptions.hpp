#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "eo/models/analysis.hpp"

namespace eo::engine
{

struct Subscriber
{
  std::string model;
  std::string property;
  bsl::RestrictionKind kind;
  models::RefVia via;
  std::string relation;  // Deref only

  friend auto operator<=>(const Subscriber &, const Subscriber &) = default;
};

using IndividualProperty = std::pair<EventId, std::string>;

/**
 * Which restrictions must be looked at again when a property changes.
 *
 * by_property is static and built from the registry. by_individual_property follows
 * relation values: when an individual's relation points at T, the properties it reads
 * through that relation subscribe to T.
 */
struct SubscriptionIndex
{
  std::map<std::string, std::vector<Subscriber>, std::less<>> by_property;
  std::map<IndividualProperty, std::set<IndividualProperty>> by_individual_property;

  /// (read property, consumer model, consumer property) triples.
  std::set<std::tuple<std::string, std::string, std::string>> projection() const;

  void unlink(const EventId & individual);
  void link(const IndividualProperty & target, const IndividualProperty & dependent);

private:
  std::map<EventId, std::vector<IndividualProperty>> links_from_;
};

SubscriptionIndex build_subscription_index(const models::ModelRegistry & registry);

/// The dependency graph with producer models dropped, comparable with SubscriptionIndex::projection.
std::set<std::tuple<std::string, std::string, std::string>> project(const models::ModelDepGraph & deps);

}  // namespace eo::engine
