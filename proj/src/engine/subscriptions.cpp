#include "eo/engine/subscriptions.hpp"

#include <algorithm>

namespace eo::engine
{

std::set<std::tuple<std::string, std::string, std::string>> SubscriptionIndex::projection() const
{
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const auto & [property, subs] : by_property) {
    for (const auto & s : subs) out.insert({property, s.model, s.property});
  }
  return out;
}

void SubscriptionIndex::unlink(const EventId & individual)
{
  auto it = links_from_.find(individual);
  if (it == links_from_.end()) return;
  for (const auto & target : it->second) {
    auto t = by_individual_property.find(target);
    if (t == by_individual_property.end()) continue;
    std::erase_if(t->second, [&](const IndividualProperty & d) { return d.first == individual; });
    if (t->second.empty()) by_individual_property.erase(t);
  }
  links_from_.erase(it);
}

void SubscriptionIndex::link(const IndividualProperty & target, const IndividualProperty & dependent)
{
  by_individual_property[target].insert(dependent);
  links_from_[dependent.first].push_back(target);
}

SubscriptionIndex build_subscription_index(const models::ModelRegistry & registry)
{
  SubscriptionIndex index;
  for (const auto & ref : models::collect_references(registry)) {
    Subscriber s{ref.model, ref.consumer, ref.restriction, ref.via, ref.relation};
    auto & subs = index.by_property[ref.property];
    if (std::find(subs.begin(), subs.end(), s) == subs.end()) subs.push_back(std::move(s));
  }
  return index;
}

std::set<std::tuple<std::string, std::string, std::string>> project(const models::ModelDepGraph & deps)
{
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const auto & [from, to] : deps.edges) out.insert({from.property, to.model, to.property});
  return out;
}

}  // namespace eo::engine
