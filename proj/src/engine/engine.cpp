#include "eo/engine/engine.hpp"

#include <algorithm>

#include "eo/bsl/parser.hpp"

namespace eo::engine
{

namespace
{

std::vector<EventId> causes(const EventId & seed, const std::vector<EventId> & reads)
{
  std::vector<EventId> out{seed};
  for (const auto & r : reads) {
    if (r != seed) out.push_back(r);
  }
  return out;
}

}  // namespace

Engine::Engine() : registry_(models::builtin_registry()), index_(build_subscription_index(registry_)) {}

Engine Engine::restore(models::ModelRegistry registry, graph::EventGraph graph)
{
  Engine e;
  e.registry_ = std::move(registry);
  e.graph_ = std::move(graph);
  e.index_ = build_subscription_index(e.registry_);
  e.declare_multiples();
  for (const auto & id : e.graph_.individuals()) e.relink(id);
  return e;
}

void Engine::declare_multiples()
{
  for (const auto * m : registry_.models()) {
    for (const auto & p : m->properties) {
      if (p.multiple) graph_.declare_multiple(p.name);
    }
  }
}

LoadResult Engine::load_source(std::string_view bsl_source) { return load(bsl::parse_document(bsl_source)); }

LoadResult Engine::load(const bsl::Document & doc)
{
  auto reg = models::register_document(registry_, doc);
  if (!reg.registry) throw RegistrationFailed(reg.report);
  registry_ = std::move(*reg.registry);
  index_ = build_subscription_index(registry_);
  declare_multiples();

  LoadResult out;
  out.report = reg.report;
  for (const auto & name : reg.new_individuals) {
    const auto * spec = registry_.individual(name);
    graph::EventDraft d;
    d.type = std::string(graph::kIndividualType);
    d.value = name;
    d.model = spec->decl.model;
    out.individuals.push_back(graph_.append(std::move(d)));
  }
  for (std::size_t i = 0; i < out.individuals.size(); ++i) {
    const EventId & id = out.individuals[i];
    const auto * spec = registry_.individual(reg.new_individuals[i]);
    auto initial = [&](const std::string & property, const Scalar & value) {
      graph::EventDraft d;
      d.base = id;
      d.type = property;
      d.value = coerce(property, value);
      d.cause = {id};
      d.model = spec->decl.model;
      graph_.append(std::move(d));
    };
    for (const auto & v : spec->decl.values) initial(v.property, v.value);
    for (const auto & [property, value] : spec->defaults) initial(property, value);
  }
  for (const auto & id : out.individuals) relink(id);

  Cascade c;
  for (const auto & id : out.individuals) {
    for (const auto & p : model_of(id).properties) enqueue(c, id, p.name, id);
  }
  drain(c);
  out.genesis = finish(c);
  return out;
}

EventId Engine::individual(std::string_view name) const { return graph_.individual(name); }

const models::ModelSpec & Engine::model_of(const EventId & individual) const
{
  const auto * e = graph_.find(individual);
  if (!e || !graph_.is_individual(individual)) throw graph::UnknownIndividual("no individual " + individual.hex());
  const auto * m = e->model ? registry_.model(*e->model) : nullptr;
  if (!m) throw graph::UnknownIndividual(graph_.individual_name(individual) + " has no registered model");
  return *m;
}

const models::ModelProperty & Engine::property_of(const EventId & individual, std::string_view property) const
{
  const auto & m = model_of(individual);
  const auto * p = m.find(property);
  if (!p) throw UnknownProperty(std::string(property) + " is not a property of " + m.id);
  return *p;
}

Scalar Engine::current_value(std::string_view individual, std::string_view property) const
{
  return graph_.current_value(this->individual(individual), property);
}

std::string Engine::display(const Scalar & v) const
{
  if (const auto * ref = std::get_if<IndividualRef>(&v)) {
    if (graph_.is_individual(ref->id)) return graph_.individual_name(ref->id);
  }
  return canonical(v);
}

Scalar Engine::coerce(const std::string & property, const Scalar & value) const
{
  const auto * info = registry_.property(property);
  if (!info || is_null(value)) return value;
  if (info->kind == bsl::PropertyKind::Relation) {
    if (std::holds_alternative<IndividualRef>(value)) return value;
    auto target = graph_.find_individual(canonical(value));
    if (!target) throw InvalidValue("no individual named '" + canonical(value) + "' for " + property);
    return IndividualRef{*target};
  }
  if (info->data_type && *info->data_type != bsl::DataType::String) {
    auto n = to_number(value);
    if (!n) throw InvalidValue("'" + canonical(value) + "' is not a number for " + property);
    return *n;
  }
  return value;
}

bool Engine::count_evaluation(Cascade & c)
{
  if (c.result.evaluations >= kEvaluationCap) {
    c.capped = true;
    return false;
  }
  ++c.result.evaluations;
  ++total_evaluations_;
  return true;
}

void Engine::enqueue(Cascade & c, const EventId & individual, const std::string & property, const EventId & seed)
{
  const auto * p = model_of(individual).find(property);
  if (!p || !p->set_value) return;
  if (c.pending.insert({individual, property}).second) c.queue.push_back({individual, property, seed});
}

void Engine::enqueue_dependents(Cascade & c, const graph::Event & e)
{
  if (!e.base || !graph_.is_individual(*e.base)) return;
  const EventId & ind = *e.base;
  const auto & model = model_of(ind);
  const auto * info = registry_.property(e.type);
  if (info && info->kind == bsl::PropertyKind::Relation) relink(ind);

  if (auto it = index_.by_property.find(e.type); it != index_.by_property.end()) {
    for (const auto & s : it->second) {
      if (s.via == models::RefVia::Direct && s.model == model.id) enqueue(c, ind, s.property, e.id);
    }
  }
  if (auto it = index_.by_individual_property.find({ind, e.type}); it != index_.by_individual_property.end()) {
    auto dependents = it->second;
    for (const auto & [dep, property] : dependents) enqueue(c, dep, property, e.id);
  }
}

void Engine::after_append(Cascade & c, const EventId & event)
{
  const graph::Event & e = graph_.at(event);
  run_setdo(c, e);
  enqueue_dependents(c, graph_.at(event));
}

void Engine::run_setdo(Cascade & c, const graph::Event & source)
{
  if (!source.base || !graph_.is_individual(*source.base)) return;
  const EventId ind = *source.base;
  const EventId seed = source.id;
  const Scalar value = source.value;
  const auto * p = model_of(ind).find(source.type);
  if (!p) return;
  for (const auto & action : p->set_do) {
    if (!count_evaluation(c)) return;
    EvalContext ctx{graph_, ind, value};
    try {
      if (action.guard && !truthy(evaluate(*action.guard, ctx))) continue;
      Scalar target = action.target ? evaluate(*action.target, ctx) : Scalar{IndividualRef{ind}};
      const auto * ref = std::get_if<IndividualRef>(&target);
      if (!ref || !graph_.is_individual(ref->id)) continue;
      const auto & target_model = model_of(ref->id);
      for (const auto & [property, raw] : action.assignments) {
        Scalar typed = coerce(property, raw);
        if (same_value(graph_.current_value(ref->id, property), typed)) continue;
        graph::EventDraft d;
        d.base = ref->id;
        d.type = property;
        d.value = typed;
        d.cause = causes(seed, ctx.reads);
        d.model = target_model.id;
        EventId id = graph_.append(std::move(d));
        c.result.derived.push_back(id);
        after_append(c, id);
        if (c.capped) return;
      }
    } catch (const std::exception & ex) {
      c.result.errors.push_back(source.type + " SetDo: " + ex.what());
    }
  }
}

void Engine::recompute(Cascade & c, const Work & w)
{
  c.pending.erase({w.individual, w.property});
  const auto & model = model_of(w.individual);
  const auto * p = model.find(w.property);
  if (!p || !p->set_value) return;
  EvalContext ctx{graph_, w.individual, Scalar{}};
  Scalar value;
  try {
    if (p->condition) {
      if (!count_evaluation(c)) return;
      if (!truthy(evaluate(*p->condition, ctx))) return;
    }
    if (!count_evaluation(c)) return;
    value = coerce(w.property, evaluate(*p->set_value, ctx));
  } catch (const std::exception & ex) {
    c.result.errors.push_back(graph_.individual_name(w.individual) + "." + w.property + ": " + ex.what());
    return;
  }
  if (same_value(graph_.current_value(w.individual, w.property), value)) return;
  graph::EventDraft d;
  d.base = w.individual;
  d.type = w.property;
  d.value = value;
  d.cause = causes(w.seed, ctx.reads);
  d.model = model.id;
  EventId id = graph_.append(std::move(d));
  c.result.derived.push_back(id);
  after_append(c, id);
}

void Engine::drain(Cascade & c)
{
  while (!c.queue.empty() && !c.capped) {
    Work w = std::move(c.queue.front());
    c.queue.pop_front();
    recompute(c, w);
  }
}

CascadeResult Engine::finish(Cascade & c)
{
  c.result.status = c.capped ? CascadeStatus::DepthExceeded : CascadeStatus::Quiescent;
  return std::move(c.result);
}

CascadeResult Engine::ingest(const EventId & event)
{
  Cascade c;
  c.result.seed = event;
  after_append(c, event);
  drain(c);
  return finish(c);
}

void Engine::relink(const EventId & individual)
{
  index_.unlink(individual);
  const auto & model = model_of(individual);
  for (const auto & [property, subs] : index_.by_property) {
    for (const auto & s : subs) {
      if (s.via != models::RefVia::Deref || s.model != model.id) continue;
      Scalar target = graph_.current_value(individual, s.relation);
      const auto * ref = std::get_if<IndividualRef>(&target);
      if (!ref) continue;
      index_.link({ref->id, property}, {individual, s.property});
    }
  }
}

std::vector<ActionStatus> Engine::available_actions(const EventId & individual) const
{
  std::vector<ActionStatus> out;
  for (const auto & p : model_of(individual).properties) {
    if (!p.condition) continue;
    EvalContext ctx{graph_, individual, Scalar{}};
    Scalar v = 0.0;
    try {
      v = evaluate(*p.condition, ctx);
    } catch (const CoercionError &) {
    }
    out.push_back({p.name, v});
  }
  return out;
}

std::vector<ActionStatus> Engine::available_actions(std::string_view individual) const
{
  return available_actions(this->individual(individual));
}

std::vector<std::string> Engine::available_action_names(std::string_view individual) const
{
  std::vector<std::string> out;
  for (const auto & a : available_actions(individual)) {
    if (a.available()) out.push_back(a.property);
  }
  return out;
}

CascadeResult Engine::write(std::string_view individual, std::string_view property, const Scalar & value,
                            const std::string & actor, bool require_condition)
{
  EventId ind = this->individual(individual);
  const auto & model = model_of(ind);
  const auto * p = model.find(property);
  if (!p) {
    if (require_condition) throw UnknownAction(std::string(property) + " is not an action of " + model.id);
    throw UnknownProperty(std::string(property) + " is not a property of " + model.id);
  }
  if (require_condition && !p->condition) throw UnknownAction(p->name + " has no Condition in " + model.id);
  if (p->set_value) throw NotEditable(p->name + " is derived by SetValue");
  Scalar typed = coerce(p->name, value);

  EvalContext ctx{graph_, ind, typed};
  if (p->condition) {
    bool ok = false;
    try {
      ok = truthy(evaluate(*p->condition, ctx));
    } catch (const CoercionError &) {
    }
    if (!ok) throw ActionUnavailable(p->name + " is not available for " + std::string(individual));
  }
  graph::EventDraft d;
  d.base = ind;
  d.type = p->name;
  d.value = typed;
  d.actor = actor;
  d.cause = ctx.reads;
  d.model = model.id;
  return ingest(graph_.append(std::move(d)));
}

CascadeResult Engine::trigger_action(std::string_view individual, std::string_view action, const Scalar & value,
                                     const std::string & actor)
{
  return write(individual, action, value, actor, true);
}

CascadeResult Engine::set_property(std::string_view individual, std::string_view property, const Scalar & value,
                                   const std::string & actor)
{
  return write(individual, property, value, actor, false);
}

}  // namespace eo::engine
