#include "eo/models/analysis.hpp"

#include <functional>
#include <map>
#include <tuple>

namespace eo::models
{

using bsl::Binary;
using bsl::BinaryOp;
using bsl::Deref;
using bsl::Expr;
using bsl::Literal;
using bsl::NumCoerce;
using bsl::PropRef;
using bsl::RestrictionKind;

std::vector<DepNode> ModelDepGraph::producers_of(const DepNode & consumer) const
{
  std::vector<DepNode> out;
  for (const auto & [from, to] : edges) {
    if (to == consumer) out.push_back(from);
  }
  return out;
}

std::vector<DepNode> ModelDepGraph::consumers_of(const DepNode & producer) const
{
  std::vector<DepNode> out;
  for (const auto & [from, to] : edges) {
    if (from == producer) out.push_back(to);
  }
  return out;
}

namespace
{

template <typename Fn>
void for_each_use(const std::vector<bsl::PropertyUse> & uses, Fn && fn)
{
  for (const auto & u : uses) {
    fn(u);
    for_each_use(u.nested, fn);
  }
}

void walk_refs(const Expr & e, const std::function<void(const std::string &, const std::string *)> & visit)
{
  std::visit(
      [&](const auto & n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PropRef>) {
          if (n.variable.empty()) visit(n.property, nullptr);
        } else if constexpr (std::is_same_v<T, NumCoerce>) {
          walk_refs(*n.operand, visit);
        } else if constexpr (std::is_same_v<T, Deref>) {
          const auto & rel = std::get<PropRef>(n.relation->node);
          visit(rel.property, nullptr);
          visit(n.property, &rel.property);
        } else if constexpr (std::is_same_v<T, Binary>) {
          walk_refs(*n.lhs, visit);
          walk_refs(*n.rhs, visit);
        }
      },
      e.node);
}

std::vector<const ModelSpec *> range_models(const ModelRegistry & registry, const std::string & relation)
{
  const PropertyInfo * info = registry.property(relation);
  if (!info || info->kind != bsl::PropertyKind::Relation) return {};
  return registry.models_of(info->range.value_or(std::string(kAnyConcept)));
}

std::string where(const std::string & model, const std::string & property, RestrictionKind kind)
{
  return model + "/" + property + "/" + std::string(bsl::to_string(kind));
}

}  // namespace

std::vector<PropertyReference> collect_references(const ModelRegistry & registry)
{
  std::vector<PropertyReference> out;
  for (const ModelSpec * m : registry.models()) {
    for_each_use(m->decl.properties, [&](const bsl::PropertyUse & u) {
      for (const auto & r : u.restrictions) {
        if (!r.expr) continue;
        if (r.kind != RestrictionKind::Condition && r.kind != RestrictionKind::SetValue) continue;
        walk_refs(*r.expr, [&](const std::string & property, const std::string * relation) {
          PropertyReference ref{m->id, u.property, r.kind, property, RefVia::Direct, {}};
          if (relation) {
            ref.via = RefVia::Deref;
            ref.relation = *relation;
          }
          out.push_back(std::move(ref));
        });
      }
    });
  }
  return out;
}

ModelDepGraph build_dependency_graph(const ModelRegistry & registry)
{
  ModelDepGraph g;
  for (const ModelSpec * m : registry.models()) {
    for_each_use(m->decl.properties, [&](const bsl::PropertyUse & u) { g.nodes.insert({m->id, u.property}); });
  }
  for (const auto & ref : collect_references(registry)) {
    DepNode consumer{ref.model, ref.consumer};
    if (ref.via == RefVia::Direct) {
      g.edges.insert({{ref.model, ref.property}, consumer});
      continue;
    }
    for (const ModelSpec * target : range_models(registry, ref.relation)) {
      if (target->declares(ref.property)) g.edges.insert({{target->id, ref.property}, consumer});
    }
  }
  for (const auto & [from, to] : g.edges) {
    g.nodes.insert(from);
    g.nodes.insert(to);
  }
  return g;
}

std::vector<Diagnostic> check_reachability(const ModelRegistry & registry, const ModelDepGraph &)
{
  std::set<std::string, std::less<>> producible;
  for (const ModelSpec * m : registry.models()) {
    for_each_use(m->decl.properties, [&](const bsl::PropertyUse & u) {
      for (const auto & r : u.restrictions) {
        switch (r.kind) {
          case RestrictionKind::SetValue:
          case RestrictionKind::Default:
          case RestrictionKind::Condition: producible.insert(u.property); break;
          case RestrictionKind::SetDo:
            for (const auto & a : r.actions) {
              for (const auto & [key, value] : a.assignments) producible.insert(key);
            }
            break;
          default: break;
        }
      }
    });
  }
  std::function<void(const std::vector<bsl::ValueEntry> &)> initialized = [&](const auto & values) {
    for (const auto & v : values) {
      producible.insert(v.property);
      initialized(v.nested);
    }
  };
  for (const IndividualSpec * i : registry.individuals()) initialized(i->decl.values);

  std::vector<Diagnostic> out;
  std::set<std::tuple<std::string, std::string, std::string>> reported;
  for (const auto & ref : collect_references(registry)) {
    if (producible.contains(ref.property)) continue;
    if (!reported.insert({ref.model, ref.consumer, ref.property}).second) continue;
    out.push_back({codes::kUnreachable, where(ref.model, ref.consumer, ref.restriction),
                   ref.model + " requires event " + ref.property + " for " + ref.consumer + ", but " +
                       ref.property + " cannot occur"});
  }
  return out;
}

namespace
{

enum class Ty { Num, Bool, Str, Ref, Any };

std::string_view ty_name(Ty t)
{
  switch (t) {
    case Ty::Num: return "numeric";
    case Ty::Bool: return "boolean";
    case Ty::Str: return "string";
    case Ty::Ref: return "relation";
    case Ty::Any: return "any";
  }
  return "any";
}

class TypeChecker
{
public:
  TypeChecker(const ModelRegistry & registry, std::vector<Diagnostic> & out) : registry_(registry), out_(out) {}

  void check_model(const ModelSpec & m)
  {
    model_ = &m;
    for_each_use(m.decl.properties, [&](const bsl::PropertyUse & u) {
      for (const auto & r : u.restrictions) {
        location_ = where(m.id, u.property, r.kind);
        subject_ = u.property + " " + std::string(bsl::to_string(r.kind));
        if (r.expr) infer(*r.expr);
        for (const auto & a : r.actions) check_action(a);
      }
    });
  }

private:
  void error(const std::string & message) { out_.push_back({codes::kType, location_, message + " in " + subject_}); }

  Ty property_type(const std::string & name) const
  {
    const PropertyInfo * info = registry_.property(name);
    if (!info) return Ty::Any;
    if (info->kind == bsl::PropertyKind::Relation) return Ty::Ref;
    switch (info->data_type.value_or(bsl::DataType::String)) {
      case bsl::DataType::Numeric: return Ty::Num;
      case bsl::DataType::Boolean: return Ty::Bool;
      case bsl::DataType::String: return Ty::Str;
    }
    return Ty::Any;
  }

  Ty infer(const Expr & e)
  {
    return std::visit([&](const auto & n) { return infer_node(n); }, e.node);
  }

  Ty infer_node(const Literal & n)
  {
    return std::holds_alternative<double>(n.value) ? Ty::Num : Ty::Str;
  }

  Ty infer_node(const PropRef & n)
  {
    if (n.variable == "Value") return Ty::Any;
    if (n.variable == "CurrentIndividual") return Ty::Ref;
    if (!n.variable.empty()) {
      error("unknown variable $" + n.variable);
      return Ty::Any;
    }
    if (!model_->declares(n.property)) {
      error(model_->id + " has no property " + n.property);
      return Ty::Any;
    }
    return property_type(n.property);
  }

  Ty infer_node(const NumCoerce & n)
  {
    if (infer(*n.operand) == Ty::Ref) error("numeric coercion of a relation");
    return Ty::Num;
  }

  Ty infer_node(const Deref & n)
  {
    const auto & rel = std::get<PropRef>(n.relation->node).property;
    const PropertyInfo * info = registry_.property(rel);
    if (!model_->declares(rel) || !info || info->kind != bsl::PropertyKind::Relation) {
      error(rel + " is not a relation of " + model_->id);
      return Ty::Any;
    }
    std::string range = info->range.value_or(std::string(kAnyConcept));
    bool found = false;
    for (const ModelSpec * m : registry_.models_of(range)) found = found || m->declares(n.property);
    if (!found) {
      error("no model of concept " + range + " declares " + n.property + " (read through " + rel + ")");
      return Ty::Any;
    }
    return property_type(n.property);
  }

  Ty infer_node(const Binary & n)
  {
    Ty l = infer(*n.lhs);
    Ty r = infer(*n.rhs);
    auto mismatch = [&] {
      error(std::string("cannot apply ") + std::string(bsl::to_string(n.op)) + " to " + std::string(ty_name(l)) +
            " and " + std::string(ty_name(r)));
    };
    switch (n.op) {
      case BinaryOp::Lt:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        if (l == Ty::Ref || r == Ty::Ref) mismatch();
        break;
      case BinaryOp::Eq:
      case BinaryOp::StrictEq: {
        auto numeric = [](Ty t) { return t == Ty::Num || t == Ty::Bool; };
        if ((l == Ty::Ref && numeric(r)) || (r == Ty::Ref && numeric(l))) mismatch();
        break;
      }
      case BinaryOp::And:
      case BinaryOp::Or:
        if (l == Ty::Ref || r == Ty::Ref) mismatch();
        break;
    }
    return Ty::Bool;
  }

  void check_action(const bsl::SetDoAction & a)
  {
    std::vector<const ModelSpec *> targets;
    if (a.target) {
      Ty t = infer(*a.target);
      if (t != Ty::Ref && t != Ty::Any) error("SetDo target is " + std::string(ty_name(t)) + ", not a relation");
      const auto * ref = std::get_if<PropRef>(&a.target->node);
      if (ref && ref->variable == "CurrentIndividual") {
        targets.push_back(model_);
      } else if (ref && ref->variable.empty()) {
        targets = range_models(registry_, ref->property);
      } else {
        targets = registry_.models();
      }
    }
    if (a.guard) infer(*a.guard);
    for (const auto & [key, value] : a.assignments) {
      const PropertyInfo * info = registry_.property(key);
      if (!info) {
        error("SetDo assigns undeclared property " + key);
        continue;
      }
      bool declared = false;
      for (const ModelSpec * m : targets) declared = declared || m->declares(key);
      if (!declared) error("SetDo assigns " + key + ", which its target model does not declare");
      if (info->kind == bsl::PropertyKind::Attribute && info->data_type &&
          *info->data_type != bsl::DataType::String && !to_number(value)) {
        error("SetDo assigns non-numeric '" + canonical(value) + "' to " + key);
      }
    }
  }

  const ModelRegistry & registry_;
  std::vector<Diagnostic> & out_;
  const ModelSpec * model_ = nullptr;
  std::string location_;
  std::string subject_;
};

}  // namespace

std::vector<Diagnostic> check_type_safety(const ModelRegistry & registry)
{
  std::vector<Diagnostic> out;
  TypeChecker checker(registry, out);
  for (const ModelSpec * m : registry.models()) checker.check_model(*m);
  return out;
}

AnalysisReport analyze(const ModelRegistry & registry)
{
  AnalysisReport report;
  report.errors = check_type_safety(registry);
  report.warnings = check_reachability(registry, build_dependency_graph(registry));
  return report;
}

}  // namespace eo::models
