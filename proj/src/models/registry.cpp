#include "eo/models/registry.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "eo/bsl/parser.hpp"
#include "eo/models/analysis.hpp"

namespace eo::models
{

namespace
{

bool truthy(const Scalar & v)
{
  if (is_null(v)) return false;
  auto n = to_number(v);
  return !n || *n != 0;
}

void collect_names(const std::vector<bsl::PropertyUse> & uses, std::set<std::string, std::less<>> & out)
{
  for (const auto & u : uses) {
    out.insert(u.property);
    collect_names(u.nested, out);
  }
}

std::string model_location(const std::string & model, const std::string & property = {})
{
  std::string out = model;
  if (!property.empty()) out += "/" + property;
  return out;
}

std::string value_text(const Scalar & v) { return canonical(v); }

}  // namespace

ModelSpec::ModelSpec(bsl::ModelDecl d) : id(d.name), concept_name(d.concept_name), decl(std::move(d))
{
  for (const auto & use : decl.properties) {
    ModelProperty p;
    p.name = use.property;
    p.kind = use.kind;
    p.use = &use;
    for (const auto & r : use.restrictions) {
      switch (r.kind) {
        case bsl::RestrictionKind::Condition: p.condition = r.expr; break;
        case bsl::RestrictionKind::SetValue: p.set_value = r.expr; break;
        case bsl::RestrictionKind::SetDo:
          p.set_do.insert(p.set_do.end(), r.actions.begin(), r.actions.end());
          break;
        case bsl::RestrictionKind::Default: p.default_value = r.scalar; break;
        case bsl::RestrictionKind::Multiple: p.multiple = truthy(r.scalar); break;
        case bsl::RestrictionKind::Required: p.required = truthy(r.scalar); break;
        case bsl::RestrictionKind::Unsupported: break;
      }
    }
    properties.push_back(std::move(p));
  }
}

ModelSpec & ModelSpec::operator=(const ModelSpec & other)
{
  if (this != &other) *this = ModelSpec(other.decl);
  return *this;
}

const ModelProperty * ModelSpec::find(std::string_view property) const
{
  for (const auto & p : properties) {
    if (p.name == property) return &p;
  }
  return nullptr;
}

bool ModelSpec::declares(std::string_view property) const
{
  std::set<std::string, std::less<>> names;
  collect_names(decl.properties, names);
  return names.contains(property);
}

std::size_t AnalysisReport::count(std::string_view code) const
{
  auto match = [&](const Diagnostic & d) { return d.code == code; };
  return static_cast<std::size_t>(std::count_if(errors.begin(), errors.end(), match) +
                                  std::count_if(warnings.begin(), warnings.end(), match));
}

void AnalysisReport::merge(const AnalysisReport & other)
{
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

nlohmann::json AnalysisReport::to_json() const
{
  auto list = [](const std::vector<Diagnostic> & ds) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto & d : ds) out.push_back({{"code", d.code}, {"location", d.location}, {"message", d.message}});
    return out;
  };
  return {{"ok", ok()}, {"errors", list(errors)}, {"warnings", list(warnings)}};
}

std::string AnalysisReport::to_text() const
{
  std::ostringstream os;
  for (const auto & d : errors) os << "error " << d.code << " " << d.location << ": " << d.message << "\n";
  for (const auto & d : warnings) os << "warning " << d.code << " " << d.location << ": " << d.message << "\n";
  return os.str();
}

bool ModelRegistry::has_concept(std::string_view name) const
{
  return std::find(concepts_.begin(), concepts_.end(), name) != concepts_.end();
}

const PropertyInfo * ModelRegistry::property(std::string_view name) const
{
  auto it = properties_.find(name);
  return it == properties_.end() ? nullptr : &it->second;
}

const ModelSpec * ModelRegistry::model(std::string_view name) const
{
  for (const auto & m : models_) {
    if (m.id == name) return &m;
  }
  return nullptr;
}

const IndividualSpec * ModelRegistry::individual(std::string_view name) const
{
  for (const auto & i : individuals_) {
    if (i.decl.name == name) return &i;
  }
  return nullptr;
}

std::vector<const ModelSpec *> ModelRegistry::models() const
{
  std::vector<const ModelSpec *> out;
  for (const auto & m : models_) out.push_back(&m);
  return out;
}

std::vector<const ModelSpec *> ModelRegistry::models_of(std::string_view concept_name) const
{
  std::vector<const ModelSpec *> out;
  for (const auto & m : models_) {
    if (concept_name == kAnyConcept || m.concept_name == concept_name) out.push_back(&m);
  }
  return out;
}

std::vector<const IndividualSpec *> ModelRegistry::individuals() const
{
  std::vector<const IndividualSpec *> out;
  for (const auto & i : individuals_) out.push_back(&i);
  return out;
}

namespace
{

class ValueChecker
{
public:
  ValueChecker(const ModelRegistry & registry, ReificationResult & out) : registry_(registry), out_(out) {}

  void check(const bsl::ValueEntry & v)
  {
    if (v.property == "ViewMode" && value_text(v.value) != "showcase") {
      add(v.property, codes::kViewMode, "view mode '" + value_text(v.value) + "' is not supported, only showcase");
    }
    const PropertyInfo * info = registry_.property(v.property);
    if (!info) return;
    if (info->kind == bsl::PropertyKind::Relation) {
      std::string target = value_text(v.value);
      const IndividualSpec * t = registry_.individual(target);
      if (!t) {
        add(v.property, codes::kRange, "no individual named '" + target + "'");
      } else if (info->range && *info->range != kAnyConcept && t->decl.concept_name != *info->range) {
        add(v.property, codes::kRange,
            "'" + target + "' is a " + t->decl.concept_name + ", expected " + *info->range);
      }
      return;
    }
    if (!info->data_type) return;
    auto n = to_number(v.value);
    switch (*info->data_type) {
      case bsl::DataType::Numeric:
        if (!n) add(v.property, codes::kType, "'" + value_text(v.value) + "' is not numeric");
        break;
      case bsl::DataType::Boolean:
        if (!n || (*n != 0 && *n != 1)) add(v.property, codes::kType, "'" + value_text(v.value) + "' is not 0 or 1");
        break;
      case bsl::DataType::String: break;
    }
  }

  void add(const std::string & property, const char * rule, std::string detail)
  {
    out_.violations.push_back({property, rule, std::move(detail)});
  }

private:
  const ModelRegistry & registry_;
  ReificationResult & out_;
};

void check_nested(const ModelSpec & model, const std::vector<bsl::ValueEntry> & entries, ValueChecker & checker)
{
  for (const auto & e : entries) {
    if (!model.declares(e.property)) {
      checker.add(e.property, codes::kUnknownProperty, "not a property of " + model.id);
    } else {
      checker.check(e);
    }
    check_nested(model, e.nested, checker);
  }
}

}  // namespace

ReificationResult validate_reification(const ModelRegistry & registry, const bsl::IndividualDecl & draft)
{
  ReificationResult out;
  ValueChecker checker(registry, out);
  if (draft.model.empty()) {
    checker.add("SetModel", codes::kUnknownModel, "individual has no SetModel");
    return out;
  }
  const ModelSpec * model = registry.model(draft.model);
  if (!model) {
    checker.add("SetModel", codes::kUnknownModel, "unknown model '" + draft.model + "'");
    return out;
  }
  if (model->concept_name != draft.concept_name) {
    checker.add("SetModel", codes::kType,
                model->id + " describes " + model->concept_name + ", not " + draft.concept_name);
  }

  std::map<std::string, int, std::less<>> seen;
  for (const auto & v : draft.values) {
    const ModelProperty * p = model->find(v.property);
    if (!p) {
      checker.add(v.property, codes::kUnknownProperty, "not a property of " + model->id);
      continue;
    }
    if (++seen[v.property] == 2 && !p->multiple) {
      checker.add(v.property, codes::kType, "set more than once but not Multiple");
    }
    if (p->set_value) checker.add(v.property, codes::kDerived, "derived by SetValue and cannot be initialized");
    checker.check(v);
    check_nested(*model, v.nested, checker);
  }
  for (const auto & p : model->properties) {
    if (seen.contains(p.name)) continue;
    if (p.default_value) {
      out.defaults.emplace_back(p.name, *p.default_value);
    } else if (p.required) {
      checker.add(p.name, codes::kRequired, "required by " + model->id + " but not set");
    }
  }
  return out;
}

struct Registrar
{
  static RegistrationResult run(const ModelRegistry & base, const bsl::Document & doc)
  {
    RegistrationResult result;
    ModelRegistry reg = base;
    auto & errors = result.report.errors;
    auto error = [&](const char * code, std::string location, std::string message) {
      errors.push_back({code, std::move(location), std::move(message)});
    };

    for (const auto & d : doc.declarations) {
      if (const auto * c = std::get_if<bsl::ConceptDecl>(&d)) {
        if (!reg.has_concept(c->name)) reg.concepts_.push_back(c->name);
      }
    }
    for (const auto & d : doc.declarations) {
      const auto * p = std::get_if<bsl::PropertyDecl>(&d);
      if (!p) continue;
      PropertyInfo info{p->kind, p->data_type, p->range};
      if (p->kind == bsl::PropertyKind::Relation && p->range && *p->range != kAnyConcept &&
          !reg.has_concept(*p->range)) {
        error(codes::kUnknownConcept, p->name, "range '" + *p->range + "' is not a concept");
      }
      auto it = reg.properties_.find(p->name);
      if (it == reg.properties_.end()) {
        reg.properties_.emplace(p->name, info);
      } else if (it->second.kind != info.kind || it->second.data_type != info.data_type ||
                 it->second.range != info.range) {
        error(codes::kDuplicateProperty, p->name, "redeclared with a different signature");
      }
    }
    for (const auto & d : doc.declarations) {
      const auto * m = std::get_if<bsl::ModelDecl>(&d);
      if (!m) continue;
      std::string where = model_location(m->name);
      if (!reg.has_concept(m->concept_name)) {
        error(codes::kUnknownConcept, where, "'" + m->concept_name + "' is not a concept");
      }
      if (reg.model(m->name)) {
        error(codes::kDuplicateModel, where, "model '" + m->name + "' already registered");
        continue;
      }
      check_uses(reg, m->properties, m->name, result.report);
      std::set<std::string, std::less<>> top;
      for (const auto & u : m->properties) {
        if (!top.insert(u.property).second) {
          error(codes::kDuplicateProperty, model_location(m->name, u.property), "listed twice");
        }
      }
      reg.models_.emplace_back(*m);
      result.new_models.push_back(m->name);
    }
    std::vector<const bsl::IndividualDecl *> staged;
    for (const auto & d : doc.declarations) {
      const auto * i = std::get_if<bsl::IndividualDecl>(&d);
      if (!i) continue;
      if (!reg.has_concept(i->concept_name)) {
        error(codes::kUnknownConcept, i->name, "'" + i->concept_name + "' is not a concept");
      }
      if (reg.individual(i->name)) {
        error(codes::kDuplicateIndividual, i->name, "individual '" + i->name + "' already exists");
        continue;
      }
      reg.individuals_.push_back({*i, {}});
      result.new_individuals.push_back(i->name);
      staged.push_back(i);
    }
    for (const auto * i : staged) {
      ReificationResult r = validate_reification(reg, *i);
      for (const auto & v : r.violations) {
        error(v.rule.c_str(), i->name + "/" + v.property, v.detail);
      }
      for (auto & spec : reg.individuals_) {
        if (spec.decl.name == i->name) spec.defaults = r.defaults;
      }
    }

    result.report.merge(analyze(reg));
    if (result.report.ok()) result.registry = std::move(reg);
    return result;
  }

  static void check_uses(const ModelRegistry & reg, const std::vector<bsl::PropertyUse> & uses,
                         const std::string & model, AnalysisReport & report)
  {
    for (const auto & u : uses) {
      std::string where = model_location(model, u.property);
      const PropertyInfo * info = reg.property(u.property);
      if (!info) {
        report.errors.push_back({codes::kUnknownProperty, where, "'" + u.property + "' is not a declared property"});
      } else if (info->kind != u.kind) {
        report.errors.push_back({codes::kType, where,
                                 "declared as " + std::string(bsl::to_string(info->kind)) + ", used as " +
                                     std::string(bsl::to_string(u.kind))});
      }
      for (const auto & r : u.restrictions) {
        if (r.kind == bsl::RestrictionKind::Unsupported) {
          report.warnings.push_back({codes::kUnsupported, where, "restriction '" + r.keyword + "' is ignored"});
        }
        if (r.kind == bsl::RestrictionKind::Default && info && info->data_type &&
            *info->data_type != bsl::DataType::String && !to_number(r.scalar)) {
          report.errors.push_back({codes::kType, where, "default '" + canonical(r.scalar) + "' is not numeric"});
        }
      }
      check_uses(reg, u.nested, model, report);
    }
  }
};

RegistrationResult register_document(const ModelRegistry & base, const bsl::Document & doc)
{
  return Registrar::run(base, doc);
}

std::string_view builtin_genesis_source()
{
  static constexpr std::string_view kSource = R"(Concept: Instance: View

Attribute: Individual: ConceptPage
: DataType: String
Relation: Individual: IndividualID
: Range: Instance
Attribute: Individual: ViewConcept
: DataType: String
Relation: Individual: Individuallist
: Range: Instance
Attribute: Individual: ViewMode
: DataType: String
Attribute: Individual: Title
: DataType: String
Attribute: Individual: Include
: DataType: String
Attribute: Individual: Exclude
: DataType: String
Attribute: Individual: Control
: DataType: String
Attribute: Individual: ControlType
: DataType: String
Attribute: Individual: Value
: DataType: String
)";
  return kSource;
}

const ModelRegistry & builtin_registry()
{
  static const ModelRegistry registry = [] {
    auto result = register_document(ModelRegistry{}, bsl::parse_document(builtin_genesis_source()));
    return std::move(*result.registry);
  }();
  return registry;
}

}  // namespace eo::models
