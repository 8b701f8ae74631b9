#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "eo/bsl/ast.hpp"

namespace eo::models
{

/// Range value that admits individuals of any concept.
inline constexpr std::string_view kAnyConcept = "Instance";

struct PropertyInfo
{
  bsl::PropertyKind kind = bsl::PropertyKind::Attribute;
  std::optional<bsl::DataType> data_type;
  std::optional<std::string> range;
};

/// A top-level property of a model with its restrictions unpacked.
struct ModelProperty
{
  std::string name;
  bsl::PropertyKind kind = bsl::PropertyKind::Attribute;
  bsl::ExprPtr condition;
  bsl::ExprPtr set_value;
  std::vector<bsl::SetDoAction> set_do;
  std::optional<Scalar> default_value;
  bool multiple = false;
  bool required = false;
  const bsl::PropertyUse * use = nullptr;  // points into ModelSpec::decl

  /// Properties without a SetValue may be written by actors (players, scripts).
  bool actor_editable() const { return !set_value; }
};

struct ModelSpec
{
  std::string id;  // the model name
  std::string concept_name;
  bsl::ModelDecl decl;
  std::vector<ModelProperty> properties;  // declaration order

  ModelSpec() = default;
  explicit ModelSpec(bsl::ModelDecl d);
  ModelSpec(const ModelSpec & other) : ModelSpec(other.decl) {}
  ModelSpec & operator=(const ModelSpec & other);

  const ModelProperty * find(std::string_view property) const;
  /// Every property name in the model, nested view properties included.
  bool declares(std::string_view property) const;
};

struct IndividualSpec
{
  bsl::IndividualDecl decl;
  std::vector<std::pair<std::string, Scalar>> defaults;  // materialized at creation
};

struct Diagnostic
{
  std::string code;
  std::string location;
  std::string message;
};

struct AnalysisReport
{
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return errors.empty(); }
  std::size_t count(std::string_view code) const;
  void merge(const AnalysisReport & other);
  nlohmann::json to_json() const;
  std::string to_text() const;
};

namespace codes
{
inline constexpr const char * kUnknownConcept = "EO-UNKNOWN-CONCEPT";
inline constexpr const char * kUnknownProperty = "EO-UNKNOWN-PROP";
inline constexpr const char * kUnknownModel = "EO-UNKNOWN-MODEL";
inline constexpr const char * kDuplicateModel = "EO-DUPLICATE-MODEL";
inline constexpr const char * kDuplicateProperty = "EO-DUPLICATE-PROP";
inline constexpr const char * kDuplicateIndividual = "EO-DUPLICATE-INDIVIDUAL";
inline constexpr const char * kRange = "EO-RANGE";
inline constexpr const char * kType = "EO-TYPE";
inline constexpr const char * kRequired = "EO-REQUIRED";
inline constexpr const char * kDerived = "EO-DERIVED";
inline constexpr const char * kViewMode = "EO-VIEW-MODE";
inline constexpr const char * kUnreachable = "EO-UNREACHABLE";
inline constexpr const char * kUnsupported = "EO-UNSUPPORTED";
}  // namespace codes

/**
 * Schema registry (TBox) plus the individuals staged for genesis.
 *
 * Registries are values: registration builds a new registry from an old one and
 * leaves the old one untouched, so a rejected document has no effect.
 */
class ModelRegistry
{
public:
  const std::vector<std::string> & concepts() const { return concepts_; }
  bool has_concept(std::string_view name) const;
  const PropertyInfo * property(std::string_view name) const;
  const ModelSpec * model(std::string_view name) const;
  const IndividualSpec * individual(std::string_view name) const;

  std::vector<const ModelSpec *> models() const;  // registration order
  std::vector<const ModelSpec *> models_of(std::string_view concept_name) const;
  std::vector<const IndividualSpec *> individuals() const;  // registration order
  bool empty() const { return concepts_.empty() && properties_.empty(); }

private:
  friend struct Registrar;

  std::vector<std::string> concepts_;
  std::map<std::string, PropertyInfo, std::less<>> properties_;
  std::vector<ModelSpec> models_;
  std::vector<IndividualSpec> individuals_;
};

struct RegistrationResult
{
  std::optional<ModelRegistry> registry;  // set when report.ok()
  AnalysisReport report;
  std::vector<std::string> new_models;
  std::vector<std::string> new_individuals;
};

/// Validates `doc` against `base` and returns the extended registry, or the errors.
RegistrationResult register_document(const ModelRegistry & base, const bsl::Document & doc);

struct Violation
{
  std::string property;
  std::string rule;  // one of the codes above
  std::string detail;
};

struct ReificationResult
{
  std::vector<Violation> violations;
  std::vector<std::pair<std::string, Scalar>> defaults;
  bool ok() const { return violations.empty(); }
};

/// Checks an individual against its model. Relation targets are looked up in `registry`.
ReificationResult validate_reification(const ModelRegistry & registry, const bsl::IndividualDecl & draft);

/// View schema loaded at engine start: the View concept and the properties its model uses.
std::string_view builtin_genesis_source();

/// A registry holding only the built-in View schema.
const ModelRegistry & builtin_registry();

}  // namespace eo::models
