#pragma once

// Typed attack-context and attack-scenario model.
//
// A ContextGraph interns resources (name + kind) and the labeled relations
// between them; an AttackPath is an ordered chain of transitions whose
// conditions are Properties over those resources. Every value here is
// immutable once built; the builders are the only way in, and they reject
// anything that would leave a dangling or ill-typed reference behind.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "atk/error.hpp"

namespace atk {

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

enum class ResourceKind : std::uint8_t {
  Agent,
  Owner,
  DataAsset,
  Network,
  Device,
  Software,
  RuntimeHost,
  Service,
  Interface,
  Functionality,
};

inline constexpr std::array<ResourceKind, 10> kAllResourceKinds = {
    ResourceKind::Agent,   ResourceKind::Owner,       ResourceKind::DataAsset, ResourceKind::Network,
    ResourceKind::Device,  ResourceKind::Software,    ResourceKind::RuntimeHost,
    ResourceKind::Service, ResourceKind::Interface,   ResourceKind::Functionality,
};

inline constexpr std::string_view to_string(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::Agent: return "Agent";
    case ResourceKind::Owner: return "Owner";
    case ResourceKind::DataAsset: return "DataAsset";
    case ResourceKind::Network: return "Network";
    case ResourceKind::Device: return "Device";
    case ResourceKind::Software: return "Software";
    case ResourceKind::RuntimeHost: return "RuntimeHost";
    case ResourceKind::Service: return "Service";
    case ResourceKind::Interface: return "Interface";
    case ResourceKind::Functionality: return "Functionality";
  }
  return "?";
}

inline std::optional<ResourceKind> resource_kind_from_string(std::string_view text) {
  for (ResourceKind kind : kAllResourceKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

/// Agents, owners and data are the non-technological resources.
inline constexpr bool is_technological(ResourceKind kind) {
  return kind != ResourceKind::Agent && kind != ResourceKind::Owner && kind != ResourceKind::DataAsset;
}

enum class RelationLabel : std::uint8_t {
  pluggedIn,
  logicallyConnectedTo,
  installedOn,
  isExecutionOf,
  hostedOn,
  connectedToNetwork,
  providesService,
  givesAccessTo,
  offersFunctionality,
  actsOn,
  operates,
  owns,
  stores,
  contains,
  knows,
};

inline constexpr std::array<RelationLabel, 15> kAllRelationLabels = {
    RelationLabel::pluggedIn,       RelationLabel::logicallyConnectedTo, RelationLabel::installedOn,
    RelationLabel::isExecutionOf,   RelationLabel::hostedOn,             RelationLabel::connectedToNetwork,
    RelationLabel::providesService, RelationLabel::givesAccessTo,        RelationLabel::offersFunctionality,
    RelationLabel::actsOn,          RelationLabel::operates,             RelationLabel::owns,
    RelationLabel::stores,          RelationLabel::contains,             RelationLabel::knows,
};

inline constexpr std::string_view to_string(RelationLabel label) {
  switch (label) {
    case RelationLabel::pluggedIn: return "pluggedIn";
    case RelationLabel::logicallyConnectedTo: return "logicallyConnectedTo";
    case RelationLabel::installedOn: return "installedOn";
    case RelationLabel::isExecutionOf: return "isExecutionOf";
    case RelationLabel::hostedOn: return "hostedOn";
    case RelationLabel::connectedToNetwork: return "connectedToNetwork";
    case RelationLabel::providesService: return "providesService";
    case RelationLabel::givesAccessTo: return "givesAccessTo";
    case RelationLabel::offersFunctionality: return "offersFunctionality";
    case RelationLabel::actsOn: return "actsOn";
    case RelationLabel::operates: return "operates";
    case RelationLabel::owns: return "owns";
    case RelationLabel::stores: return "stores";
    case RelationLabel::contains: return "contains";
    case RelationLabel::knows: return "knows";
  }
  return "?";
}

inline std::optional<RelationLabel> relation_label_from_string(std::string_view text) {
  for (RelationLabel label : kAllRelationLabels) {
    if (to_string(label) == text) return label;
  }
  return std::nullopt;
}

using KindSet = std::uint16_t;

inline constexpr KindSet kind_bit(ResourceKind kind) { return static_cast<KindSet>(1u << static_cast<unsigned>(kind)); }

inline constexpr KindSet kTechnologicalKinds = [] {
  KindSet set = 0;
  for (ResourceKind kind : kAllResourceKinds) {
    if (is_technological(kind)) set |= kind_bit(kind);
  }
  return set;
}();

/// Allowed (source kinds, target kinds) for one relation label.
struct RelationSignature {
  KindSet sources;
  KindSet targets;
};

inline constexpr RelationSignature signature_of(RelationLabel label) {
  using K = ResourceKind;
  switch (label) {
    case RelationLabel::pluggedIn: return {kind_bit(K::Device), kind_bit(K::Device)};
    case RelationLabel::logicallyConnectedTo: return {kind_bit(K::Device), kind_bit(K::RuntimeHost)};
    case RelationLabel::installedOn:
      return {kind_bit(K::Software), static_cast<KindSet>(kind_bit(K::RuntimeHost) | kind_bit(K::Device))};
    case RelationLabel::isExecutionOf: return {kind_bit(K::RuntimeHost), kind_bit(K::Software)};
    case RelationLabel::hostedOn: return {kind_bit(K::RuntimeHost), kind_bit(K::Device)};
    case RelationLabel::connectedToNetwork: return {kind_bit(K::RuntimeHost), kind_bit(K::Network)};
    case RelationLabel::providesService: return {kind_bit(K::RuntimeHost), kind_bit(K::Service)};
    case RelationLabel::givesAccessTo: return {kind_bit(K::Interface), kind_bit(K::Service)};
    case RelationLabel::offersFunctionality: return {kind_bit(K::Service), kind_bit(K::Functionality)};
    case RelationLabel::actsOn: return {kind_bit(K::Functionality), kind_bit(K::DataAsset)};
    case RelationLabel::operates: return {kind_bit(K::Agent), kind_bit(K::RuntimeHost)};
    case RelationLabel::owns: return {kind_bit(K::Owner), kTechnologicalKinds};
    case RelationLabel::stores:
      return {static_cast<KindSet>(kind_bit(K::RuntimeHost) | kind_bit(K::Service)), kind_bit(K::DataAsset)};
    case RelationLabel::contains: return {kind_bit(K::DataAsset), kind_bit(K::DataAsset)};
    case RelationLabel::knows: return {kind_bit(K::Agent), kind_bit(K::DataAsset)};
  }
  return {0, 0};
}

inline constexpr bool signature_allows(RelationLabel label, ResourceKind source, ResourceKind target) {
  const RelationSignature sig = signature_of(label);
  return (sig.sources & kind_bit(source)) != 0 && (sig.targets & kind_bit(target)) != 0;
}

enum class InterfaceState : std::uint8_t { Active, Inactive };

inline constexpr std::string_view to_string(InterfaceState state) {
  return state == InterfaceState::Active ? "active" : "inactive";
}

inline InterfaceState interface_state_from_string(std::string_view text) {
  if (text == "active") return InterfaceState::Active;
  if (text == "inactive") return InterfaceState::Inactive;
  throw Error(ErrorCode::InvalidStateValue,
              "isInState admits only 'active' or 'inactive', got '" + std::string(text) + "'");
}

enum class ReasoningOperator : std::uint8_t { Assumes, Concludes };

inline constexpr std::string_view to_string(ReasoningOperator op) {
  return op == ReasoningOperator::Assumes ? "assumes" : "concludes";
}

namespace unit_label {
inline constexpr std::string_view kIsInState = "isInState";
inline constexpr std::string_view kIsGranted = "IsGranted";
inline constexpr std::string_view kAssumes = "assumes";
inline constexpr std::string_view kConcludes = "concludes";
}  // namespace unit_label

inline std::optional<ReasoningOperator> reasoning_operator_from_label(std::string_view label) {
  if (label == unit_label::kAssumes) return ReasoningOperator::Assumes;
  if (label == unit_label::kConcludes) return ReasoningOperator::Concludes;
  return std::nullopt;
}

inline bool is_reserved_unit_label(std::string_view label) {
  return label == unit_label::kIsInState || label == unit_label::kIsGranted || label == unit_label::kAssumes ||
         label == unit_label::kConcludes;
}

/// Identifiers end up as YAML keys, node names and task labels, so they must
/// not contain whitespace or any of `:` `,` `"`.
inline bool is_valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f' || c == ':' || c == ',' ||
           c == '"';
  });
}

inline void require_identifier(std::string_view name, std::string_view what) {
  if (!is_valid_identifier(name)) {
    throw Error(ErrorCode::InvalidName, std::string(what) + " '" + std::string(name) +
                                            "' must be non-empty without whitespace, ':', ',' or '\"'");
  }
}

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

struct Property;

struct BetweenProperty {
  std::string source;
  RelationLabel label;
  std::string target;

  friend auto operator<=>(const BetweenProperty&, const BetweenProperty&) = default;
};

struct GrantValue {
  std::string functionality;
  friend auto operator<=>(const GrantValue&, const GrantValue&) = default;
};

struct ScalarValue {
  std::string text;
  friend auto operator<=>(const ScalarValue&, const ScalarValue&) = default;
};

/// A nested fact held by an agent reasoning property.
struct FactValue {
  std::shared_ptr<const Property> fact;

  friend bool operator==(const FactValue& a, const FactValue& b);
  friend std::strong_ordering operator<=>(const FactValue& a, const FactValue& b);
};

using UnitValue = std::variant<InterfaceState, GrantValue, FactValue, ScalarValue>;

/// A labeled, valued characterization of one resource. The label decides the
/// value alternative: isInState -> InterfaceState, IsGranted -> GrantValue,
/// assumes/concludes -> FactValue, any other label -> ScalarValue.
struct UnitProperty {
  std::string subject;
  std::string label;
  UnitValue value;

  friend bool operator==(const UnitProperty&, const UnitProperty&) = default;
  friend std::strong_ordering operator<=>(const UnitProperty& a, const UnitProperty& b) {
    if (auto c = a.subject <=> b.subject; c != 0) return c;
    if (auto c = a.label <=> b.label; c != 0) return c;
    return a.value <=> b.value;
  }

  /// isInState and scalar labels hold one value per (subject, label).
  bool single_valued() const {
    return std::holds_alternative<InterfaceState>(value) || std::holds_alternative<ScalarValue>(value);
  }
};

struct Property {
  std::variant<BetweenProperty, UnitProperty> form;

  Property(BetweenProperty between) : form(std::move(between)) {}
  Property(UnitProperty unit) : form(std::move(unit)) {}

  bool is_between() const { return std::holds_alternative<BetweenProperty>(form); }
  const BetweenProperty& between() const { return std::get<BetweenProperty>(form); }
  const UnitProperty& unit() const { return std::get<UnitProperty>(form); }

  friend bool operator==(const Property&, const Property&) = default;
  friend std::strong_ordering operator<=>(const Property& a, const Property& b) {
    if (a.form.index() != b.form.index()) return a.form.index() <=> b.form.index();
    if (a.is_between()) return a.between() <=> b.between();
    return a.unit() <=> b.unit();
  }
};

inline bool operator==(const FactValue& a, const FactValue& b) {
  if (!a.fact || !b.fact) return a.fact == b.fact;
  return *a.fact == *b.fact;
}

inline std::strong_ordering operator<=>(const FactValue& a, const FactValue& b) {
  if (!a.fact || !b.fact) return static_cast<bool>(a.fact) <=> static_cast<bool>(b.fact);
  return *a.fact <=> *b.fact;
}

using PropertySet = std::set<Property>;

inline Property between(std::string source, RelationLabel label, std::string target) {
  return BetweenProperty{std::move(source), label, std::move(target)};
}

inline Property in_state(std::string interface_name, InterfaceState state) {
  return UnitProperty{std::move(interface_name), std::string(unit_label::kIsInState), state};
}

inline Property granted(std::string agent, std::string functionality) {
  return UnitProperty{std::move(agent), std::string(unit_label::kIsGranted), GrantValue{std::move(functionality)}};
}

inline Property reasoning(std::string agent, ReasoningOperator op, Property fact) {
  return UnitProperty{std::move(agent), std::string(to_string(op)),
                      FactValue{std::make_shared<const Property>(std::move(fact))}};
}

inline Property scalar(std::string subject, std::string label, std::string text) {
  return UnitProperty{std::move(subject), std::move(label), ScalarValue{std::move(text)}};
}

/// Compact text form, e.g. `givesAccessTo(SSHPort, SSHService)` or
/// `isInState(SSHPort) = active`.
inline std::string to_string(const Property& property) {
  if (property.is_between()) {
    const auto& b = property.between();
    return std::string(to_string(b.label)) + "(" + b.source + ", " + b.target + ")";
  }
  const auto& u = property.unit();
  std::string out = u.label + "(" + u.subject + ") = ";
  std::visit(
      [&out](const auto& value) {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, InterfaceState>) {
          out += to_string(value);
        } else if constexpr (std::is_same_v<T, GrantValue>) {
          out += value.functionality;
        } else if constexpr (std::is_same_v<T, FactValue>) {
          out += value.fact ? to_string(*value.fact) : std::string("<null>");
        } else {
          out += "\"" + value.text + "\"";
        }
      },
      u.value);
  return out;
}

/// Every resource name mentioned by a property, nested facts included.
inline void collect_resource_names(const Property& property, std::vector<std::string>& out) {
  if (property.is_between()) {
    out.push_back(property.between().source);
    out.push_back(property.between().target);
    return;
  }
  const auto& u = property.unit();
  out.push_back(u.subject);
  if (const auto* grant = std::get_if<GrantValue>(&u.value)) out.push_back(grant->functionality);
  if (const auto* fact = std::get_if<FactValue>(&u.value); fact && fact->fact) {
    collect_resource_names(*fact->fact, out);
  }
}

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

struct ResourceId {
  std::string name;
  ResourceKind kind;

  friend auto operator<=>(const ResourceId&, const ResourceId&) = default;
};

struct ContextRelation {
  std::string source;
  RelationLabel label;
  std::string target;

  friend auto operator<=>(const ContextRelation&, const ContextRelation&) = default;
};

inline std::string to_string(const ContextRelation& relation) {
  return relation.source + " " + std::string(to_string(relation.label)) + " " + relation.target;
}

class ContextBuilder;

/// Interned resources plus labeled relations. Resource names are
/// case-sensitive.
class ContextGraph {
 public:
  ContextGraph() = default;

  const std::map<std::string, ResourceKind, std::less<>>& resources() const { return resources_; }
  const std::set<ContextRelation>& relations() const { return relations_; }
  bool empty() const { return resources_.empty() && relations_.empty(); }

  std::optional<ResourceId> lookup(std::string_view name) const {
    auto it = resources_.find(name);
    if (it == resources_.end()) return std::nullopt;
    return ResourceId{it->first, it->second};
  }

  std::vector<std::string> resources_of_kind(ResourceKind kind) const {
    std::vector<std::string> out;
    for (const auto& [name, k] : resources_) {
      if (k == kind) out.push_back(name);
    }
    return out;
  }

  /// Targets of `source --label--> *`, in name order.
  std::vector<std::string> targets(std::string_view source, RelationLabel label) const {
    std::vector<std::string> out;
    for (const auto& r : relations_) {
      if (r.source == source && r.label == label) out.push_back(r.target);
    }
    return out;
  }

  std::vector<ContextRelation> relations_with(RelationLabel label) const {
    std::vector<ContextRelation> out;
    for (const auto& r : relations_) {
      if (r.label == label) out.push_back(r);
    }
    return out;
  }

  friend bool operator==(const ContextGraph&, const ContextGraph&) = default;

 private:
  friend class ContextBuilder;
  std::map<std::string, ResourceKind, std::less<>> resources_;
  std::set<ContextRelation> relations_;
};

/// Incremental construction; each add_* call checks the declaration it is
/// given so errors point at the offending one.
class ContextBuilder {
 public:
  ContextBuilder& add_resource(std::string name, ResourceKind kind) {
    require_identifier(name, "resource name");
    if (graph_.resources_.contains(name)) {
      throw Error(ErrorCode::DuplicateResource, "resource '" + name + "' declared twice");
    }
    graph_.resources_.emplace(std::move(name), kind);
    return *this;
  }

  /// Resources must already be declared.
  ContextBuilder& add_relation(std::string source, RelationLabel label, std::string target) {
    ContextRelation relation{std::move(source), label, std::move(target)};
    const auto src = graph_.lookup(relation.source);
    const auto dst = graph_.lookup(relation.target);
    if (!src || !dst) {
      throw Error(ErrorCode::UnknownEndpoint, "relation '" + to_string(relation) + "' references undeclared '" +
                                                  (src ? relation.target : relation.source) + "'");
    }
    if (relation.source == relation.target) {
      throw Error(ErrorCode::SignatureViolation, "relation '" + to_string(relation) + "' is a self-loop");
    }
    if (!signature_allows(label, src->kind, dst->kind)) {
      throw Error(ErrorCode::SignatureViolation,
                  "relation '" + to_string(relation) + "': " + std::string(to_string(label)) + " does not accept " +
                      std::string(to_string(src->kind)) + " -> " + std::string(to_string(dst->kind)));
    }
    if (graph_.relations_.contains(relation)) {
      throw Error(ErrorCode::DuplicateRelation, "relation '" + to_string(relation) + "' declared twice");
    }
    if (label == RelationLabel::isExecutionOf || label == RelationLabel::hostedOn) {
      if (!graph_.targets(relation.source, label).empty()) {
        throw Error(ErrorCode::CardinalityViolation, "runtime-host '" + relation.source + "' already has a " +
                                                         std::string(to_string(label)) + " relation");
      }
    }
    graph_.relations_.insert(std::move(relation));
    return *this;
  }

  const ContextGraph& peek() const { return graph_; }
  ContextGraph build() && { return std::move(graph_); }
  ContextGraph build() const& { return graph_; }

 private:
  ContextGraph graph_;
};

struct ResourceDeclaration {
  std::string name;
  ResourceKind kind;
};

struct RelationDeclaration {
  std::string source;
  RelationLabel label;
  std::string target;
};

using Declaration = std::variant<ResourceDeclaration, RelationDeclaration>;

/// Resources are interned first, then relations, so declaration order does
/// not matter. Errors are prefixed with the declaration's position.
inline ContextGraph build_context(std::span<const Declaration> declarations) {
  ContextBuilder builder;
  auto wrap = [](std::size_t index, const Error& e) {
    return Error(e.code(), "declaration #" + std::to_string(index + 1) + ": " + e.detail());
  };
  for (std::size_t i = 0; i < declarations.size(); ++i) {
    if (const auto* r = std::get_if<ResourceDeclaration>(&declarations[i])) {
      try {
        builder.add_resource(r->name, r->kind);
      } catch (const Error& e) {
        throw wrap(i, e);
      }
    }
  }
  for (std::size_t i = 0; i < declarations.size(); ++i) {
    if (const auto* r = std::get_if<RelationDeclaration>(&declarations[i])) {
      try {
        builder.add_relation(r->source, r->label, r->target);
      } catch (const Error& e) {
        throw wrap(i, e);
      }
    }
  }
  return std::move(builder).build();
}

inline std::optional<ResourceId> lookup_resource(const ContextGraph& context, std::string_view name) {
  return context.lookup(name);
}

// ---------------------------------------------------------------------------
// Property validation
// ---------------------------------------------------------------------------

namespace detail {

inline ResourceId require_resource(const ContextGraph& context, const std::string& name, const Property& where) {
  auto id = context.lookup(name);
  if (!id) {
    throw Error(ErrorCode::DanglingResource, "'" + name + "' in " + to_string(where) + " is not declared");
  }
  return *id;
}

inline void check_property(const ContextGraph& context, const Property& property) {
  if (property.is_between()) {
    const auto& b = property.between();
    const auto src = require_resource(context, b.source, property);
    const auto dst = require_resource(context, b.target, property);
    if (b.source == b.target || !signature_allows(b.label, src.kind, dst.kind)) {
      throw Error(ErrorCode::SignatureViolation, to_string(property) + ": " + std::string(to_string(b.label)) +
                                                     " does not accept " + std::string(to_string(src.kind)) +
                                                     " -> " + std::string(to_string(dst.kind)));
    }
    return;
  }
  const auto& u = property.unit();
  const auto subject = require_resource(context, u.subject, property);
  auto violation = [&](const std::string& why) { return Error(ErrorCode::SignatureViolation, to_string(property) + ": " + why); };

  if (u.label == unit_label::kIsInState) {
    if (!std::holds_alternative<InterfaceState>(u.value)) throw violation("isInState takes an interface state");
    if (subject.kind != ResourceKind::Interface) throw violation("isInState applies only to Interfaces");
  } else if (u.label == unit_label::kIsGranted) {
    const auto* grant = std::get_if<GrantValue>(&u.value);
    if (!grant) throw violation("IsGranted takes a Functionality");
    if (subject.kind != ResourceKind::Agent) throw violation("IsGranted applies only to Agents");
    if (require_resource(context, grant->functionality, property).kind != ResourceKind::Functionality) {
      throw violation("'" + grant->functionality + "' is not a Functionality");
    }
  } else if (reasoning_operator_from_label(u.label)) {
    const auto* fact = std::get_if<FactValue>(&u.value);
    if (!fact || !fact->fact) throw violation(u.label + " takes a nested fact");
    if (subject.kind != ResourceKind::Agent) throw violation("reasoning properties apply only to Agents");
    check_property(context, *fact->fact);
  } else {
    require_identifier(u.label, "scalar label");
    if (!std::holds_alternative<ScalarValue>(u.value)) throw violation("scalar label '" + u.label + "' takes a string");
  }
}

}  // namespace detail

/// Returns `candidate` after checking it against the context's resources and
/// the label/value rules.
inline Property make_property(const ContextGraph& context, Property candidate) {
  detail::check_property(context, candidate);
  return candidate;
}

/// Builds a unit property from a textual value: isInState parses
/// active/inactive, IsGranted takes a functionality name, other labels are
/// scalars. Reasoning labels need a nested Property; use reasoning().
inline Property make_unit_property(const ContextGraph& context, std::string subject, std::string label,
                                   std::string_view value) {
  if (label == unit_label::kIsInState) {
    return make_property(context, in_state(std::move(subject), interface_state_from_string(value)));
  }
  if (label == unit_label::kIsGranted) {
    return make_property(context, granted(std::move(subject), std::string(value)));
  }
  if (reasoning_operator_from_label(label)) {
    throw Error(ErrorCode::SignatureViolation, label + " requires a nested fact, not '" + std::string(value) + "'");
  }
  return make_property(context, scalar(std::move(subject), std::move(label), std::string(value)));
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

struct ActionName {
  std::string verb;
  bool mutates = false;

  friend auto operator<=>(const ActionName&, const ActionName&) = default;
};

/// Verbs declared by a document, on top of the built-in defaults. A declared
/// verb overrides a built-in one of the same name.
class ActionVocabulary {
 public:
  static const std::map<std::string, bool, std::less<>>& builtins() {
    static const std::map<std::string, bool, std::less<>> kBuiltins = {
        {"scans", false}, {"claims", false}, {"stores", true},
        {"sends", true},  {"reads", false},  {"authenticates", true},
    };
    return kBuiltins;
  }

  void declare(std::string verb, bool mutates) {
    require_identifier(verb, "action verb");
    declared_[std::move(verb)] = mutates;
  }

  std::optional<ActionName> find(std::string_view verb) const {
    if (auto it = declared_.find(verb); it != declared_.end()) return ActionName{it->first, it->second};
    if (auto it = builtins().find(verb); it != builtins().end()) return ActionName{it->first, it->second};
    return std::nullopt;
  }

  bool contains(std::string_view verb) const { return find(verb).has_value(); }
  const std::map<std::string, bool, std::less<>>& declared() const { return declared_; }

  friend bool operator==(const ActionVocabulary&, const ActionVocabulary&) = default;

 private:
  std::map<std::string, bool, std::less<>> declared_;
};

struct Trigger {
  std::string agent;
  ActionName action;

  friend auto operator<=>(const Trigger&, const Trigger&) = default;
};

struct AttackTransition {
  std::string name;
  std::string description;
  Trigger trigger;
  PropertySet preconditions;
  PropertySet postconditions;
  std::vector<std::string> internal_tasks;

  friend bool operator==(const AttackTransition&, const AttackTransition&) = default;
};

struct AttackStep {
  int sequence_index = 0;
  AttackTransition transition;

  friend bool operator==(const AttackStep&, const AttackStep&) = default;
};

/// Steps are held in index order 1..n.
struct AttackPath {
  std::string name;
  std::string description;
  PropertySet objectives;
  PropertySet prerequisites;
  std::vector<AttackStep> steps;
  std::optional<std::string> goal_tag;
  ActionVocabulary vocabulary;

  friend bool operator==(const AttackPath&, const AttackPath&) = default;
};

/// A full snapshot of the context state between two transitions.
struct Position {
  std::string id;
  PropertySet state;

  friend bool operator==(const Position&, const Position&) = default;
};

struct TransitionSpec {
  std::string name;
  std::string description;
  std::string agent;
  std::string verb;
  PropertySet preconditions;
  PropertySet postconditions;
  std::vector<std::string> internal_tasks;
};

struct StepSpec {
  int sequence_index = 0;
  TransitionSpec transition;
};

struct PathSpec {
  std::string name;
  std::string description;
  PropertySet objectives;
  PropertySet prerequisites;
  std::vector<StepSpec> steps;
  std::optional<std::string> goal_tag;
  ActionVocabulary vocabulary;
};

struct PathBuildOptions {
  /// Imported skeletons carry no objectives until they are enriched.
  bool allow_empty_objectives = false;
};

/// Orders steps by index, resolves trigger verbs against the vocabulary and
/// checks every referenced resource. Undeclared verbs resolve to
/// non-mutating actions; the validator reports them.
inline AttackPath build_attack_path(PathSpec spec, const ContextGraph& context, PathBuildOptions options = {}) {
  require_identifier(spec.name, "attack path name");
  if (spec.objectives.empty() && !options.allow_empty_objectives) {
    throw Error(ErrorCode::EmptyObjectives, "attack path '" + spec.name + "' has no objectives");
  }

  auto check_all = [&context](const PropertySet& set, const std::string& where) {
    for (const auto& p : set) {
      try {
        detail::check_property(context, p);
      } catch (const Error& e) {
        throw Error(e.code(), where + ": " + e.detail());
      }
    }
  };
  check_all(spec.objectives, "objective");
  check_all(spec.prerequisites, "prerequisite");

  std::stable_sort(spec.steps.begin(), spec.steps.end(),
                   [](const StepSpec& a, const StepSpec& b) { return a.sequence_index < b.sequence_index; });
  for (std::size_t i = 0; i < spec.steps.size(); ++i) {
    if (spec.steps[i].sequence_index != static_cast<int>(i + 1)) {
      std::string got;
      for (const auto& s : spec.steps) got += (got.empty() ? "" : ",") + std::to_string(s.sequence_index);
      throw Error(ErrorCode::NonContiguousIndices, "step indices {" + got + "} are not exactly 1.." +
                                                       std::to_string(spec.steps.size()));
    }
  }

  AttackPath path;
  path.name = std::move(spec.name);
  path.description = std::move(spec.description);
  path.objectives = std::move(spec.objectives);
  path.prerequisites = std::move(spec.prerequisites);
  path.goal_tag = std::move(spec.goal_tag);
  path.vocabulary = std::move(spec.vocabulary);

  std::set<std::string, std::less<>> seen;
  for (auto& step : spec.steps) {
    auto& t = step.transition;
    const std::string where = "step " + std::to_string(step.sequence_index) + " (" + t.name + ")";
    require_identifier(t.name, "transition name");
    if (!seen.insert(t.name).second) {
      throw Error(ErrorCode::DuplicateStepName, "transition name '" + t.name + "' used by more than one step");
    }
    const auto agent = context.lookup(t.agent);
    if (!agent) throw Error(ErrorCode::DanglingResource, where + ": trigger agent '" + t.agent + "' is not declared");
    if (agent->kind != ResourceKind::Agent) {
      throw Error(ErrorCode::SignatureViolation, where + ": trigger '" + t.agent + "' is not an Agent");
    }
    require_identifier(t.verb, "action verb");
    check_all(t.preconditions, where + " precondition");
    check_all(t.postconditions, where + " postcondition");

    ActionName action = path.vocabulary.find(t.verb).value_or(ActionName{t.verb, false});
    path.steps.push_back(AttackStep{
        step.sequence_index,
        AttackTransition{std::move(t.name), std::move(t.description), Trigger{std::move(t.agent), std::move(action)},
                         std::move(t.preconditions), std::move(t.postconditions), std::move(t.internal_tasks)}});
  }
  return path;
}

/// The RuntimeHost an agent operates, if it has exactly one.
inline std::optional<std::string> operated_host(const ContextGraph& context, std::string_view agent) {
  auto hosts = context.targets(agent, RelationLabel::operates);
  if (hosts.size() != 1) return std::nullopt;
  return hosts.front();
}

}  // namespace atk
