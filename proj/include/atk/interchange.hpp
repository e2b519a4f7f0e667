#pragma once

// Scenario document I/O, neutral property-graph view, and graph-store load
// script export. The document key layout is described in docs/format.md.

#include <algorithm>
#include <initializer_list>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "atk/domain.hpp"

namespace atk {

inline constexpr std::string_view kFormatVersion = "1";

/// A context together with the attack path written against it.
struct Scenario {
  ContextGraph context;
  AttackPath path;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------------------
// Reading
// ---------------------------------------------------------------------------

namespace detail {

inline std::string location(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.is_null()) return "document";
  return "line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1);
}

inline Error parse_error(const YAML::Node& node, const std::string& what) {
  return Error(ErrorCode::ParseError, location(node) + ": " + what);
}

inline Error located(const YAML::Node& node, const Error& e) { return Error(e.code(), location(node) + ": " + e.detail()); }

inline void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) throw parse_error(node, "expected a mapping");
  for (const auto& entry : node) {
    const auto key = entry.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw parse_error(entry.first, "unknown key '" + key + "'");
    }
  }
}

inline std::string required_string(const YAML::Node& map, const char* key) {
  const auto node = map[key];
  if (!node) throw parse_error(map, std::string("missing '") + key + "'");
  if (!node.IsScalar()) throw parse_error(node, std::string("'") + key + "' must be a scalar");
  return node.as<std::string>();
}

inline std::string optional_string(const YAML::Node& map, const char* key) {
  const auto node = map[key];
  if (!node || node.IsNull()) return {};
  if (!node.IsScalar()) throw parse_error(node, std::string("'") + key + "' must be a scalar");
  return node.as<std::string>();
}

inline YAML::Node optional_sequence(const YAML::Node& map, const char* key) {
  const auto node = map[key];
  if (!node || node.IsNull()) return YAML::Node(YAML::NodeType::Sequence);
  if (!node.IsSequence()) throw parse_error(node, std::string("'") + key + "' must be a list");
  return node;
}

inline Property read_condition(const YAML::Node& node) {
  check_keys(node, {"between", "unit"});
  if (node.size() != 1) throw parse_error(node, "a condition is exactly one of 'between' or 'unit'");
  if (const auto b = node["between"]) {
    check_keys(b, {"source", "label", "target"});
    const auto label_text = required_string(b, "label");
    const auto label = relation_label_from_string(label_text);
    if (!label) throw parse_error(b["label"], "unknown relation label '" + label_text + "'");
    return between(required_string(b, "source"), *label, required_string(b, "target"));
  }
  const auto u = node["unit"];
  check_keys(u, {"subject", "label", "value"});
  auto subject = required_string(u, "subject");
  auto label = required_string(u, "label");
  const auto value = u["value"];
  if (!value) throw parse_error(u, "missing 'value'");
  check_keys(value, {"state", "grant", "fact", "scalar"});
  if (value.size() != 1) throw parse_error(value, "value is exactly one of state, grant, fact or scalar");

  auto mismatch = [&](const char* tag) {
    return parse_error(value, "label '" + label + "' does not take a '" + tag + "' value");
  };
  if (const auto state = value["state"]) {
    if (label != unit_label::kIsInState) throw mismatch("state");
    try {
      return in_state(std::move(subject), interface_state_from_string(state.as<std::string>()));
    } catch (const Error& e) {
      throw located(state, e);
    }
  }
  if (const auto grant = value["grant"]) {
    if (label != unit_label::kIsGranted) throw mismatch("grant");
    return granted(std::move(subject), grant.as<std::string>());
  }
  if (const auto fact = value["fact"]) {
    const auto op = reasoning_operator_from_label(label);
    if (!op) throw mismatch("fact");
    return reasoning(std::move(subject), *op, read_condition(fact));
  }
  if (is_reserved_unit_label(label)) throw mismatch("scalar");
  return scalar(std::move(subject), std::move(label), value["scalar"].as<std::string>());
}

inline PropertySet read_conditions(const YAML::Node& map, const char* key, const ContextGraph& context) {
  PropertySet out;
  for (const auto& node : optional_sequence(map, key)) {
    auto property = read_condition(node);
    try {
      detail::check_property(context, property);
    } catch (const Error& e) {
      throw located(node, e);
    }
    out.insert(std::move(property));
  }
  return out;
}

}  // namespace detail

/// Parses and fully constructs a scenario. Errors carry the line/column of
/// the offending node. Empty objectives are accepted only on imported paths
/// (those carrying a goal tag), which the validator then flags.
inline Scenario read_document(const std::string& text) {
  using namespace detail;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!root.IsMap()) throw parse_error(root, "document must be a mapping");

  try {
    check_keys(root, {"format_version", "actions", "context", "scenario"});
    const auto version = required_string(root, "format_version");
    if (version != kFormatVersion) {
      throw parse_error(root["format_version"], "unsupported format_version '" + version + "' (expected '" +
                                                    std::string(kFormatVersion) + "')");
    }

    ActionVocabulary vocabulary;
    for (const auto& node : optional_sequence(root, "actions")) {
      check_keys(node, {"verb", "mutates"});
      try {
        vocabulary.declare(required_string(node, "verb"), node["mutates"] && node["mutates"].as<bool>());
      } catch (const Error& e) {
        throw located(node, e);
      }
    }

    ContextBuilder builder;
    const auto context_node = root["context"];
    if (context_node && !context_node.IsNull()) {
      check_keys(context_node, {"resources", "relations"});
      for (const auto& node : optional_sequence(context_node, "resources")) {
        check_keys(node, {"name", "kind"});
        const auto kind_text = required_string(node, "kind");
        const auto kind = resource_kind_from_string(kind_text);
        if (!kind) throw parse_error(node["kind"], "unknown resource kind '" + kind_text + "'");
        try {
          builder.add_resource(required_string(node, "name"), *kind);
        } catch (const Error& e) {
          throw located(node, e);
        }
      }
      for (const auto& node : optional_sequence(context_node, "relations")) {
        check_keys(node, {"source", "label", "target"});
        const auto label_text = required_string(node, "label");
        const auto label = relation_label_from_string(label_text);
        if (!label) throw parse_error(node["label"], "unknown relation label '" + label_text + "'");
        try {
          builder.add_relation(required_string(node, "source"), *label, required_string(node, "target"));
        } catch (const Error& e) {
          throw located(node, e);
        }
      }
    }
    ContextGraph context = std::move(builder).build();

    const auto scenario_node = root["scenario"];
    if (!scenario_node) throw parse_error(root, "missing 'scenario'");
    check_keys(scenario_node, {"attack_path"});
    const auto path_node = scenario_node["attack_path"];
    if (!path_node) throw parse_error(scenario_node, "missing 'attack_path'");
    check_keys(path_node, {"name", "description", "goal", "objectives", "prerequisites", "steps"});

    PathSpec spec;
    spec.name = required_string(path_node, "name");
    spec.description = optional_string(path_node, "description");
    if (path_node["goal"]) spec.goal_tag = required_string(path_node, "goal");
    spec.objectives = read_conditions(path_node, "objectives", context);
    spec.prerequisites = read_conditions(path_node, "prerequisites", context);
    spec.vocabulary = std::move(vocabulary);

    for (const auto& node : optional_sequence(path_node, "steps")) {
      check_keys(node, {"index", "name", "description", "trigger", "preconditions", "postconditions",
                        "internal_tasks"});
      StepSpec step;
      try {
        step.sequence_index = node["index"].as<int>();
      } catch (const YAML::Exception&) {
        throw parse_error(node, "step needs an integer 'index'");
      }
      auto& t = step.transition;
      t.name = required_string(node, "name");
      t.description = optional_string(node, "description");
      const auto trigger = node["trigger"];
      if (!trigger) throw parse_error(node, "missing 'trigger'");
      check_keys(trigger, {"agent", "action"});
      t.agent = required_string(trigger, "agent");
      t.verb = required_string(trigger, "action");
      t.preconditions = read_conditions(node, "preconditions", context);
      t.postconditions = read_conditions(node, "postconditions", context);
      for (const auto& task : optional_sequence(node, "internal_tasks")) t.internal_tasks.push_back(task.as<std::string>());
      spec.steps.push_back(std::move(step));
    }

    PathBuildOptions options;
    options.allow_empty_objectives = spec.goal_tag.has_value();
    try {
      auto path = build_attack_path(std::move(spec), context, options);
      return Scenario{std::move(context), std::move(path)};
    } catch (const Error& e) {
      throw located(path_node, e);
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

namespace detail {

inline void write_condition(YAML::Emitter& out, const Property& property) {
  out << YAML::Flow << YAML::BeginMap;
  if (property.is_between()) {
    const auto& b = property.between();
    out << YAML::Key << "between" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "source" << YAML::Value << b.source;
    out << YAML::Key << "label" << YAML::Value << std::string(to_string(b.label));
    out << YAML::Key << "target" << YAML::Value << b.target;
    out << YAML::EndMap;
  } else {
    const auto& u = property.unit();
    out << YAML::Key << "unit" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "subject" << YAML::Value << u.subject;
    out << YAML::Key << "label" << YAML::Value << u.label;
    out << YAML::Key << "value" << YAML::Value << YAML::BeginMap;
    std::visit(
        [&out](const auto& value) {
          using T = std::decay_t<decltype(value)>;
          if constexpr (std::is_same_v<T, InterfaceState>) {
            out << YAML::Key << "state" << YAML::Value << std::string(to_string(value));
          } else if constexpr (std::is_same_v<T, GrantValue>) {
            out << YAML::Key << "grant" << YAML::Value << value.functionality;
          } else if constexpr (std::is_same_v<T, FactValue>) {
            out << YAML::Key << "fact" << YAML::Value;
            write_condition(out, *value.fact);
          } else {
            out << YAML::Key << "scalar" << YAML::Value << YAML::DoubleQuoted << value.text;
          }
        },
        u.value);
    out << YAML::EndMap << YAML::EndMap;
  }
  out << YAML::EndMap;
}

inline void write_conditions(YAML::Emitter& out, const char* key, const PropertySet& set) {
  out << YAML::Key << key << YAML::Value;
  if (set.empty()) {
    out << YAML::Flow << YAML::BeginSeq << YAML::EndSeq;
    return;
  }
  out << YAML::Block << YAML::BeginSeq;
  for (const auto& p : set) write_condition(out, p);
  out << YAML::EndSeq;
}

}  // namespace detail

/// Canonical text: resources by name, relations sorted, conditions in
/// property order, steps by index. Declared verbs only; built-ins stay
/// implicit.
inline std::string write_document(const ContextGraph& context, const AttackPath& path) {
  YAML::Emitter out;
  out.SetIndent(2);
  out << YAML::BeginMap;
  out << YAML::Key << "format_version" << YAML::Value << YAML::DoubleQuoted << std::string(kFormatVersion);

  if (!path.vocabulary.declared().empty()) {
    out << YAML::Key << "actions" << YAML::Value << YAML::BeginSeq;
    for (const auto& [verb, mutates] : path.vocabulary.declared()) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "verb" << YAML::Value << verb << YAML::Key << "mutates"
          << YAML::Value << mutates << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  out << YAML::Key << "context" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "resources" << YAML::Value;
  if (context.resources().empty()) {
    out << YAML::Flow << YAML::BeginSeq << YAML::EndSeq;
  } else {
    out << YAML::Block << YAML::BeginSeq;
    for (const auto& [name, kind] : context.resources()) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value << name << YAML::Key << "kind"
          << YAML::Value << std::string(to_string(kind)) << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::Key << "relations" << YAML::Value;
  if (context.relations().empty()) {
    out << YAML::Flow << YAML::BeginSeq << YAML::EndSeq;
  } else {
    out << YAML::Block << YAML::BeginSeq;
    for (const auto& r : context.relations()) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "source" << YAML::Value << r.source << YAML::Key
          << "label" << YAML::Value << std::string(to_string(r.label)) << YAML::Key << "target" << YAML::Value
          << r.target << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;

  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "attack_path" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << path.name;
  out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << path.description;
  if (path.goal_tag) out << YAML::Key << "goal" << YAML::Value << *path.goal_tag;
  detail::write_conditions(out, "objectives", path.objectives);
  detail::write_conditions(out, "prerequisites", path.prerequisites);
  out << YAML::Key << "steps" << YAML::Value;
  if (path.steps.empty()) {
    out << YAML::Flow << YAML::BeginSeq << YAML::EndSeq;
  } else {
    out << YAML::Block << YAML::BeginSeq;
    for (const auto& step : path.steps) {
      const auto& t = step.transition;
      out << YAML::BeginMap;
      out << YAML::Key << "index" << YAML::Value << step.sequence_index;
      out << YAML::Key << "name" << YAML::Value << t.name;
      out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << t.description;
      out << YAML::Key << "trigger" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "agent"
          << YAML::Value << t.trigger.agent << YAML::Key << "action" << YAML::Value << t.trigger.action.verb
          << YAML::EndMap;
      detail::write_conditions(out, "preconditions", t.preconditions);
      detail::write_conditions(out, "postconditions", t.postconditions);
      if (!t.internal_tasks.empty()) {
        out << YAML::Key << "internal_tasks" << YAML::Value << YAML::BeginSeq;
        for (const auto& task : t.internal_tasks) out << YAML::DoubleQuoted << task;
        out << YAML::EndSeq;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

// ---------------------------------------------------------------------------
// Property-graph view
// ---------------------------------------------------------------------------

struct GraphNode {
  std::string id;
  std::vector<std::string> labels;
  std::map<std::string, std::string> properties;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::string source;
  std::string type;
  std::string target;
  std::map<std::string, std::string> properties;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Nodes sorted by id, edges by (source, type, target).
struct GraphDocument {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  bool empty() const { return nodes.empty() && edges.empty(); }
  friend bool operator==(const GraphDocument&, const GraphDocument&) = default;
};

namespace graph_label {
inline constexpr std::string_view kAttackPath = "AttackPath";
inline constexpr std::string_view kTransition = "AttackTransition";
inline constexpr std::string_view kPosition = "Position";
inline constexpr std::string_view kHasStep = "HAS_STEP";
inline constexpr std::string_view kFromPosition = "FROM_POSITION";
inline constexpr std::string_view kToPosition = "TO_POSITION";
}  // namespace graph_label

inline std::string path_node_id(std::string_view name) { return std::string(graph_label::kAttackPath) + ":" + std::string(name); }
inline std::string transition_node_id(std::string_view name) { return std::string(graph_label::kTransition) + ":" + std::string(name); }
inline std::string position_node_id(std::string_view id) { return std::string(graph_label::kPosition) + ":" + std::string(id); }

inline std::string join_conditions(const PropertySet& set) {
  std::string out;
  for (const auto& p : set) out += (out.empty() ? "" : "; ") + to_string(p);
  return out;
}

/// One node per resource, transition and position plus one for the path
/// (when it is named); one edge per context relation, per step link, and per
/// source/destination position link. Positions, when given, must number
/// steps + 1. Resource names cannot contain ':', so prefixed ids never clash.
inline GraphDocument to_graph(const ContextGraph& context, const AttackPath& path,
                              std::span<const Position> positions = {}) {
  if (!positions.empty() && positions.size() != path.steps.size() + 1) {
    throw Error(ErrorCode::ParseError, "to_graph: " + std::to_string(positions.size()) + " positions for " +
                                           std::to_string(path.steps.size()) + " steps");
  }
  GraphDocument doc;
  auto put = [](std::map<std::string, std::string>& props, const char* key, std::string value) {
    if (!value.empty()) props.emplace(key, std::move(value));
  };

  for (const auto& [name, kind] : context.resources()) {
    doc.nodes.push_back({name, {std::string(to_string(kind))}, {{"name", name}}});
  }
  for (const auto& r : context.relations()) doc.edges.push_back({r.source, std::string(to_string(r.label)), r.target, {}});

  if (!path.name.empty()) {
    GraphNode node{path_node_id(path.name), {std::string(graph_label::kAttackPath)}, {}};
    put(node.properties, "name", path.name);
    put(node.properties, "description", path.description);
    put(node.properties, "goal", path.goal_tag.value_or(""));
    put(node.properties, "objectives", join_conditions(path.objectives));
    put(node.properties, "prerequisites", join_conditions(path.prerequisites));
    doc.nodes.push_back(std::move(node));
  }

  for (const auto& step : path.steps) {
    const auto& t = step.transition;
    GraphNode node{transition_node_id(t.name), {std::string(graph_label::kTransition)}, {}};
    put(node.properties, "name", t.name);
    put(node.properties, "description", t.description);
    put(node.properties, "agent", t.trigger.agent);
    put(node.properties, "trigger", t.trigger.action.verb);
    put(node.properties, "mutates", t.trigger.action.mutates ? "true" : "false");
    put(node.properties, "preconditions", join_conditions(t.preconditions));
    put(node.properties, "postconditions", join_conditions(t.postconditions));
    std::string internal;
    for (const auto& task : t.internal_tasks) internal += (internal.empty() ? "" : "; ") + task;
    put(node.properties, "internal_tasks", internal);
    doc.nodes.push_back(std::move(node));
    doc.edges.push_back({path_node_id(path.name), std::string(graph_label::kHasStep), transition_node_id(t.name),
                         {{"sequenceIndex", std::to_string(step.sequence_index)}}});
  }

  for (std::size_t k = 0; k < positions.size(); ++k) {
    GraphNode node{position_node_id(positions[k].id), {std::string(graph_label::kPosition)}, {}};
    put(node.properties, "name", positions[k].id);
    put(node.properties, "state", join_conditions(positions[k].state));
    doc.nodes.push_back(std::move(node));
    if (k > 0) {
      const auto& t = path.steps[k - 1].transition;
      doc.edges.push_back({transition_node_id(t.name), std::string(graph_label::kFromPosition),
                           position_node_id(positions[k - 1].id), {}});
      doc.edges.push_back({transition_node_id(t.name), std::string(graph_label::kToPosition),
                           position_node_id(positions[k].id), {}});
    }
  }

  std::sort(doc.nodes.begin(), doc.nodes.end(), [](const GraphNode& a, const GraphNode& b) { return a.id < b.id; });
  std::sort(doc.edges.begin(), doc.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.source, a.type, a.target) < std::tie(b.source, b.type, b.target);
  });
  return doc;
}

// ---------------------------------------------------------------------------
// Load script
// ---------------------------------------------------------------------------

namespace cypher {

/// Single-quoted string literal with backslash escapes.
inline std::string quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "'";
}

inline std::string name(std::string_view s) {
  const bool plain = !s.empty() && (std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_') &&
                     std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
  if (plain) return std::string(s);
  std::string out = "`";
  for (char c : s) {
    out += c;
    if (c == '`') out += '`';
  }
  return out + "`";
}

inline std::string property_map(std::string_view id, const std::map<std::string, std::string>& properties) {
  std::string out = "{";
  bool first = true;
  if (!id.empty()) {
    out += "id: " + quote(id);
    first = false;
  }
  for (const auto& [key, value] : properties) {
    out += (first ? "" : ", ") + name(key) + ": " + quote(value);
    first = false;
  }
  return out + "}";
}

}  // namespace cypher

/// One CREATE statement per node, then one MATCH ... CREATE per edge, each on
/// its own line.
inline std::string export_load_script(const GraphDocument& doc) {
  std::string out;
  for (const auto& node : doc.nodes) {
    out += "CREATE (";
    for (const auto& label : node.labels) out += ":" + cypher::name(label);
    out += " " + cypher::property_map(node.id, node.properties) + ");\n";
  }
  for (const auto& edge : doc.edges) {
    out += "MATCH (a {id: " + cypher::quote(edge.source) + "}), (b {id: " + cypher::quote(edge.target) +
           "}) CREATE (a)-[:" + cypher::name(edge.type);
    if (!edge.properties.empty()) out += " " + cypher::property_map({}, edge.properties);
    out += "]->(b);\n";
  }
  return out;
}

}  // namespace atk
