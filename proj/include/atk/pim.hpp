#pragma once

// CIM -> PIM: a TOSCA-style topology template (the abstract infrastructure)
// and a workflow of chained steps (the abstract script). The PIM carries no
// platform bindings.
//
// Emission rules:
//   RuntimeHost            -> HostSystem, requirement local_storage -> hostedOn Device
//   Device                 -> tosca.nodes.Compute
//   Software (installedOn) -> tosca.nodes.SoftwareComponent, requirement host -> each install target
//   Network                -> tosca.nodes.network.Network
//   connectedToNetwork     -> tosca.nodes.network.Port `<Host>_connectedToNetwork_<Network>`,
//                             requirements link -> network, binding -> host
// Software absorbed by a host (isExecutionOf), services, interfaces,
// functionalities, agents, data and owners emit nothing.

#include <algorithm>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "atk/domain.hpp"
#include "atk/yaml_text.hpp"

namespace atk {

namespace tosca_type {
inline constexpr std::string_view kHost = "HostSystem";
inline constexpr std::string_view kDevice = "tosca.nodes.Compute";
inline constexpr std::string_view kSoftware = "tosca.nodes.SoftwareComponent";
inline constexpr std::string_view kNetwork = "tosca.nodes.network.Network";
inline constexpr std::string_view kPort = "tosca.nodes.network.Port";
}  // namespace tosca_type

enum class RequirementKind { local_storage, host, link, binding };

inline constexpr std::string_view to_string(RequirementKind kind) {
  switch (kind) {
    case RequirementKind::local_storage: return "local_storage";
    case RequirementKind::host: return "host";
    case RequirementKind::link: return "link";
    case RequirementKind::binding: return "binding";
  }
  return "?";
}

struct Requirement {
  RequirementKind kind;
  std::string target;

  friend bool operator==(const Requirement&, const Requirement&) = default;
};

struct NodeTemplate {
  std::string name;
  std::string type;
  std::vector<Requirement> requirements;

  friend bool operator==(const NodeTemplate&, const NodeTemplate&) = default;
};

struct WorkflowStep {
  std::string name;
  std::vector<std::string> activities;  // "action.<verb>"
  std::vector<std::string> on_success;
  std::string target;

  friend bool operator==(const WorkflowStep&, const WorkflowStep&) = default;
};

struct Workflow {
  std::string description;
  std::vector<WorkflowStep> steps;
};

struct PimDocument {
  std::vector<NodeTemplate> node_templates;
  std::string workflow_name = "AbstractScript";
  std::string workflow_description;
  std::vector<WorkflowStep> steps;
};

inline std::string port_template_name(std::string_view host, std::string_view network) {
  return std::string(host) + "_connectedToNetwork_" + std::string(network);
}

inline std::vector<NodeTemplate> compile_topology(const ContextGraph& context) {
  std::vector<NodeTemplate> out;

  for (const auto& host : context.resources_of_kind(ResourceKind::RuntimeHost)) {
    const auto devices = context.targets(host, RelationLabel::hostedOn);
    if (devices.empty()) {
      throw Error(ErrorCode::MissingDevice, "runtime-host '" + host + "' has no hostedOn device");
    }
    out.push_back({host, std::string(tosca_type::kHost), {{RequirementKind::local_storage, devices.front()}}});
  }
  for (const auto& device : context.resources_of_kind(ResourceKind::Device)) {
    out.push_back({device, std::string(tosca_type::kDevice), {}});
  }
  for (const auto& software : context.resources_of_kind(ResourceKind::Software)) {
    const auto hosts = context.targets(software, RelationLabel::installedOn);
    if (hosts.empty()) continue;
    NodeTemplate node{software, std::string(tosca_type::kSoftware), {}};
    for (const auto& host : hosts) node.requirements.push_back({RequirementKind::host, host});
    out.push_back(std::move(node));
  }
  for (const auto& network : context.resources_of_kind(ResourceKind::Network)) {
    out.push_back({network, std::string(tosca_type::kNetwork), {}});
  }

  std::vector<NodeTemplate> ports;
  for (const auto& r : context.relations_with(RelationLabel::connectedToNetwork)) {
    auto name = port_template_name(r.source, r.target);
    if (context.lookup(name)) {
      throw Error(ErrorCode::InvalidName, "port template '" + name + "' collides with a declared resource");
    }
    ports.push_back({std::move(name),
                     std::string(tosca_type::kPort),
                     {{RequirementKind::link, r.target}, {RequirementKind::binding, r.source}}});
  }
  std::sort(ports.begin(), ports.end(), [](const NodeTemplate& a, const NodeTemplate& b) { return a.name < b.name; });
  out.insert(out.end(), std::make_move_iterator(ports.begin()), std::make_move_iterator(ports.end()));
  return out;
}

/// One step per attack step, chained by on_success. The target is the host
/// template of the runtime-host the trigger agent operates.
inline Workflow compile_workflow(const ContextGraph& context, const AttackPath& path) {
  Workflow workflow{path.description, {}};
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const auto& t = path.steps[i].transition;
    const auto host = operated_host(context, t.trigger.agent);
    if (!host) {
      throw Error(ErrorCode::UnresolvedTarget,
                  "step " + t.name + ": agent '" + t.trigger.agent + "' does not operate exactly one runtime-host");
    }
    WorkflowStep step{t.name, {"action." + t.trigger.action.verb}, {}, *host};
    if (i + 1 < path.steps.size()) step.on_success.push_back(path.steps[i + 1].transition.name);
    workflow.steps.push_back(std::move(step));
  }
  return workflow;
}

inline PimDocument compile_pim(const ContextGraph& context, const AttackPath& path) {
  PimDocument doc;
  doc.node_templates = compile_topology(context);
  auto workflow = compile_workflow(context, path);
  doc.workflow_description = std::move(workflow.description);
  doc.steps = std::move(workflow.steps);
  return doc;
}

inline std::string render_pim(const PimDocument& doc) {
  using yaml_text::scalar;
  std::ostringstream os;
  os << "topology_template:\n";
  if (doc.node_templates.empty()) {
    os << "  node_templates: {}\n";
  } else {
    os << "  node_templates:\n";
    for (const auto& node : doc.node_templates) {
      os << "    " << scalar(node.name) << ":\n";
      os << "      type: " << scalar(node.type) << "\n";
      if (node.requirements.empty()) continue;
      os << "      requirements:\n";
      for (const auto& req : node.requirements) {
        if (req.kind == RequirementKind::local_storage) {
          os << "        - " << to_string(req.kind) << ":\n";
          os << "            node: " << scalar(req.target) << "\n";
        } else {
          os << "        - " << to_string(req.kind) << ": " << scalar(req.target) << "\n";
        }
      }
    }
  }
  os << "workflows:\n";
  os << "  " << scalar(doc.workflow_name) << ":\n";
  os << "    description: " << yaml_text::single_quoted(doc.workflow_description) << "\n";
  if (doc.steps.empty()) {
    os << "    steps: {}\n";
    return os.str();
  }
  os << "    steps:\n";
  for (const auto& step : doc.steps) {
    os << "      " << scalar(step.name) << ":\n";
    os << "        activities:\n";
    for (const auto& activity : step.activities) os << "          - call_operation: " << scalar(activity) << "\n";
    if (!step.on_success.empty()) {
      os << "        on_success: [ ";
      for (std::size_t i = 0; i < step.on_success.size(); ++i) {
        os << (i ? ", " : "") << scalar(step.on_success[i]);
      }
      os << " ]\n";
    }
    os << "        target: " << scalar(step.target) << "\n";
  }
  return os.str();
}

}  // namespace atk
