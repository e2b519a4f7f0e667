#pragma once

// Static semantic checks on a (context, path) pair. Diagnostics are data,
// not exceptions; an empty list means the model is ready to simulate and
// compile.
//
//   V1  trigger agent operates exactly one runtime-host
//   V2  conditions reference declared resources
//   V3  isInState only on Interfaces
//   V4  IsGranted values are Functionalities
//   V5  runtime-host connected to at least one Network (warning)
//   V6  trigger verbs are declared
//   V7  objectives non-empty
//   V8  reasoning properties only on Agents
//   V9  transition names unique
//   V10 transitions with empty pre- or postconditions need enrichment (warning)

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "atk/domain.hpp"

namespace atk {

enum class Severity { Error, Warning };

inline constexpr std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

struct Diagnostic {
  Severity severity;
  int code;       // N in "VN"
  int step = 0;   // 0 for context- or path-level findings
  std::string subject;
  std::string message;

  std::string code_name() const { return "V" + std::to_string(code); }

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// `<severity> <code> at <subject>: <message>`
inline std::string render(const Diagnostic& d) {
  return std::string(to_string(d.severity)) + " " + d.code_name() + " at " + d.subject + ": " + d.message;
}

inline bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace detail {

inline std::string step_subject(const AttackStep& step) {
  return "step " + std::to_string(step.sequence_index) + " (" + step.transition.name + ")";
}

class ConditionChecker {
 public:
  ConditionChecker(const ContextGraph& context, std::vector<Diagnostic>& out) : context_(context), out_(out) {}

  void check(const Property& property, int step, const std::string& subject) {
    auto report = [&](int code, const std::string& message) {
      out_.push_back(Diagnostic{Severity::Error, code, step, subject, message});
    };
    auto kind_of = [&](const std::string& name) -> std::optional<ResourceKind> {
      auto id = context_.lookup(name);
      if (!id) {
        report(2, "'" + name + "' referenced by " + to_string(property) + " is not declared");
        return std::nullopt;
      }
      return id->kind;
    };

    if (property.is_between()) {
      kind_of(property.between().source);
      kind_of(property.between().target);
      return;
    }
    const auto& u = property.unit();
    const auto subject_kind = kind_of(u.subject);
    if (u.label == unit_label::kIsInState) {
      if (subject_kind && *subject_kind != ResourceKind::Interface) {
        report(3, "isInState on " + std::string(to_string(*subject_kind)) + " '" + u.subject + "'");
      }
    } else if (u.label == unit_label::kIsGranted) {
      if (const auto* grant = std::get_if<GrantValue>(&u.value)) {
        const auto granted_kind = kind_of(grant->functionality);
        if (granted_kind && *granted_kind != ResourceKind::Functionality) {
          report(4, "IsGranted value '" + grant->functionality + "' is a " +
                        std::string(to_string(*granted_kind)) + ", not a Functionality");
        }
      } else {
        report(4, "IsGranted on '" + u.subject + "' has no functionality value");
      }
    } else if (reasoning_operator_from_label(u.label)) {
      if (subject_kind && *subject_kind != ResourceKind::Agent) {
        report(8, u.label + " held by " + std::string(to_string(*subject_kind)) + " '" + u.subject + "'");
      }
      if (const auto* fact = std::get_if<FactValue>(&u.value); fact && fact->fact) {
        check(*fact->fact, step, subject);
      }
    }
  }

 private:
  const ContextGraph& context_;
  std::vector<Diagnostic>& out_;
};

}  // namespace detail

inline std::vector<Diagnostic> validate(const ContextGraph& context, const AttackPath& path) {
  std::vector<Diagnostic> out;
  detail::ConditionChecker conditions(context, out);

  std::set<std::string, std::less<>> agents_checked;
  for (const auto& step : path.steps) {
    const std::string& agent = step.transition.trigger.agent;
    if (!agents_checked.insert(agent).second) continue;
    const auto id = context.lookup(agent);
    if (!id || id->kind != ResourceKind::Agent) {
      out.push_back(Diagnostic{Severity::Error, 2, 0, agent, "trigger agent is not a declared Agent"});
      continue;
    }
    const auto hosts = context.targets(agent, RelationLabel::operates).size();
    if (hosts != 1) {
      out.push_back(Diagnostic{Severity::Error, 1, 0, agent,
                               "trigger agent operates " + std::to_string(hosts) +
                                   " runtime-hosts; exactly one is required to resolve the execution target"});
    }
  }

  for (const auto& host : context.resources_of_kind(ResourceKind::RuntimeHost)) {
    if (context.targets(host, RelationLabel::connectedToNetwork).empty()) {
      out.push_back(Diagnostic{Severity::Warning, 5, 0, host, "runtime-host is not connected to any Network"});
    }
  }

  if (path.objectives.empty()) {
    out.push_back(Diagnostic{Severity::Error, 7, 0, "path " + path.name, "attack path has no objectives"});
  }
  for (const auto& p : path.objectives) conditions.check(p, 0, "path " + path.name);
  for (const auto& p : path.prerequisites) conditions.check(p, 0, "path " + path.name);

  std::set<std::string, std::less<>> names;
  for (const auto& step : path.steps) {
    const auto subject = detail::step_subject(step);
    const auto& t = step.transition;
    for (const auto& p : t.preconditions) conditions.check(p, step.sequence_index, subject);
    for (const auto& p : t.postconditions) conditions.check(p, step.sequence_index, subject);
    if (!path.vocabulary.contains(t.trigger.action.verb)) {
      out.push_back(Diagnostic{Severity::Error, 6, step.sequence_index, subject,
                               "action verb '" + t.trigger.action.verb + "' is not declared"});
    }
    if (!names.insert(t.name).second) {
      out.push_back(Diagnostic{Severity::Error, 9, step.sequence_index, subject,
                               "transition name '" + t.name + "' is not unique"});
    }
    if (t.preconditions.empty() || t.postconditions.empty()) {
      std::string missing = t.preconditions.empty() && t.postconditions.empty() ? "pre- and postconditions"
                            : t.preconditions.empty()                          ? "preconditions"
                                                                                : "postconditions";
      out.push_back(Diagnostic{Severity::Warning, 10, step.sequence_index, subject,
                               "needs enrichment: no " + missing});
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.step, a.code, a.subject, a.message) < std::tie(b.step, b.code, b.subject, b.message);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace atk
