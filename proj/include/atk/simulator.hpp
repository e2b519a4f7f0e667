#pragma once

// Executes an attack path as a state-transition system. The state starts as
// every context relation plus the path's prerequisites; each step must find
// its preconditions entailed, then its postconditions are merged in.
// Nothing is ever deleted: Between facts and multi-valued units accumulate,
// single-valued units (isInState, scalars) are overwritten.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "atk/domain.hpp"

namespace atk {

class ContextState {
 public:
  using UnitKey = std::pair<std::string, std::string>;  // (subject, label)

  bool entails(const Property& property) const {
    if (property.is_between()) return between_.contains(property.between());
    const auto& u = property.unit();
    const UnitKey key{u.subject, u.label};
    if (u.single_valued()) {
      auto it = single_.find(key);
      return it != single_.end() && it->second == u.value;
    }
    auto it = multi_.find(key);
    return it != multi_.end() && it->second.contains(u.value);
  }

  /// Single-valued units overwrite, everything else accumulates.
  void add(const Property& property) {
    if (property.is_between()) {
      between_.insert(property.between());
      return;
    }
    const auto& u = property.unit();
    UnitKey key{u.subject, u.label};
    if (u.single_valued()) {
      single_.insert_or_assign(std::move(key), u.value);
    } else {
      multi_[std::move(key)].insert(u.value);
    }
  }

  std::optional<UnitValue> single_value(const std::string& subject, const std::string& label) const {
    auto it = single_.find(UnitKey{subject, label});
    if (it == single_.end()) return std::nullopt;
    return it->second;
  }

  const std::set<BetweenProperty>& between_facts() const { return between_; }
  const std::map<UnitKey, UnitValue>& single_units() const { return single_; }
  const std::map<UnitKey, std::set<UnitValue>>& multi_units() const { return multi_; }

  bool empty() const { return between_.empty() && single_.empty() && multi_.empty(); }

  PropertySet facts() const {
    PropertySet out;
    for (const auto& b : between_) out.insert(Property{b});
    for (const auto& [key, value] : single_) out.insert(Property{UnitProperty{key.first, key.second, value}});
    for (const auto& [key, values] : multi_) {
      for (const auto& value : values) out.insert(Property{UnitProperty{key.first, key.second, value}});
    }
    return out;
  }

  friend bool operator==(const ContextState&, const ContextState&) = default;

 private:
  std::set<BetweenProperty> between_;
  std::map<UnitKey, UnitValue> single_;
  std::map<UnitKey, std::set<UnitValue>> multi_;
};

/// Raised by apply_transition / simulate. For PreconditionUnsatisfied,
/// `missing` holds the first unmet precondition in canonical order; for
/// ObjectiveNotReached, `unmet_objectives` lists all of them.
class SimulationError : public Error {
 public:
  SimulationError(ErrorCode code, const std::string& detail, int step_index, std::string transition,
                  std::optional<Property> missing, std::vector<Property> unmet_objectives)
      : Error(code, detail),
        step_index_(step_index),
        transition_(std::move(transition)),
        missing_(std::move(missing)),
        unmet_(std::move(unmet_objectives)) {}

  int step_index() const { return step_index_; }
  const std::string& transition() const { return transition_; }
  const std::optional<Property>& missing() const { return missing_; }
  const std::vector<Property>& unmet_objectives() const { return unmet_; }

 private:
  int step_index_;
  std::string transition_;
  std::optional<Property> missing_;
  std::vector<Property> unmet_;
};

struct AppliedStep {
  int sequence_index;
  std::string transition;
  Trigger trigger;
};

/// states[k] is the context state after k steps.
struct SimulationTrace {
  std::vector<ContextState> states;
  std::vector<AppliedStep> applied;
};

inline ContextState initial_state(const ContextGraph& context, const AttackPath& path) {
  ContextState state;
  for (const auto& r : context.relations()) state.add(between(r.source, r.label, r.target));

  std::map<ContextState::UnitKey, const UnitProperty*> seen;
  for (const auto& p : path.prerequisites) {
    if (!p.is_between() && p.unit().single_valued()) {
      const auto& u = p.unit();
      auto [it, inserted] = seen.emplace(ContextState::UnitKey{u.subject, u.label}, &u);
      if (!inserted && !(it->second->value == u.value)) {
        throw Error(ErrorCode::ConflictingPrerequisite, "prerequisites " + to_string(Property{*it->second}) +
                                                            " and " + to_string(p) + " disagree");
      }
    }
    state.add(p);
  }
  return state;
}

inline bool entails(const ContextState& state, const Property& property) { return state.entails(property); }

inline ContextState apply_transition(const ContextState& state, const AttackTransition& transition,
                                     int step_index = 0) {
  for (const auto& pre : transition.preconditions) {
    if (!state.entails(pre)) {
      std::string where = step_index > 0 ? "step " + std::to_string(step_index) + " " : std::string();
      throw SimulationError(ErrorCode::PreconditionUnsatisfied,
                            where + transition.name + " requires " + to_string(pre), step_index, transition.name,
                            pre, {});
    }
  }
  ContextState next = state;
  for (const auto& post : transition.postconditions) next.add(post);
  return next;
}

inline SimulationTrace simulate(const ContextGraph& context, const AttackPath& path) {
  SimulationTrace trace;
  trace.states.push_back(initial_state(context, path));
  for (const auto& step : path.steps) {
    trace.states.push_back(apply_transition(trace.states.back(), step.transition, step.sequence_index));
    trace.applied.push_back(AppliedStep{step.sequence_index, step.transition.name, step.transition.trigger});
  }
  std::vector<Property> unmet;
  for (const auto& objective : path.objectives) {
    if (!trace.states.back().entails(objective)) unmet.push_back(objective);
  }
  if (!unmet.empty()) {
    std::string list;
    for (const auto& p : unmet) list += (list.empty() ? "" : "; ") + to_string(p);
    throw SimulationError(ErrorCode::ObjectiveNotReached, "unmet objectives: " + list, 0, {}, std::nullopt,
                          std::move(unmet));
  }
  return trace;
}

/// Positions P0..Pn, one per state in the trace.
inline std::vector<Position> derive_positions(const SimulationTrace& trace) {
  std::vector<Position> positions;
  positions.reserve(trace.states.size());
  for (std::size_t k = 0; k < trace.states.size(); ++k) {
    positions.push_back(Position{"P" + std::to_string(k), trace.states[k].facts()});
  }
  return positions;
}

inline std::string render_step_line(const AppliedStep& step, std::string_view status) {
  return "step " + std::to_string(step.sequence_index) + ": " + step.transition + " (" + step.trigger.agent + " " +
         step.trigger.action.verb + ") " + std::string(status);
}

}  // namespace atk
