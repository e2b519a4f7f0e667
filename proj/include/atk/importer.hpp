#pragma once

// Imports state-enumeration attack graphs (states as vertices, actions as
// labeled arcs) into the typed model:
//
//   state i                     -> Position i
//   goal state k                -> AttackPath goal tag "k"
//   arc (i, A, j)               -> AttackTransition triggered by verb A, from Position i to Position j
//   A precedes B along the path -> A gets the smaller sequence index
//
// The source formalism has no actors, so a placeholder agent operating a
// placeholder host triggers every transition. The result is a skeleton: no
// conditions, no objectives. enrichment_report lists what is missing.
//
// Grammar (UTF-8, `#` starts a comment):
//
//   attackgraph "<name>"
//   states: s0 s1 s2          (whitespace and/or comma separated, may repeat)
//   initial: s0
//   goal: s2
//   trans s0 -> s1 : Action

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "atk/domain.hpp"
#include "atk/simulator.hpp"

namespace atk {

struct StateEdge {
  std::string from;
  std::string action;
  std::string to;

  friend bool operator==(const StateEdge&, const StateEdge&) = default;
};

struct StateGraph {
  std::string name;
  std::vector<std::string> states;
  std::string initial;
  std::string goal;
  std::vector<StateEdge> edges;
};

struct EnrichmentGap {
  std::string element;
  std::string missing;

  friend bool operator==(const EnrichmentGap&, const EnrichmentGap&) = default;
};

struct ImportReport {
  std::size_t positions_created = 0;
  std::size_t transitions_created = 0;
  std::vector<EnrichmentGap> gaps;
  std::vector<std::string> placeholders;
};

struct ImportResult {
  ContextGraph context;
  AttackPath path;
  std::vector<Position> positions;
  ImportReport report;
};

inline constexpr std::string_view kImportedAgent = "ImportedAgent";
inline constexpr std::string_view kImportedHost = "ImportedHost";

namespace detail {

inline std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

/// Drops a `#` comment that is not inside double quotes.
inline std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

inline bool starts_with_word(const std::string& line, std::string_view word) {
  return line.size() > word.size() && line.compare(0, word.size(), word) == 0 &&
         (std::isspace(static_cast<unsigned char>(line[word.size()])) || line[word.size()] == ':' ||
          line[word.size()] == '"');
}

}  // namespace detail

inline StateGraph parse_state_graph(const std::string& text) {
  using detail::trim;
  StateGraph graph;
  bool have_header = false;
  bool have_initial = false;
  bool have_goal = false;
  std::set<std::string> declared;
  std::vector<std::pair<int, std::string>> references;  // (line, state) checked once all states are known

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&line_no](const std::string& what) {
    return Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
  };
  auto after_colon = [&](const std::string& line, std::string_view keyword) {
    auto rest = trim(std::string_view(line).substr(keyword.size()));
    if (rest.empty() || rest.front() != ':') throw fail("expected ':' after '" + std::string(keyword) + "'");
    return trim(std::string_view(rest).substr(1));
  };
  auto state_token = [&](const std::string& token) {
    if (!is_valid_identifier(token)) throw fail("invalid state id '" + token + "'");
    return token;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(detail::strip_comment(raw));
    if (line.empty()) continue;

    if (detail::starts_with_word(line, "attackgraph")) {
      if (have_header) throw fail("duplicate 'attackgraph' header");
      const auto rest = trim(std::string_view(line).substr(11));
      if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"') throw fail("expected attackgraph \"<name>\"");
      graph.name = rest.substr(1, rest.size() - 2);
      have_header = true;
      continue;
    }
    if (!have_header) throw fail("expected 'attackgraph \"<name>\"' header first");

    if (detail::starts_with_word(line, "states")) {
      std::string list = after_colon(line, "states");
      std::replace(list.begin(), list.end(), ',', ' ');
      std::istringstream tokens(list);
      std::string token;
      while (tokens >> token) {
        if (!declared.insert(state_token(token)).second) throw fail("state '" + token + "' declared twice");
        graph.states.push_back(token);
      }
    } else if (detail::starts_with_word(line, "initial")) {
      if (have_initial) throw fail("duplicate 'initial'");
      graph.initial = state_token(after_colon(line, "initial"));
      references.emplace_back(line_no, graph.initial);
      have_initial = true;
    } else if (detail::starts_with_word(line, "goal")) {
      if (have_goal) throw fail("duplicate 'goal'");
      graph.goal = state_token(after_colon(line, "goal"));
      references.emplace_back(line_no, graph.goal);
      have_goal = true;
    } else if (detail::starts_with_word(line, "trans")) {
      // trans <s> -> <t> : <Action>
      const auto body = trim(std::string_view(line).substr(5));
      const auto arrow = body.find("->");
      const auto colon = body.find(':', arrow == std::string::npos ? 0 : arrow);
      if (arrow == std::string::npos || colon == std::string::npos) throw fail("expected 'trans <s> -> <t> : <Action>'");
      StateEdge edge{state_token(trim(std::string_view(body).substr(0, arrow))), trim(std::string_view(body).substr(colon + 1)),
                     state_token(trim(std::string_view(body).substr(arrow + 2, colon - arrow - 2)))};
      if (edge.action.empty()) throw fail("transition has an empty action label");
      if (!is_valid_identifier(edge.action)) throw fail("invalid action label '" + edge.action + "'");
      references.emplace_back(line_no, edge.from);
      references.emplace_back(line_no, edge.to);
      graph.edges.push_back(std::move(edge));
    } else {
      throw fail("unrecognized line '" + line + "'");
    }
  }

  if (!have_header) throw Error(ErrorCode::ParseError, "missing 'attackgraph \"<name>\"' header");
  if (!have_initial) throw Error(ErrorCode::ParseError, "missing 'initial:' line");
  if (!have_goal) throw Error(ErrorCode::MissingGoal, "attack graph '" + graph.name + "' declares no goal state");
  for (const auto& [line, state] : references) {
    if (!declared.contains(state)) {
      throw Error(ErrorCode::UndeclaredState, "line " + std::to_string(line) + ": state '" + state + "' is not declared");
    }
  }
  return graph;
}

/// Gaps: one per transition lacking pre- or postconditions, one for the path
/// when it has no objectives. Placeholders are the synthetic import actors
/// still present in the context.
inline ImportReport enrichment_report(const ContextGraph& context, const AttackPath& path) {
  ImportReport report;
  report.transitions_created = path.steps.size();
  report.positions_created = path.steps.size() + 1;
  for (const auto& step : path.steps) {
    const auto& t = step.transition;
    std::vector<std::string> missing;
    if (t.preconditions.empty()) missing.emplace_back("preconditions");
    if (t.postconditions.empty()) missing.emplace_back("postconditions");
    if (missing.empty()) continue;
    std::string text;
    for (const auto& m : missing) text += (text.empty() ? "" : ", ") + m;
    report.gaps.push_back({"transition " + t.name, text});
  }
  if (path.objectives.empty()) {
    report.gaps.push_back({"path " + path.name, path.prerequisites.empty() ? "objectives, prerequisites" : "objectives"});
  }
  for (auto name : {kImportedAgent, kImportedHost}) {
    if (context.lookup(name)) report.placeholders.emplace_back(name);
  }
  return report;
}

inline std::string render_gap(const EnrichmentGap& gap) { return gap.element + ": missing " + gap.missing; }

inline ImportResult transform_to_model(const StateGraph& graph) {
  // The edges must form one chain initial -> ... -> goal that covers every
  // state and every edge.
  std::map<std::string, const StateEdge*> outgoing;
  std::map<std::string, int> incoming;
  for (const auto& edge : graph.edges) {
    if (!outgoing.emplace(edge.from, &edge).second) {
      throw Error(ErrorCode::NotLinear, "state '" + edge.from + "' branches");
    }
    if (++incoming[edge.to] > 1) throw Error(ErrorCode::NotLinear, "state '" + edge.to + "' is entered twice");
  }
  std::vector<const StateEdge*> chain;
  std::set<std::string> visited{graph.initial};
  std::string current = graph.initial;
  while (current != graph.goal) {
    auto it = outgoing.find(current);
    if (it == outgoing.end()) {
      throw Error(ErrorCode::NotLinear, "goal '" + graph.goal + "' is unreachable from '" + graph.initial + "'");
    }
    chain.push_back(it->second);
    current = it->second->to;
    if (!visited.insert(current).second) throw Error(ErrorCode::NotLinear, "cycle through '" + current + "'");
  }
  if (chain.size() != graph.edges.size()) {
    throw Error(ErrorCode::NotLinear, "edges outside the initial-to-goal chain");
  }
  if (visited.size() != graph.states.size()) {
    throw Error(ErrorCode::NotLinear, "states outside the initial-to-goal chain");
  }

  ContextBuilder builder;
  builder.add_resource(std::string(kImportedAgent), ResourceKind::Agent)
      .add_resource(std::string(kImportedHost), ResourceKind::RuntimeHost)
      .add_relation(std::string(kImportedAgent), RelationLabel::operates, std::string(kImportedHost));
  ContextGraph context = std::move(builder).build();

  PathSpec spec;
  spec.name = graph.name;
  for (char& c : spec.name) {
    if (!is_valid_identifier(std::string(1, c))) c = '_';
  }
  if (spec.name.empty()) spec.name = "ImportedAttack";
  spec.goal_tag = graph.goal;

  std::map<std::string, int> uses;
  for (const auto* edge : chain) ++uses[edge->action];
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& action = chain[i]->action;
    spec.vocabulary.declare(action, false);
    StepSpec step;
    step.sequence_index = static_cast<int>(i + 1);
    step.transition.name = uses[action] > 1 ? action + "_" + std::to_string(++seen[action]) : action;
    step.transition.agent = std::string(kImportedAgent);
    step.transition.verb = action;
    spec.steps.push_back(std::move(step));
  }

  AttackPath path = build_attack_path(std::move(spec), context, PathBuildOptions{.allow_empty_objectives = true});
  auto positions = derive_positions(simulate(context, path));
  positions.front().id = graph.initial;
  for (std::size_t k = 0; k < chain.size(); ++k) positions[k + 1].id = chain[k]->to;

  ImportReport report = enrichment_report(context, path);
  report.positions_created = positions.size();
  report.transitions_created = path.steps.size();
  return ImportResult{std::move(context), std::move(path), std::move(positions), std::move(report)};
}

}  // namespace atk
