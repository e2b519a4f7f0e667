#pragma once

// PIM -> PSM: a playbook-shaped executable script, plus a dry-run engine that
// replays it without touching any host. Whether a task reports "changed" is
// declared by the action's mutates flag, never observed.

#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "atk/domain.hpp"
#include "atk/yaml_text.hpp"

namespace atk {

struct Task {
  std::string label;
  bool mutates = false;
  bool internal = false;

  friend bool operator==(const Task&, const Task&) = default;
};

struct Play {
  std::string name;
  std::string target_host;
  std::vector<Task> tasks;

  friend bool operator==(const Play&, const Play&) = default;
};

struct RecapCounters {
  int ok = 0;
  int changed = 0;
  int unreachable = 0;
  int failed = 0;
  int skipped = 0;
  int rescued = 0;
  int ignored = 0;

  friend bool operator==(const RecapCounters&, const RecapCounters&) = default;
};

struct DryRunResult {
  std::string transcript;
  std::map<std::string, RecapCounters> recap;  // sorted by host
};

inline std::string main_task_label(std::string_view step, std::string_view verb) {
  return "AttackTransition_" + std::string(step) + " : " + std::string(verb);
}

inline std::string internal_task_label(std::string_view step, std::string_view description) {
  return "AttackTransition_" + std::string(step) + " : --- internal: " + std::string(description) + " ---";
}

/// One play per step, internal tasks first, then the trigger's action.
inline std::vector<Play> emit_playbook(const ContextGraph& context, const AttackPath& path) {
  std::vector<Play> plays;
  std::set<std::string> labels;
  auto unique_label = [&labels](std::string label) {
    if (labels.insert(label).second) return label;
    for (int n = 2;; ++n) {
      auto candidate = label + " #" + std::to_string(n);
      if (labels.insert(candidate).second) return candidate;
    }
  };

  for (const auto& step : path.steps) {
    const auto& t = step.transition;
    const auto host = operated_host(context, t.trigger.agent);
    if (!host) {
      throw Error(ErrorCode::UnresolvedTarget,
                  "step " + t.name + ": agent '" + t.trigger.agent + "' does not operate exactly one runtime-host");
    }
    Play play;
    play.name = t.name + " (" + t.trigger.agent + " " + t.trigger.action.verb + ")";
    if (!t.description.empty()) play.name += " - " + t.description;
    play.target_host = *host;
    for (const auto& internal : t.internal_tasks) {
      play.tasks.push_back({unique_label(internal_task_label(t.name, internal)), true, true});
    }
    play.tasks.push_back({unique_label(main_task_label(t.name, t.trigger.action.verb)), t.trigger.action.mutates, false});
    plays.push_back(std::move(play));
  }
  return plays;
}

inline std::string render_playbook(const std::vector<Play>& plays) {
  using yaml_text::scalar;
  if (plays.empty()) return "[]\n";
  std::ostringstream os;
  for (const auto& play : plays) {
    os << "- name: " << scalar(play.name) << "\n";
    os << "  hosts: " << scalar(play.target_host) << "\n";
    os << "  gather_facts: false\n";
    if (play.tasks.empty()) {
      os << "  tasks: []\n";
      continue;
    }
    os << "  tasks:\n";
    for (const auto& task : play.tasks) {
      os << "    - name: " << scalar(task.label) << "\n";
      os << "      ansible.builtin.debug:\n";
      os << "        msg: " << scalar(task.label) << "\n";
      os << "      changed_when: " << (task.mutates ? "true" : "false") << "\n";
      if (task.internal) os << "      tags: [ internal ]\n";
    }
  }
  return os.str();
}

/// Reads back a file produced by render_playbook.
inline std::vector<Play> parse_playbook(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ParseError, std::string("playbook: ") + e.what());
  }
  auto fail = [](const YAML::Node& node, const std::string& what) {
    const auto mark = node.Mark();
    return Error(ErrorCode::ParseError, "playbook line " + std::to_string(mark.line + 1) + ", column " +
                                            std::to_string(mark.column + 1) + ": " + what);
  };
  if (!root.IsSequence()) throw fail(root, "expected a list of plays");

  std::vector<Play> plays;
  try {
    for (const auto& node : root) {
      if (!node.IsMap() || !node["name"] || !node["hosts"]) throw fail(node, "play needs 'name' and 'hosts'");
      Play play{node["name"].as<std::string>(), node["hosts"].as<std::string>(), {}};
      if (const auto tasks = node["tasks"]) {
        if (!tasks.IsSequence()) throw fail(tasks, "'tasks' must be a list");
        for (const auto& t : tasks) {
          if (!t.IsMap() || !t["name"]) throw fail(t, "task needs a 'name'");
          Task task{t["name"].as<std::string>(), false, false};
          if (const auto changed = t["changed_when"]) task.mutates = changed.as<bool>();
          if (const auto tags = t["tags"]) {
            for (const auto& tag : tags) task.internal = task.internal || tag.as<std::string>() == "internal";
          }
          play.tasks.push_back(std::move(task));
        }
      }
      plays.push_back(std::move(play));
    }
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ParseError, std::string("playbook: ") + e.what());
  }
  return plays;
}

inline std::string render_recap_line(const std::string& host, const RecapCounters& c) {
  std::ostringstream os;
  os << std::left << std::setw(18) << host;
  if (host.size() >= 18) os << ' ';
  os << ": ok=" << std::setw(4) << c.ok << "changed=" << std::setw(3) << c.changed << "unreachable=" << std::setw(3)
     << c.unreachable << "failed=" << std::setw(3) << c.failed << "skipped=" << std::setw(3) << c.skipped
     << "rescued=" << std::setw(3) << c.rescued << "ignored=" << c.ignored;
  return os.str();
}

/// Replays the plays in order and prints a playbook-engine style transcript
/// followed by per-host recap counters.
inline DryRunResult dry_run(const std::vector<Play>& plays) {
  DryRunResult result;
  std::ostringstream os;
  for (const auto& play : plays) {
    os << "PLAY [" << play.name << "] ***\n";
    auto& counters = result.recap[play.target_host];
    for (const auto& task : play.tasks) {
      os << "TASK [" << task.label << "] " << (task.internal ? "***" : "*****") << "\n";
      os << (task.mutates ? "changed" : "ok") << ": [" << play.target_host << "]\n\n";
      ++counters.ok;
      if (task.mutates) ++counters.changed;
    }
  }
  os << "PLAY RECAP *****\n";
  for (const auto& [host, counters] : result.recap) os << render_recap_line(host, counters) << "\n";
  result.transcript = os.str();
  return result;
}

}  // namespace atk
