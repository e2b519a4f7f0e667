#pragma once

// atkc: command-line front end for the scenario toolchain.
//
// Exit codes: 0 success, 1 validation or simulation failure, 2 I/O, parse or
// usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atk/importer.hpp"
#include "atk/interchange.hpp"
#include "atk/pim.hpp"
#include "atk/playbook.hpp"
#include "atk/simulator.hpp"
#include "atk/snifattack.hpp"
#include "atk/validator.hpp"

namespace atk::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kIoError = 2 };

inline constexpr std::string_view kExampleFileName = "snifattack.attack.yaml";

namespace detail {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

/// Prints diagnostics to `err`; returns false when any is an error.
inline bool report_diagnostics(const std::vector<Diagnostic>& diagnostics, std::ostream& err) {
  for (const auto& d : diagnostics) err << render(d) << "\n";
  return !has_errors(diagnostics);
}

inline Scenario load_checked(const std::string& path, std::ostream& err, bool& ok) {
  auto scenario = read_document(read_file(path));
  ok = report_diagnostics(validate(scenario.context, scenario.path), err);
  return scenario;
}

/// Steps through the path, printing one line per step. Returns the trace on
/// success; on failure prints the failing step and goal status.
inline std::optional<SimulationTrace> run_simulation(const Scenario& s, std::ostream& out, bool with_states) {
  auto print_state = [&](const ContextState& state, std::size_t k) {
    if (!with_states) return;
    out << "  P" << k << ":\n";
    for (const auto& fact : state.facts()) out << "    " << to_string(fact) << "\n";
  };

  SimulationTrace trace;
  trace.states.push_back(initial_state(s.context, s.path));
  print_state(trace.states.back(), 0);
  for (const auto& step : s.path.steps) {
    AppliedStep applied{step.sequence_index, step.transition.name, step.transition.trigger};
    try {
      trace.states.push_back(apply_transition(trace.states.back(), step.transition, step.sequence_index));
    } catch (const SimulationError& e) {
      out << render_step_line(applied, "FAILED") << ": missing " << to_string(*e.missing()) << "\n";
      out << "goal: NOT REACHED\n";
      return std::nullopt;
    }
    trace.applied.push_back(applied);
    out << render_step_line(applied, "OK") << "\n";
    print_state(trace.states.back(), trace.states.size() - 1);
  }
  std::string unmet;
  for (const auto& objective : s.path.objectives) {
    if (!trace.states.back().entails(objective)) unmet += (unmet.empty() ? "" : "; ") + to_string(objective);
  }
  if (!unmet.empty()) {
    out << "goal: NOT REACHED (unmet: " << unmet << ")\n";
    return std::nullopt;
  }
  out << "goal: REACHED\n";
  return trace;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Attack scenario modeling toolchain", "atkc"};
  app.require_subcommand(1);

  std::string doc_path;
  std::string output;
  std::string graph_path;
  bool trace_flag = false;
  bool dry_flag = false;
  bool report_flag = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario document");
  validate_cmd->add_option("doc", doc_path, "Scenario document")->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "Execute the attack path step by step");
  simulate_cmd->add_option("doc", doc_path, "Scenario document")->required();
  simulate_cmd->add_flag("--trace", trace_flag, "Print every position's state");

  auto* compile_cmd = app.add_subcommand("compile", "Generate the TOSCA-style PIM");
  compile_cmd->add_option("doc", doc_path, "Scenario document")->required();
  compile_cmd->add_option("-o,--output", output, "PIM output file")->required();

  auto* script_cmd = app.add_subcommand("script", "Generate the playbook");
  script_cmd->add_option("doc", doc_path, "Scenario document")->required();
  script_cmd->add_option("-o,--output", output, "Playbook output file")->required();

  auto* run_cmd = app.add_subcommand("run", "Execute a playbook");
  run_cmd->add_flag("--dry", dry_flag, "Dry run (the only supported mode)");
  run_cmd->add_option("playbook", doc_path, "Playbook file")->required();

  auto* import_cmd = app.add_subcommand("import", "Import a legacy attack model");
  import_cmd->require_subcommand(1);
  auto* pinchinat_cmd = import_cmd->add_subcommand("pinchinat", "State-enumeration attack graph");
  pinchinat_cmd->add_option("graph", graph_path, "Attack graph file")->required();
  pinchinat_cmd->add_option("-o,--output", output, "Scenario document output")->required();
  pinchinat_cmd->add_flag("--report", report_flag, "Print enrichment gaps, one per line");

  auto* export_cmd = app.add_subcommand("export", "Export a scenario");
  export_cmd->require_subcommand(1);
  auto* graphscript_cmd = export_cmd->add_subcommand("graphscript", "Graph-store load script");
  graphscript_cmd->add_option("doc", doc_path, "Scenario document")->required();
  graphscript_cmd->add_option("-o,--output", output, "Script output file")->required();

  auto* example_cmd = app.add_subcommand("example", "Write a bundled example");
  example_cmd->require_subcommand(1);
  auto* snif_cmd = example_cmd->add_subcommand("snifattack", "The SnifAttack scenario");
  snif_cmd->add_option("-o,--output", output, "Output directory")->required();

  std::vector<std::string> argv_storage = args;
  if (argv_storage.empty()) argv_storage.emplace_back("atkc");
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "atkc: " << e.what() << "\n" << app.help();
    return kIoError;
  }

  try {
    if (validate_cmd->parsed()) {
      bool ok = false;
      detail::load_checked(doc_path, err, ok);
      return ok ? kSuccess : kFailure;
    }

    if (simulate_cmd->parsed()) {
      bool ok = false;
      const auto scenario = detail::load_checked(doc_path, err, ok);
      if (!ok) return kFailure;
      return detail::run_simulation(scenario, out, trace_flag) ? kSuccess : kFailure;
    }

    if (compile_cmd->parsed() || script_cmd->parsed()) {
      bool ok = false;
      const auto scenario = detail::load_checked(doc_path, err, ok);
      if (!ok) return kFailure;
      simulate(scenario.context, scenario.path);
      const auto text = compile_cmd->parsed()
                            ? render_pim(compile_pim(scenario.context, scenario.path))
                            : render_playbook(emit_playbook(scenario.context, scenario.path));
      detail::write_file(output, text);
      return kSuccess;
    }

    if (run_cmd->parsed()) {
      if (!dry_flag) {
        err << "atkc: only dry runs are supported; pass --dry\n";
        return kIoError;
      }
      out << dry_run(parse_playbook(detail::read_file(doc_path))).transcript;
      return kSuccess;
    }

    if (pinchinat_cmd->parsed()) {
      const auto result = transform_to_model(parse_state_graph(detail::read_file(graph_path)));
      detail::write_file(output, write_document(result.context, result.path));
      if (report_flag) {
        for (const auto& gap : result.report.gaps) out << render_gap(gap) << "\n";
      }
      for (const auto& placeholder : result.report.placeholders) {
        err << "note: '" << placeholder << "' is an import placeholder\n";
      }
      return kSuccess;
    }

    if (graphscript_cmd->parsed()) {
      const auto scenario = read_document(detail::read_file(doc_path));
      std::vector<Position> positions;
      try {
        positions = derive_positions(simulate(scenario.context, scenario.path));
      } catch (const Error&) {
        // Positions are exported only when the path simulates.
      }
      detail::write_file(output, export_load_script(to_graph(scenario.context, scenario.path, positions)));
      return kSuccess;
    }

    if (snif_cmd->parsed()) {
      const auto scenario = fixtures::snifattack();
      std::filesystem::create_directories(output);
      detail::write_file(std::filesystem::path(output) / kExampleFileName,
                         write_document(scenario.context, scenario.path));
      return kSuccess;
    }
  } catch (const detail::IoError& e) {
    err << "atkc: " << e.what() << "\n";
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "atkc: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "atkc: " << e.what() << "\n";
    const bool input_error = e.code() == ErrorCode::ParseError || e.code() == ErrorCode::UndeclaredState ||
                             e.code() == ErrorCode::MissingGoal;
    return input_error ? kIoError : kFailure;
  }

  err << app.help();
  return kIoError;
}

}  // namespace atk::cli
