#pragma once

// Subcommands of the `wqt` driver. Each one returns its exit code and a
// deterministic CSV report; the executable only handles files and flags.

#include <string>
#include <string_view>
#include <vector>

#include "wqt/dsl.hpp"

namespace wqt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

struct CommandOptions {
  /// System or composite to act on; empty selects the first declared system.
  std::string system;
  /// Observable / proposition names the subcommand is about.
  std::vector<std::string> of;
  std::string prep;
  /// Observer generators for `split`.
  std::vector<std::string> local;
  std::string profile = "product";
  double width = 0.1;
  int k = 1;
  int n = 201;
  int agents = 2;
  std::vector<int> offsets;
  int horizon = 2;
  int band = 0;
  /// Operationalization: "coarse" (past/now/future) or "integers".
  std::string map = "coarse";
  /// CSV field for `wdw --profile custom`.
  std::string field;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string report;
  /// Human-readable error for exit code 2.
  std::string diagnostics;
};

/// Names of all subcommands, in help order.
const std::vector<std::string>& command_names();
bool command_needs_model(std::string_view command);

struct CheckOutcome {
  bool passed = true;
  std::size_t failures = 0;
  std::string report;
};

/// All axiom suites on every system and composite of the model.
/// CSV columns: scope,subject,law,result,witness.
CheckOutcome run_check(const dsl::Model& model);

/// `model` may be null for subcommands that do not need one.
CommandResult execute_command(std::string_view command, const dsl::Model* model, const CommandOptions& options);

}  // namespace wqt::cli
