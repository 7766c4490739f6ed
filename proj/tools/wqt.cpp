// wqt <subcommand> [model.wqt] [flags]

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wqt/commands.hpp"
#include "wqt/dsl.hpp"

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  using wqt::cli::kExitUsage;

  CLI::App app{"Finite weak quantum theory models: axiom checks, correlations, toy cosmology"};
  app.set_help_all_flag("--help-all");

  std::string command;
  std::string model_path;
  std::string out_path;
  wqt::cli::CommandOptions opt;

  app.add_option("subcommand", command, "check | table | commutant | split | entangle | matter | wdw | sync | "
                                        "operationalize | format")
      ->required()
      ->check(CLI::IsMember(wqt::cli::command_names()));
  app.add_option("model", model_path, "model file (.wqt)");
  app.add_option("--system", opt.system, "system or composite to act on");
  app.add_option("--of", opt.of, "observables or propositions")->delimiter(',');
  app.add_option("--prep", opt.prep, "preparation of a composite");
  app.add_option("--local", opt.local, "observer generators for split")->delimiter(',');
  app.add_option("--profile", opt.profile, "wdw field: product | ridge | custom")
      ->check(CLI::IsMember({"product", "ridge", "custom"}));
  app.add_option("--width", opt.width, "ridge width");
  app.add_option("--k", opt.k, "product frequency");
  app.add_option("--n", opt.n, "grid points per axis (wdw) or matrix dimension (matter)");
  app.add_option("--agents", opt.agents, "number of time slots for sync");
  app.add_option("--offsets", opt.offsets, "sync offsets of slots 2..K relative to slot 1")->delimiter(',');
  app.add_option("--horizon", opt.horizon, "half-width m of the time window");
  app.add_option("--band", opt.band, "synchronization tolerance");
  app.add_option("--map", opt.map, "operationalization: coarse | integers");
  app.add_option("--field", opt.field, "CSV field for --profile custom");
  app.add_option("--out", out_path, "write the report to FILE instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::optional<wqt::dsl::Model> model;
  if (!model_path.empty()) {
    const auto text = read_file(model_path);
    if (!text) {
      std::cerr << "wqt: cannot read '" << model_path << "'\n";
      return kExitUsage;
    }
    try {
      model = wqt::dsl::parse_model(*text);
    } catch (const wqt::dsl::ParseError& e) {
      std::cerr << model_path << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << "\n";
      return kExitUsage;
    } catch (const wqt::Error& e) {
      std::cerr << model_path << ": error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  const auto result = wqt::cli::execute_command(command, model ? &*model : nullptr, opt);
  if (result.exit_code == kExitUsage) {
    std::cerr << "wqt " << command << ": " << result.diagnostics << "\n";
    return kExitUsage;
  }
  if (out_path.empty()) {
    std::cout << result.report;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "wqt: cannot write '" << out_path << "'\n";
      return kExitUsage;
    }
    out << result.report;
  }
  return result.exit_code;
}
