// sqzkit: command-line front end for the squeezed-light toolkit.
//
//   sqzkit <command> --scenario FILE [--data FILE] [--out DIR]
//          [--sweep KEY=LO:HI:N] [--sensitivity]
//
// Commands: cavity-design, opo-curve, fit, loss-correct, network,
// reproduce-paper. Tables go to stdout and, when an output directory is
// given (--out or SQZKIT_OUT), to DIR/<table>.csv.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sqzkit/commands.hpp"

namespace {

using namespace sqzkit;
using sqzkit::cli::CommandOutput;

struct Sweep {
  std::string key;
  double lo, hi;
  int count;
};

Sweep parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("--sweep: expected KEY=LO:HI:N");
  Sweep s;
  s.key = spec.substr(0, eq);
  const std::string range = spec.substr(eq + 1);
  const auto c1 = range.find(':');
  const auto c2 = range.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw InputError("--sweep: expected KEY=LO:HI:N");
  }
  try {
    std::size_t used = 0;
    s.lo = std::stod(range.substr(0, c1));
    s.hi = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
    const std::string n = range.substr(c2 + 1);
    s.count = std::stoi(n, &used);
    if (used != n.size()) throw std::invalid_argument(n);
  } catch (const std::logic_error&) {
    throw InputError("--sweep: cannot parse '" + range + "'");
  }
  if (s.count < 1) throw InputError("--sweep: N must be >= 1");
  return s;
}

CommandOutput dispatch(const std::string& command, const io::json& doc,
                       const std::optional<std::vector<FitPoint>>& data, bool sensitivity) {
  const io::Scenario scenario = io::parse_scenario(doc);
  if (command == "cavity-design") return cli::cmd_cavity_design(scenario);
  if (command == "opo-curve") return cli::cmd_opo_curve(scenario);
  if (command == "fit") {
    if (!data) throw InputError("fit: --data FILE is required");
    return cli::cmd_fit(scenario, *data);
  }
  if (command == "loss-correct") return cli::cmd_loss_correct(scenario, sensitivity);
  if (command == "network") return cli::cmd_network(scenario);
  throw InputError("unknown command '" + command + "'");
}

int run(const std::string& command, const std::string& scenario_path, const std::string& data_path,
        std::string out_dir, const std::string& sweep_spec, bool sensitivity) {
  if (out_dir.empty()) {
    if (const char* env = std::getenv("SQZKIT_OUT")) out_dir = env;
  }

  CommandOutput output;
  std::string digest_input;
  if (command == "reproduce-paper") {
    if (!scenario_path.empty() || !data_path.empty() || !sweep_spec.empty()) {
      throw InputError("reproduce-paper takes no scenario, data or sweep");
    }
    output = cli::cmd_reproduce_paper();
    digest_input = reference::kDatasetName;
  } else {
    if (scenario_path.empty()) throw InputError(command + ": --scenario FILE is required");
    const std::string text = io::read_file(scenario_path);
    digest_input = text;
    const io::json doc = io::parse_json_text(text, scenario_path);
    std::optional<std::vector<FitPoint>> data;
    if (!data_path.empty()) {
      const std::string csv = io::read_file(data_path);
      digest_input += csv;
      data = io::parse_fit_data(csv, data_path);
    }
    if (sweep_spec.empty()) {
      output = dispatch(command, doc, data, sensitivity);
    } else {
      const Sweep sweep = parse_sweep(sweep_spec);
      for (int k = 0; k < sweep.count; ++k) {
        const double v =
            sweep.count == 1 ? sweep.lo : sweep.lo + (sweep.hi - sweep.lo) * k / (sweep.count - 1);
        io::json trial = doc;
        io::set_by_path(trial, sweep.key, v);
        CommandOutput step = dispatch(command, trial, data, sensitivity);
        for (auto& nt : step.tables) nt.table.prepend_column({sweep.key, "sweep"}, v);
        if (k == 0) {
          output = std::move(step);
        } else {
          for (std::size_t t = 0; t < output.tables.size(); ++t) {
            output.tables[t].table.append_rows(step.tables[t].table);
          }
          output.warnings.insert(output.warnings.end(), step.warnings.begin(), step.warnings.end());
          output.exit_code = std::max(output.exit_code, step.exit_code);
        }
      }
    }
  }

  const io::Provenance prov{command, io::digest(digest_input)};
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  for (std::size_t t = 0; t < output.tables.size(); ++t) {
    const auto& nt = output.tables[t];
    if (output.tables.size() > 1) std::cout << (t ? "\n" : "") << "# table: " << nt.name << '\n';
    nt.table.write_csv(std::cout, prov);
    if (!out_dir.empty()) {
      const auto path = std::filesystem::path(out_dir) / (nt.name + ".csv");
      std::ofstream f(path, std::ios::binary);
      if (!f) throw InputError("cannot write '" + path.string() + "'");
      nt.table.write_csv(f, prov);
    }
  }
  for (const auto& w : output.warnings) std::cerr << "sqzkit: warning: " << w << '\n';
  return output.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Squeezed-light OPO toolkit: cavity design, squeezing spectra, loss budgets, "
               "Gaussian networks"};
  std::string command, scenario, data, out_dir, sweep;
  bool sensitivity = false;
  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember({"cavity-design", "opo-curve", "fit", "loss-correct", "network",
                             "reproduce-paper"}));
  app.add_option("--scenario", scenario, "Scenario JSON file");
  app.add_option("--data", data, "Measured data CSV (fit)");
  app.add_option("--out", out_dir, "Output directory (default: $SQZKIT_OUT)");
  app.add_option("--sweep", sweep, "Sweep a numeric scenario key: KEY=LO:HI:N");
  app.add_flag("--sensitivity", sensitivity, "Add min/max columns from stage uncertainties");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitInputError;
  }

  try {
    return run(command, scenario, data, out_dir, sweep, sensitivity);
  } catch (const InputError& e) {
    std::cerr << "sqzkit: input error: " << e.what() << '\n';
  } catch (const StabilityError& e) {
    std::cerr << "sqzkit: geometry error: " << e.what() << '\n';
  } catch (const NoSolutionError& e) {
    std::cerr << "sqzkit: geometry error: " << e.what() << '\n';
  } catch (const FitError& e) {
    std::cerr << "sqzkit: fit error: " << e.what() << '\n';
  } catch (const IndexError& e) {
    std::cerr << "sqzkit: index error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    std::cerr << "sqzkit: invalid value: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "sqzkit: computation error: " << e.what() << '\n';
    return cli::kExitComputationError;
  }
  return cli::kExitInputError;
}
