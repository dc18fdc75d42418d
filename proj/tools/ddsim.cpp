// Command-line front end: one subcommand per experiment kind.
//
// Exit codes: 0 success, 1 invalid configuration or arguments, 2 runtime or
// numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "ddsim/config.hpp"
#include "ddsim/errors.hpp"
#include "ddsim/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ddsim::ConfigError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error(path + ": cannot write");
}

void report(const char* kind, const std::exception& e) {
  const bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO) != 0;
  std::cerr << (color ? "\033[31m" : "") << "ddsim: " << kind << ": " << (color ? "\033[0m" : "") << e.what()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical-decoupling simulator and average-Hamiltonian analyzer"};
  app.set_version_flag("--version", std::string("ddsim ") + ddsim::tool_version());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> format;
  std::optional<std::string> out;

  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"toggling", "Toggling-frame Hamiltonians and average Hamiltonian terms"},
      {"evolve", "Propagate one sequence and record fidelity and magnetization"},
      {"compare", "Propagate several sequences over the same realizations"},
      {"scan", "Final-time fidelity over a swept parameter"},
      {"fid", "Free-induction decay time per realization"},
  };
  for (const auto& [name, help] : kinds) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "YAML run configuration")->required();
    sub->add_option("--seed", seed, "Override run.seed");
    sub->add_option("--out", out, "Override output.path ('-' for stdout)");
    sub->add_option("--format", format, "Override output.format")
        ->check(CLI::IsMember({"csv", "structured", "json"}));
    sub->add_option("--workers", workers, "Override run.workers")->check(CLI::PositiveNumber);
  }
  app.add_subcommand("config-reference", "Print every configuration key with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    auto* sub = app.get_subcommands().front();
    if (sub->get_name() == "config-reference") {
      std::cout << ddsim::config_reference();
      return 0;
    }
    const auto kind = ddsim::experiment_from_string(sub->get_name());
    ddsim::RunConfig config = ddsim::parse_config(read_file(config_path), config_path);
    ddsim::RunOverrides overrides;
    overrides.seed = seed;
    overrides.workers = workers;
    overrides.out = out;
    if (format) overrides.format = ddsim::output_format_from_string(*format);
    ddsim::apply_overrides(config, overrides);
    write_output(config.output.path, ddsim::run_experiment(kind, config));
    return 0;
  } catch (const ddsim::ConfigError& e) {
    report("config error", e);
    return 1;
  } catch (const ddsim::ArgumentError& e) {
    report("invalid argument", e);
    return 1;
  } catch (const ddsim::ValidationError& e) {
    report("invalid input", e);
    return 1;
  } catch (const ddsim::UnsupportedAngleError& e) {
    report("unsupported", e);
    return 1;
  } catch (const std::exception& e) {
    report("runtime error", e);
    return 2;
  }
}
