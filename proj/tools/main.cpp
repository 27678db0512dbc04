#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string csv;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  double tol = 0.0;
  int threads = 0;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "config file, one JSON object per line ('-' for stdin)")->required();
  sub->add_option("--seed", f.seed, "random seed, overrides the config");
  sub->add_option("--threads", f.threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  sub->add_option("--budget", f.budget, "cap on integrand evaluations and Monte Carlo samples");
  sub->add_option("--tol", f.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--out", f.out, "append records to this file instead of stdout");
  sub->add_option("--csv", f.csv, "also write a CSV table of the records");
}

int run(const std::string& command, const Flags& f, const CLI::App& sub) {
  using namespace masep::cli;
  GlobalOptions g;
  g.threads = f.threads;
  if (sub.count("--seed")) g.seed = f.seed;
  if (sub.count("--budget")) g.budget = f.budget;
  if (sub.count("--tol")) g.tol = f.tol;

  std::vector<RunConfig> configs;
  try {
    configs = f.config == "-" ? read_configs(std::cin) : read_config_file(f.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return validation;
  }
  if (configs.empty()) {
    std::cerr << "error: config holds no queries\n";
    return validation;
  }

  std::unique_ptr<std::ofstream> file;
  if (!f.out.empty()) {
    file = std::make_unique<std::ofstream>(f.out, std::ios::app);
    if (!*file) {
      std::cerr << "error: cannot open '" << f.out << "'\n";
      return validation;
    }
  }
  std::ostream& out = file ? *file : std::cout;
  std::unique_ptr<std::ofstream> csv;
  if (!f.csv.empty()) {
    csv = std::make_unique<std::ofstream>(f.csv);
    if (!*csv) {
      std::cerr << "error: cannot open '" << f.csv << "'\n";
      return validation;
    }
    *csv << csv_header() << "\n";
  }

  int status = ok;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    ResultRecord r;
    try {
      r = run_command(command, configs[i], g);
    } catch (const std::exception& e) {
      std::cerr << "error: query " << i + 1 << ": " << e.what() << "\n";
      return exit_code_for(e);
    }
    out << record_line(r) << "\n";
    if (csv) *csv << csv_row(i, r) << "\n";
    if (command == "verify" && r.value != 0.0) status = verification_failed;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and simulated transition probabilities for multi-species exclusion processes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(masep::version));
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"green", "transition probability between two configurations"},
      {"crossing", "total-crossing probability"},
      {"wall", "cumulative crossing past two walls"},
      {"simulate", "Gillespie trajectories and Monte Carlo estimates"},
      {"verify", "identity and vertex-model check suites"}};
  for (auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : masep::cli::validation;
  }
  for (auto* sub : app.get_subcommands()) return run(sub->get_name(), flags, *sub);
  return masep::cli::validation;
}
