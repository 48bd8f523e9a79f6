// fracdisc: command-line front end for the fractional discretization toolkit.
//
//   fracdisc <mode> --config <path> [--out <path>] [--sweep <field>=<v1,...>]
//
// Exit status: 0 on success, 1 on a configuration or runtime error, 2 when
// the run completed but an [expect] assertion in the config failed.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fracdisc/config.hpp"
#include "fracdisc/run.hpp"

namespace {

int report_failures(const std::vector<std::string>& failures) {
  for (const std::string& f : failures) std::cerr << "fracdisc: " << f << '\n';
  return failures.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete fractional-order operators, plants and PI^lambda D^delta loops"};
  std::string mode_arg;
  std::string config_path;
  std::string out_path;
  std::string sweep_arg;
  app.add_option("mode", mode_arg,
                 "coeffs | operator | simulate-system | simulate-loop | example | freq-resp")
      ->required();
  app.add_option("--config", config_path, "Run configuration file")->required();
  app.add_option("--out", out_path, "Output CSV path (default: [output] path, else stdout)");
  app.add_option("--sweep", sweep_arg,
                 "Run once per value, e.g. T=0.1,0.05 or L=1,2,5; writes one CSV each");
  CLI11_PARSE(app, argc, argv);

  using namespace fracdisc;
  try {
    const std::optional<Mode> mode = parse_mode(mode_arg);
    if (!mode) throw std::invalid_argument("unknown mode '" + mode_arg + "'");
    const RunConfig cfg = load_config(config_path);
    if (cfg.mode != *mode) {
      throw std::invalid_argument("mode " + std::string(mode_name(*mode)) +
                                  " does not match config mode " +
                                  std::string(mode_name(cfg.mode)));
    }
    if (out_path.empty() && cfg.output_path) out_path = *cfg.output_path;

    if (!sweep_arg.empty()) {
      if (out_path.empty()) throw std::invalid_argument("--sweep requires an output path");
      const SweepSpec sweep = parse_sweep(sweep_arg);
      const auto outcomes = run_sweep(cfg, sweep, out_path, sweep_threads_from_env());
      std::vector<std::string> failures;
      for (const SweepOutcome& o : outcomes) {
        if (!o.error.empty()) throw std::runtime_error(o.path + ": " + o.error);
        for (const std::string& f : o.failures) failures.push_back(o.path + ": " + f);
      }
      return report_failures(failures);
    }

    const Table table = execute(cfg);
    const std::string csv = to_csv(table);
    if (out_path.empty()) {
      std::cout << csv;
    } else {
      write_file(out_path, csv);
    }
    return report_failures(check_expectations(table, cfg));
  } catch (const std::exception& ex) {
    std::cerr << "fracdisc: error: " << ex.what() << '\n';
    return 1;
  }
}
