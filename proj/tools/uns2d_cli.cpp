// Command-line front end; talks to the solver only through the C interface.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uns2d/uns2d.h"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kBlowUp = 3 };

int exit_code(uns2d_status s) {
  switch (s) {
    case UNS2D_OK: return kOk;
    case UNS2D_ERR_CONFIG: return kConfig;
    case UNS2D_ERR_BLOWUP: return kBlowUp;
    default: return kFailure;
  }
}

struct Args {
  std::string config;
  std::string out = "out";
  std::vector<double> dts;
  std::optional<long> samples;
  std::optional<unsigned long long> seed;
  std::optional<double> s;
};

int execute(const std::string& command, const Args& a) {
  uns2d_config* cfg = nullptr;
  uns2d_status st = uns2d_config_load(a.config.c_str(), &cfg);
  if (st != UNS2D_OK) {
    std::fprintf(stderr, "uns2d: %s\n", uns2d_last_error());
    return exit_code(st);
  }
  uns2d_options opt{};
  long samples = 0;
  unsigned long long seed = 0;
  double s = 0.0;
  if (!a.dts.empty()) {
    opt.dts = a.dts.data();
    opt.dts_count = a.dts.size();
  }
  if (a.samples) {
    samples = *a.samples;
    opt.samples = &samples;
  }
  if (a.seed) {
    seed = *a.seed;
    opt.seed = &seed;
  }
  if (a.s) {
    s = *a.s;
    opt.s = &s;
  }
  char* summary = nullptr;
  st = uns2d_execute(command.c_str(), cfg, a.out.c_str(), &opt, &summary);
  uns2d_config_free(cfg);
  if (summary) {
    std::fputs(summary, stdout);
    uns2d_string_free(summary);
  }
  if (st != UNS2D_OK) std::fprintf(stderr, "uns2d: %s\n", uns2d_last_error());
  return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D incompressible Navier-Stokes solver and experiment harness"};
  app.set_version_flag("--version", std::string(uns2d_version()));
  app.require_subcommand(1);

  Args args;
  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", args.config, "JSON config file")->required();
    sub->add_option("--out", args.out, "output directory")->capture_default_str();
    return sub;
  };
  add("run", "run the configured simulation");
  add("sweep-stability", "stability sweep over time steps")
      ->add_option("--dts", args.dts, "comma-separated time steps")
      ->delimiter(',');
  CLI::App* stokes = add("verify-stokes", "sample the Stokes-pressure estimate");
  stokes->add_option("--samples", args.samples, "number of samples");
  stokes->add_option("--seed", args.seed, "random seed");
  add("decay", "divergence decay experiment");
  add("converge", "manufactured-solution convergence study");
  add("cavity", "lid-driven cavity to steady state");
  CLI::App* probe = add("probe-n2d", "Neumann-to-Dirichlet ratio probe");
  probe->add_option("--s", args.s, "strip width");
  probe->add_option("--samples", args.samples, "number of samples");
  probe->add_option("--seed", args.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  return execute(app.get_subcommands().front()->get_name(), args);
}
