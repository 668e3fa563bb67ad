#include <CLI11.hpp>

#include <iostream>

#include "cmtomo/commands.hpp"
#include "cmtomo/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Symplectic and center-of-mass tomograms of oscillator product states"};
  app.require_subcommand(1);

  cmtomo::RunOptions opt;
  int threads = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;

  const char* names[][2] = {
      {"marginal", "single-mode tomogram on a grid"},
      {"cm", "center-of-mass tomogram of the configured product state"},
      {"clt-scan", "fixed-energy scan over the number of modes"},
      {"hbar-scan", "classical-limit scan over hbar"},
      {"reconstruct", "density matrix from the tomogram of one mode"},
      {"discrepancy", "printed closed forms against independent values"},
  };
  for (const auto& [name, help] : names) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "experiment config file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output path (stdout when omitted)");
    sub->add_option("--seed", seed, "Monte-Carlo seed");
    sub->add_flag("--all-backends", opt.all_backends, "add CF-product and Monte-Carlo columns (cm)");
    sub->add_option("--epsilon", epsilon, "half-width of the concentration window");
    sub->add_option("--threads", threads, "OpenMP thread count")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cmtomo::exit_config;
  }

  auto* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opt.seed = seed;
  if (sub->count("--epsilon")) opt.epsilon = epsilon;
  if (threads > 0) cmtomo::set_threads(threads);
  return cmtomo::run_command(sub->get_name(), opt, std::cout, std::cerr);
}
