#include "ebp/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Elliptic boundary problems: normal forms, Bott paths and spectral flow"};
  app.require_subcommand(1);

  ebp::RunConfig cfg;
  std::vector<double> window;
  int grid = 0;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"check", "condition flags of a sampled boundary symbol family"},
      {"normalize", "deform an elliptic pair and boundary condition to normal form"},
      {"flow", "spectral flow of a loop of boundary problems"},
      {"glue", "spectra of the doubled and glued problems"},
      {"bott", "Bott path frames over an (eta, theta) grid"},
      {"dirac-flip", "spectral flow against the restricted symbol windings"},
      {"demo", "run the acceptance suite"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--input", cfg.input, "input JSON document");
    sub->add_option("--output", cfg.output, "report path; the report goes to stdout when omitted");
    sub->add_option("--grid", grid, "grid size");
    sub->add_option("--window", window, "spectral window lo,hi")->delimiter(',')->expected(2);
    sub->add_option("--seed", cfg.seed, "seed for randomized suites")->capture_default_str();
    sub->add_option("--tol-ellipticity", cfg.tol_ellipticity, "ellipticity margin")->capture_default_str();
    sub->add_option("--modes", cfg.modes, "Fourier truncation")->capture_default_str();
    sub->add_option("--engine", cfg.engine, "interval flow engine")
        ->check(CLI::IsMember({"shooting", "compression", "both"}))
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ebp::kExitInputError;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    cfg.command = sub->get_name();
    if (sub->count("--grid")) cfg.grid = grid;
  }
  if (window.size() == 2) cfg.window = std::make_pair(window[0], window[1]);
  return ebp::run(cfg, std::cout, std::cerr);
}
