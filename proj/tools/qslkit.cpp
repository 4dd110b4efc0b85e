#include <iostream>

#include "qslkit/cli.hpp"

int main(int argc, char** argv) {
  qslkit::cli::RunConfig cfg;
  CLI::App app{"Quantum speed limits for a detuned, damped two-level atom", "qslkit"};
  qslkit::cli::configure_app(app, cfg);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qslkit::cli::kInputError;
  }
  return qslkit::cli::run(cfg, std::cout, std::cerr);
}
