#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "parmax/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "parmax - latency, throughput, and cost modeling for a fan-out/fan-in"
      " multi-agent tutoring pipeline"};
  app.set_version_flag("--version", PARMAX_VERSION_STR);
  app.require_subcommand(1);

  parmax::tools::register_sweep(app);
  parmax::tools::register_analyze(app);
  parmax::tools::register_cost(app);
  parmax::tools::register_recommend(app);
  parmax::tools::register_report(app);
  parmax::tools::register_calibrate(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message
    return 1;
  } catch (const parmax::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const parmax::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
