#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "nlfe/errors.hpp"

int main(int argc, char** argv) {
  using namespace nlfe::cli;

  CLI::App app{"Fluctuation-renormalized permittivities and heat radiation of chi3 media"};
  app.require_subcommand(1);
  std::string config_file, out_dir;
  unsigned threads = 0;
  double rel_tol = 0.0, abs_tol = 0.0;
  app.add_option("--config", config_file, "INI-style config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--rel-tol", rel_tol, "Relative quadrature tolerance");
  app.add_option("--abs-tol", abs_tol, "Absolute quadrature tolerance");
  for (const char* name : {"fig1", "fig2", "fig3", "fig4", "sphere", "scan", "selftest"})
    app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const Command command = *parse_command(app.get_subcommands().front()->get_name());

  try {
    IniDocument doc;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot read " + config_file);
      doc = IniDocument::parse(in, config_file);
    }
    const auto set_number = [&](const char* key, double v) { doc.set(key, format_number(v)); };
    if (!out_dir.empty()) doc.set("output.dir", out_dir);
    if (threads > 0) doc.set("output.threads", std::to_string(threads));
    if (app.count("--rel-tol")) set_number("quadrature.rel_tol", rel_tol);
    if (app.count("--abs-tol")) set_number("quadrature.abs_tol", abs_tol);

    const RunConfig config = load_config(command, doc);
    return execute(config, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlfe::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
