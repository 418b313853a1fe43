#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "osg/osg.hpp"

namespace {

// 0: success. 1: the model rejected the request at runtime, or validation
// checks failed. 2: the input itself was bad (config, flags, files).
constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitBadInput = 2;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw osg::IoError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical Stern-Gerlach quantum-eraser model: densities, Wigner "
               "distributions, summaries and numeric cross-checks"};
  app.require_subcommand(1);

  std::string config_path, out_path, outcome_flag, kind_flag;
  int which = 0;

  CLI::App* density = app.add_subcommand("density", "write position densities as CSV");
  density->add_option("--config", config_path, "scenario JSON")->required();
  density->add_option("--out", out_path, "output CSV path");
  density->add_option("--outcome", outcome_flag, "zero | one | none")
      ->check(CLI::IsMember({"zero", "one", "none"}));

  CLI::App* wigner = app.add_subcommand("wigner", "write a Wigner distribution as CSV");
  wigner->add_option("--config", config_path, "scenario JSON")->required();
  wigner->add_option("--out", out_path, "output CSV path");
  wigner->add_option("--kind", kind_flag, "reduced | zero | one | interference")
      ->check(CLI::IsMember({"reduced", "zero", "one", "interference"}));

  CLI::App* summary = app.add_subcommand("summary", "print scenario report as JSON");
  summary->add_option("--config", config_path, "scenario JSON")->required();
  summary->add_option("--out", out_path, "also write the report here");

  CLI::App* validate = app.add_subcommand("validate", "run the numeric cross-check matrix");
  validate->add_option("--config", config_path, "scenario JSON")->required();
  validate->add_option("--out", out_path, "also write the report here");

  CLI::App* figures = app.add_subcommand("figures", "render a bundled scenario preset");
  figures->add_option("--which", which, "preset number")
      ->required()
      ->check(CLI::IsMember({2, 3, 4}));
  figures->add_option("--out", out_path, "output directory (default: .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (density->parsed()) {
      osg::ScenarioConfig cfg = osg::load_scenario_file(config_path);
      if (!outcome_flag.empty()) cfg.outcome = osg::detail::parse_outcome(outcome_flag);
      const std::string out = !out_path.empty() ? out_path
                              : !cfg.out.empty() ? cfg.out
                                                 : std::string("density.csv");
      const auto side = osg::cmd_density(cfg, out);
      std::cout << side.dump(2) << "\n";
      return kExitOk;
    }
    if (wigner->parsed()) {
      osg::ScenarioConfig cfg = osg::load_scenario_file(config_path);
      if (!kind_flag.empty()) cfg.kind = osg::detail::parse_kind(kind_flag);
      const std::string out = !out_path.empty() ? out_path
                              : !cfg.out.empty() ? cfg.out
                                                 : std::string("wigner.csv");
      const auto side = osg::cmd_wigner(cfg, out);
      std::cout << side.dump(2) << "\n";
      return kExitOk;
    }
    if (summary->parsed()) {
      const osg::ScenarioConfig cfg = osg::load_scenario_file(config_path);
      const auto report = osg::cmd_summary(cfg);
      std::cout << report.dump(2) << "\n";
      if (!out_path.empty()) write_text(out_path, report.dump(2) + "\n");
      return kExitOk;
    }
    if (validate->parsed()) {
      const osg::ScenarioConfig cfg = osg::load_scenario_file(config_path);
      const auto [report, all_pass] = osg::cmd_validate(cfg);
      std::cout << report.dump(2) << "\n";
      if (!out_path.empty()) write_text(out_path, report.dump(2) + "\n");
      return all_pass ? kExitOk : kExitRuntime;
    }
    if (figures->parsed()) {
      const std::string dir = out_path.empty() ? std::string(".") : out_path;
      const auto manifest = osg::cmd_figures(which, dir);
      std::cout << manifest.dump(2) << "\n";
      return kExitOk;
    }
  } catch (const osg::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const osg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const osg::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const osg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitBadInput;
}
