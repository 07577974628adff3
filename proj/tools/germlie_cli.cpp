#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "germlie/complexify.hpp"
#include "germlie/errors.hpp"
#include "germlie/suites.hpp"

namespace fs = std::filesystem;
using namespace germlie;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out << text;
  if (!out) throw PreconditionError("cannot write " + path.string());
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw PreconditionError("output directory '" + dir + "' is not writable");
  return fs::path(dir);
}

void print_summary(const std::vector<std::pair<std::string, CheckReport>>& checks) {
  for (const auto& [suite, r] : checks) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << suite << '/' << r.check << "  trials=" << r.trials
              << " failures=" << r.failure_count << '\n';
    if (!r.passed) {
      for (const auto& f : r.failures) std::cout << "    " << f.dump() << '\n';
    }
  }
}

int run_command(const RunConfig& cfg) {
  cfg.validate();
  const fs::path out = prepare_out(cfg.out);
  const SuiteRun run = run_suite(cfg);
  write_file(out / (cfg.suite + "_report.json"), report_json(cfg, run).dump(2) + "\n");
  write_file(out / (cfg.suite + "_summary.csv"), summary_csv(run));
  for (const auto& [name, text] : run.files) write_file(out / name, text);
  print_summary(run.checks);
  std::cout << (run.passed() ? "all checks passed" : "some checks failed") << '\n';
  return run.passed() ? kPass : kFail;
}

int atlas_command(const std::string& input, const std::string& example, double height, const std::string& out_dir,
                  bool save) {
  RealAtlas atlas = [&] {
    if (!input.empty()) {
      std::ifstream in(input);
      if (!in) throw PreconditionError("cannot read " + input);
      return RealAtlas::from_json(json::parse(in));
    }
    if (example == "circle") return circle_atlas();
    if (example == "tan") return tan_atlas();
    if (example == "interval") return interval_atlas();
    throw PreconditionError("unknown example atlas '" + example + "'");
  }();
  const fs::path out = prepare_out(out_dir);
  if (save) write_file(out / "atlas.json", atlas.to_json().dump(2) + "\n");

  const ComplexAtlas ca = extend_transitions(atlas, height);
  CheckReport margins("margins", {{"height", height}});
  margins.record(ca.margins_positive() ? -1.0 : 1.0, {{"margins_positive", ca.margins_positive()}});
  auto cocycles = certify_cocycles(ca);
  json report = {{"schema", 1},
                 {"config", {{"input", input}, {"example", example}, {"height", height}}},
                 {"passed", margins.passed && cocycles.passed},
                 {"checks", {margins.to_json(), cocycles.to_json()}},
                 {"complex_atlas", ca.to_json()}};
  write_file(out / "atlas_report.json", report.dump(2) + "\n");
  print_summary({{"atlas", margins}, {"atlas", cocycles}});
  return report["passed"].get<bool>() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Germ spaces, germ groups and complexifications: property-check runner"};
  app.require_subcommand(1);

  RunConfig cfg;
  int trials = 0;
  auto* run = app.add_subcommand("run", "Run a check suite and write reports");
  run->add_option("--suite", cfg.suite, "germ-space | lie-local | lie-global | regularity | complexify | all")
      ->capture_default_str();
  run->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  auto* trials_opt = run->add_option("--trials", trials, "Trial count for every check (default: per check)");
  run->add_option("--r", cfg.r, "Radius ratio r in (0, 1/(2e))")->capture_default_str();
  run->add_option("--rho0", cfg.rho0, "Base radius")->capture_default_str();
  run->add_option("--degree", cfg.degree, "Truncation degree N")->capture_default_str();
  run->add_option("--bch-order", cfg.bch_order, "BCH truncation order")->capture_default_str();
  run->add_option("--steps", cfg.steps, "Evolution steps")->capture_default_str();
  run->add_option("--dim", cfg.dim, "Matrix dimension m")->capture_default_str();
  run->add_option("--out", cfg.out, "Output directory")->capture_default_str();

  std::string atlas_in;
  std::string atlas_example = "circle";
  double height = 0.5;
  std::string atlas_out = "germlie-out";
  bool save_atlas = false;
  auto* atlas = app.add_subcommand("atlas", "Complexify a real-analytic atlas and certify it");
  atlas->add_option("--in", atlas_in, "Atlas JSON {charts, transitions}");
  atlas->add_option("--example", atlas_example, "circle | tan | interval, used without --in")->capture_default_str();
  atlas->add_option("--height", height, "Requested rectangle height")->capture_default_str();
  atlas->add_option("--out", atlas_out, "Output directory")->capture_default_str();
  atlas->add_flag("--save", save_atlas, "Also write the real atlas as atlas.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*run) {
      if (*trials_opt) cfg.trials = trials;
      return run_command(cfg);
    }
    return atlas_command(atlas_in, atlas_example, height, atlas_out, save_atlas);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "check aborted: " << e.what() << '\n';
    return kFail;
  }
}
