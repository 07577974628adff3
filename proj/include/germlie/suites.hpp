#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "germlie/json_io.hpp"
#include "germlie/report.hpp"

namespace germlie {

struct RunConfig {
  std::string suite = "all";
  std::uint64_t seed = 0;
  /// Overrides the trial count of every check when set.
  std::optional<int> trials;
  double r = 0.1;
  double rho0 = 1.0;
  int degree = 12;
  int bch_order = 8;
  int steps = 64;
  int dim = 2;
  std::string out = "germlie-out";

  /// Throws PreconditionError for an unknown suite or out-of-range parameters.
  void validate() const;
  json to_json() const;
  int trials_or(int fallback) const { return trials ? *trials : fallback; }
};

const std::vector<std::string>& suite_names();

// One function per property check. Each draws from its own substream of the seed.

CheckReport check_bch_pairs(const RunConfig& c);
CheckReport check_local_axioms(const RunConfig& c);
CheckReport check_sup_estimate(const RunConfig& c);
/// Details hold one row per (n, l, eps) and the extremal witnesses.
CheckReport check_compact_regularity(const RunConfig& c);
CheckReport check_factorization(const RunConfig& c);
CheckReport check_union_strategy(const RunConfig& c);
CheckReport check_cross_basis(const RunConfig& c);
CheckReport check_exp_log(const RunConfig& c);
CheckReport check_group_axioms(const RunConfig& c);
CheckReport check_adjoint(const RunConfig& c);
CheckReport check_evolution(const RunConfig& c);
CheckReport check_roundtrips(const RunConfig& c);
CheckReport check_complexification(const RunConfig& c);

struct SuiteRun {
  std::vector<std::pair<std::string, CheckReport>> checks;  ///< (suite, report)
  /// Extra CSV artifacts as (file name, contents).
  std::vector<std::pair<std::string, std::string>> files;
  bool passed() const;
};

SuiteRun run_suite(const RunConfig& c);

/// {"schema": 1, "config", "suite", "passed", "checks"}.
json report_json(const RunConfig& c, const SuiteRun& run);
/// suite,check,trials,failures,worst_margin,passed
std::string summary_csv(const SuiteRun& run);

}  // namespace germlie
