#pragma once

#include <limits>
#include <string>

#include "germlie/json_io.hpp"

namespace germlie {

/// Outcome of one property check: {check, params, trials, failures, worst_margin, passed}.
///
/// A margin is residual minus tolerance, so a trial passes when its margin is
/// nonpositive. Only the first `kMaxListedFailures` failures are listed.
struct CheckReport {
  static constexpr int kMaxListedFailures = 20;

  std::string check;
  json params = json::object();
  int trials = 0;
  int failure_count = 0;
  json failures = json::array();
  double worst_margin = -std::numeric_limits<double>::infinity();
  bool passed = true;
  json details = json::object();

  CheckReport() = default;
  CheckReport(std::string name, json p) : check(std::move(name)), params(std::move(p)) {}

  /// Counts a trial and returns whether it passed.
  bool record(double margin, const json& witness = json::object());
  /// Marks the check as failed without a trial (e.g. a failed negative control).
  void fail(const json& witness);
  /// Folds another report in as a sub-check.
  void absorb(const CheckReport& other);

  json to_json() const;
};

}  // namespace germlie
