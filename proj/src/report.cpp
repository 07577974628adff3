#include "germlie/report.hpp"

#include <algorithm>
#include <cmath>

namespace germlie {

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

bool CheckReport::record(double margin, const json& witness) {
  ++trials;
  if (std::isnan(margin)) margin = std::numeric_limits<double>::infinity();
  worst_margin = std::max(worst_margin, margin);
  if (margin <= 0.0) return true;
  fail(witness);
  return false;
}

void CheckReport::fail(const json& witness) {
  passed = false;
  ++failure_count;
  if (static_cast<int>(failures.size()) < kMaxListedFailures) failures.push_back(witness);
}

void CheckReport::absorb(const CheckReport& other) {
  trials += other.trials;
  worst_margin = std::max(worst_margin, other.worst_margin);
  passed = passed && other.passed;
  failure_count += other.failure_count;
  for (const auto& f : other.failures) {
    if (static_cast<int>(failures.size()) >= kMaxListedFailures) break;
    json tagged = f;
    if (tagged.is_object()) tagged["subcheck"] = other.check;
    failures.push_back(tagged);
  }
  details[other.check] = other.to_json();
}

json CheckReport::to_json() const {
  return {
      {"check", check},
      {"params", params},
      {"trials", trials},
      {"failures", failures},
      {"failure_count", failure_count},
      {"worst_margin", finite_or_null(worst_margin)},
      {"passed", passed},
      {"details", details},
  };
}

}  // namespace germlie
