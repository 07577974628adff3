#pragma once

#include <string>

#include "json.hpp"

#include "germlie/series.hpp"

namespace germlie {

using json = nlohmann::json;

/// Row-major list of [re, im] pairs plus the shape.
json coeff_to_json(const Coeff& c);
Coeff coeff_from_json(const json& j, int rows, int cols);

json point_to_json(const Point& p);
Point point_from_json(const json& j);

/// {anchor, degree_bound, coeffs: [[multi-index], [[re, im]...]], radius, tail_bound, ...}
///
/// Only nonzero coefficients are written. Doubles are written with 17
/// significant digits, so a round trip is exact.
json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const json& j);

std::string dump_series(const TruncatedSeries& s);
TruncatedSeries parse_series(const std::string& text);

}  // namespace germlie
