#pragma once

#include <cstdint>
#include <random>

#include "germlie/coefficient.hpp"
#include "germlie/series.hpp"

namespace germlie {

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream); splitmix64 on the pair.
Rng substream(std::uint64_t seed, std::uint64_t stream);

/// Stable 64-bit tag for a name, used to derive per-check streams.
std::uint64_t stream_tag(const char* name);

/// Entries with independent standard complex normal real and imaginary parts.
Coeff random_coeff(Rng& rng, const CoefficientSpace& space);

/// Rescaled to the given norm.
Coeff random_coeff_with_norm(Rng& rng, const CoefficientSpace& space, double norm);

/// Random point in the closed ball of radius r around `center`.
Point random_point_in_ball(Rng& rng, const Point& center, double r);

/// Random polynomial series of majorant norm `majorant` on its ball.
/// `decay` in (0, 1] damps degree-k coefficients by decay^k before rescaling.
TruncatedSeries random_series(Rng& rng, const CoefficientSpace& space, const Point& anchor,
                              int degree, double radius, double majorant, double decay = 1.0);

}  // namespace germlie
