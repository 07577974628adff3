#include "germlie/random.hpp"

#include <cmath>
#include <numbers>

namespace germlie {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)),
                    static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                    static_cast<std::uint32_t>(splitmix64(stream ^ 0x5851f42d4c957f2dULL)),
                    static_cast<std::uint32_t>(splitmix64(stream ^ 0x5851f42d4c957f2dULL) >> 32)};
  return Rng(seq);
}

std::uint64_t stream_tag(const char* name) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char* p = name; *p != '\0'; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 0x100000001b3ULL;
  }
  return h;
}

Coeff random_coeff(Rng& rng, const CoefficientSpace& space) {
  std::normal_distribution<double> normal;
  Coeff c(space.rows(), space.cols());
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = cplx(normal(rng), normal(rng));
  return c;
}

Coeff random_coeff_with_norm(Rng& rng, const CoefficientSpace& space, double norm) {
  Coeff c = random_coeff(rng, space);
  const double n = space.norm(c);
  return n > 0.0 ? Coeff(c * (norm / n)) : c;
}

Point random_point_in_ball(Rng& rng, const Point& center, double r) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  const auto d = center.size();
  Point dir(d);
  for (Eigen::Index i = 0; i < d; ++i) dir(i) = cplx(normal(rng), normal(rng));
  const double len = dir.norm();
  // uniform in the real 2d-dimensional ball
  const double scale = r * std::pow(unit(rng), 1.0 / (2.0 * static_cast<double>(d)));
  return center + dir * (scale / len);
}

TruncatedSeries random_series(Rng& rng, const CoefficientSpace& space, const Point& anchor,
                              int degree, double radius, double majorant, double decay) {
  const int dim = static_cast<int>(anchor.size());
  const int count = term_count(dim, degree);
  std::vector<Coeff> coeffs;
  coeffs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int k = total_degree(multi_index_at(dim, i));
    coeffs.push_back(random_coeff(rng, space) * (std::pow(decay, k) / std::pow(radius, k)));
  }
  TruncatedSeries s(space, anchor, degree, radius, std::move(coeffs));
  const double m = s.polynomial_majorant(radius);
  if (m == 0.0) return s;
  return series_scale(s, majorant / m);
}

}  // namespace germlie
