#include "germlie/json_io.hpp"

#include "germlie/errors.hpp"

namespace germlie {

json coeff_to_json(const Coeff& c) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      entries.push_back({c(i, k).real(), c(i, k).imag()});
    }
  }
  return entries;
}

Coeff coeff_from_json(const json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols) {
    throw StructuralError("coefficient entry count does not match the coefficient space");
  }
  Coeff c(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < cols; ++k) {
      const json& e = j.at(static_cast<std::size_t>(i * cols + k));
      c(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return c;
}

json point_to_json(const Point& p) {
  json out = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back({p(i).real(), p(i).imag()});
  return out;
}

Point point_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > 2) {
    throw StructuralError("anchor must be a list of one or two [re, im] pairs");
  }
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    p(static_cast<Eigen::Index>(i)) = cplx(j[i].at(0).get<double>(), j[i].at(1).get<double>());
  }
  return p;
}

json series_to_json(const TruncatedSeries& s) {
  json coeffs = json::array();
  for (int i = 0; i < static_cast<int>(s.coeffs().size()); ++i) {
    const Coeff& c = s.coeff(i);
    if (c.isZero(0.0)) continue;
    const MultiIndex k = multi_index_at(s.dim(), i);
    json index = s.dim() == 1 ? json::array({k[0]}) : json::array({k[0], k[1]});
    coeffs.push_back({index, coeff_to_json(c)});
  }
  return {
      {"anchor", point_to_json(s.anchor())},
      {"degree_bound", s.degree_bound()},
      {"space", {{"kind", to_string(s.space().kind())}, {"m", s.space().m()}}},
      {"coeffs", coeffs},
      {"radius", s.radius()},
      {"tail_bound", s.tail_bound()},
      {"tail_parts", {{"high_order", s.high_order_tail()}, {"flat", s.flat_tail()}}},
  };
}

TruncatedSeries series_from_json(const json& j) {
  const Point anchor = point_from_json(j.at("anchor"));
  const int degree = j.at("degree_bound").get<int>();
  CoefficientSpace space = CoefficientSpace::scalar();
  if (j.contains("space")) {
    const CoeffKind kind = coeff_kind_from_string(j["space"].at("kind").get<std::string>());
    const int m = j["space"].value("m", 1);
    if (kind == CoeffKind::Vector) space = CoefficientSpace::vector(m);
    if (kind == CoeffKind::Matrix) space = CoefficientSpace::matrix(m);
  }
  const int dim = static_cast<int>(anchor.size());
  std::vector<Coeff> coeffs(static_cast<std::size_t>(term_count(dim, degree)), space.zero());
  for (const json& entry : j.at("coeffs")) {
    const json& index = entry.at(0);
    if (static_cast<int>(index.size()) != dim) {
      throw StructuralError("multi-index length does not match the anchor dimension");
    }
    MultiIndex k{index.at(0).get<int>(), dim == 2 ? index.at(1).get<int>() : 0};
    if (k[0] < 0 || k[1] < 0 || total_degree(k) > degree) {
      throw StructuralError("multi-index exceeds the degree bound");
    }
    coeffs[static_cast<std::size_t>(flat_index(dim, k))] =
        coeff_from_json(entry.at(1), space.rows(), space.cols());
  }
  double high = j.at("tail_bound").get<double>();
  double flat = 0.0;
  if (j.contains("tail_parts")) {
    high = j["tail_parts"].at("high_order").get<double>();
    flat = j["tail_parts"].at("flat").get<double>();
  }
  return TruncatedSeries(space, anchor, degree, j.at("radius").get<double>(), std::move(coeffs),
                         high, flat);
}

std::string dump_series(const TruncatedSeries& s) { return series_to_json(s).dump(); }

TruncatedSeries parse_series(const std::string& text) {
  return series_from_json(json::parse(text));
}

}  // namespace germlie
