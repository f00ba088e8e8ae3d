#pragma once

// JSON wire format for complex matrices:
//   {"rows": r, "cols": c, "re": [...], "im": [...]}
// with entries flattened in row-major order.

#include <json.hpp>

#include "densecode/qmat.hpp"

namespace densecode {

using json = nlohmann::ordered_json;

inline json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  j["re"] = re;
  j["im"] = im;
  return j;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("re") || !j.contains("im"))
    throw std::invalid_argument("matrix_from_json: expected {rows, cols, re, im}");
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix_from_json: dims must be positive");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != rows * cols || static_cast<Eigen::Index>(im.size()) != rows * cols)
    throw std::invalid_argument("matrix_from_json: re/im length must equal rows*cols");
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto k = r * cols + c;
      m(r, c) = cxd(re.at(k).get<double>(), im.at(k).get<double>());
    }
  return m;
}

}  // namespace densecode
