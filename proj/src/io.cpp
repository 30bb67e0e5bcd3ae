#include "tjd/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tjd {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

bool numeric_row(const std::vector<std::string>& cells) {
  double tmp;
  for (const auto& c : cells)
    if (!parse_double(c, tmp)) return false;
  return true;
}

}  // namespace

Vector parse_vector(const std::string& csv) {
  const auto cells = split(csv);
  if (cells.empty()) throw InvalidArgument("empty vector");
  Vector v(static_cast<Eigen::Index>(cells.size()));
  for (size_t i = 0; i < cells.size(); ++i) {
    double x;
    if (!parse_double(cells[i], x) || !std::isfinite(x)) throw InvalidArgument("bad number '" + cells[i] + "' in vector");
    v(static_cast<Eigen::Index>(i)) = x;
  }
  return v;
}

DatasetFile parse_dataset(std::istream& in, const std::string& source, const CsvOptions& opts) {
  DatasetFile ds;
  ds.path = source;
  std::vector<Vector> points;
  std::vector<double> weights;
  std::string line;
  size_t lineno = 0;
  size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first) {
      first = false;
      if (!numeric_row(cells)) {
        ds.header = cells;
        width = cells.size();
        ds.has_weights = opts.trailing_weights || (!cells.empty() && cells.back() == "weight");
        continue;
      }
      width = cells.size();
      ds.has_weights = opts.trailing_weights;
    }
    if (cells.size() != width)
      throw ParseError(source, lineno, "expected " + std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (size_t c = 0; c < cells.size(); ++c) {
      if (!parse_double(cells[c], row[c]))
        throw ParseError(source, lineno, "column " + std::to_string(c + 1) + ": not a number: '" + cells[c] + "'");
      if (!std::isfinite(row[c])) throw ParseError(source, lineno, "column " + std::to_string(c + 1) + ": non-finite value");
    }
    size_t dim = row.size();
    if (ds.has_weights) {
      if (dim < 2) throw ParseError(source, lineno, "weight column needs at least one coordinate");
      --dim;
      if (row.back() < 0.0) throw ParseError(source, lineno, "negative weight");
      weights.push_back(row.back());
    } else {
      weights.push_back(1.0);
    }
    Vector p(static_cast<Eigen::Index>(dim));
    for (size_t c = 0; c < dim; ++c) p(static_cast<Eigen::Index>(c)) = row[c];
    points.push_back(std::move(p));
    ds.line_numbers.push_back(lineno);
  }
  if (points.empty()) throw ParseError(source, lineno, "no data rows");
  ds.dimension = static_cast<int>(points.front().size());
  try {
    ds.data = WeightedPointSet::weighted(std::move(points), std::move(weights));
  } catch (const InvalidArgument& e) {
    throw ParseError(source, lineno, e.what());
  }
  return ds;
}

DatasetFile read_dataset(const std::string& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_dataset(in, path, opts);
}

DatasetFile load_dataset(const std::string& path, const Generator& g, bool need_interior, const CsvOptions& opts) {
  DatasetFile ds = read_dataset(path, opts);
  if (ds.dimension != g.dim())
    throw DomainError(path + ": data dimension " + std::to_string(ds.dimension) + " does not match generator dimension " +
                      std::to_string(g.dim()));
  for (size_t i = 0; i < ds.data.size(); ++i) {
    try {
      g.check_domain(ds.data.points[i], need_interior);
    } catch (const DomainError& e) {
      throw DomainError(path + ":" + std::to_string(ds.line_numbers[i]) + ": row " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return ds;
}

Matrix read_matrix(const std::string& path) {
  DatasetFile ds = read_dataset(path);
  if (!ds.header.empty()) throw ParseError(path, 1, "matrix files take no header");
  Matrix m(static_cast<Eigen::Index>(ds.data.size()), ds.dimension);
  for (size_t i = 0; i < ds.data.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = ds.data.points[i].transpose();
  return m;
}

}  // namespace tjd
