#pragma once

#include <istream>
#include <string>
#include <vector>

#include "tjd/centroids.hpp"
#include "tjd/generators.hpp"

namespace tjd {

/// Row/line-aware failure while reading an input file.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, size_t line, const std::string& msg)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + msg), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

struct DatasetFile {
  std::string path;
  int dimension = 0;
  bool has_weights = false;
  std::vector<std::string> header;  // empty when the file has none
  WeightedPointSet data;
  std::vector<size_t> line_numbers;  // source line of every row
};

struct CsvOptions {
  /// Treat the trailing column as weights even without a `weight` header.
  bool trailing_weights = false;
};

/// Comma-separated values, '.' decimal point, optional single header row.
/// A header whose last column is `weight` marks a weight column.
DatasetFile parse_dataset(std::istream& in, const std::string& source, const CsvOptions& opts = {});
DatasetFile read_dataset(const std::string& path, const CsvOptions& opts = {});

/// Loads a dataset and checks every row against the generator's domain
/// (interior when `need_interior`).
DatasetFile load_dataset(const std::string& path, const Generator& g, bool need_interior, const CsvOptions& opts = {});

/// Square or rectangular numeric matrix from CSV (no header).
Matrix read_matrix(const std::string& path);

/// "1.5,2" -> vector.
Vector parse_vector(const std::string& csv);

}  // namespace tjd
