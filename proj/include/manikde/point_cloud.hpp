#pragma once

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace manikde {

// CSV parse failure carrying the 1-based line number of the offending row.
class CsvError : public std::invalid_argument {
 public:
  CsvError(std::size_t line, const std::string& what)
      : std::invalid_argument("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// n points in R^dim, row-major flat storage, plus the query point x the
// cloud was sampled around.
struct PointCloud {
  int dim = 0;
  std::vector<double> x;       // query point, size dim
  std::vector<double> coords;  // n * dim values

  std::size_t size() const {
    return dim == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim);
  }
  const double* point(std::size_t i) const {
    return coords.data() + i * static_cast<std::size_t>(dim);
  }
  void add(const double* p) { coords.insert(coords.end(), p, p + dim); }
};

namespace detail {

inline void split_csv_row(const std::string& row, std::vector<std::string>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = row.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(row.substr(start));
      return;
    }
    out.push_back(row.substr(start, comma - start));
    start = comma + 1;
  }
}

inline double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw CsvError(line, "expected a number, got '" + s + "'");
  }
  return v;
}

}  // namespace detail

// Format: header "dim=D,n=N", then the query point as "x,<D values>",
// then N rows of D values. Floats carry 17 significant digits so a
// write/read round trip is lossless.
inline void write_csv(const PointCloud& cloud, std::ostream& os) {
  os << "dim=" << cloud.dim << ",n=" << cloud.size() << "\n";
  char buf[64];
  os << "x";
  for (int k = 0; k < cloud.dim; ++k) {
    os << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", cloud.x[k]);
    os << buf;
  }
  os << "\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double* p = cloud.point(i);
    for (int k = 0; k < cloud.dim; ++k) {
      if (k > 0) os << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", p[k]);
      os << buf;
    }
    os << "\n";
  }
}

inline PointCloud read_csv(std::istream& is) {
  std::string row;
  std::vector<std::string> fields;
  std::size_t line = 0;

  if (!std::getline(is, row)) throw CsvError(1, "empty input, expected header");
  ++line;
  detail::split_csv_row(row, fields);
  if (fields.size() != 2 || fields[0].rfind("dim=", 0) != 0 ||
      fields[1].rfind("n=", 0) != 0) {
    throw CsvError(line, "expected header 'dim=D,n=N'");
  }
  PointCloud cloud;
  cloud.dim = static_cast<int>(detail::parse_double(fields[0].substr(4), line));
  const std::size_t n =
      static_cast<std::size_t>(detail::parse_double(fields[1].substr(2), line));
  if (cloud.dim < 1) throw CsvError(line, "dim must be >= 1");

  if (!std::getline(is, row)) throw CsvError(line + 1, "missing query-point row");
  ++line;
  detail::split_csv_row(row, fields);
  if (fields.empty() || fields[0] != "x") {
    throw CsvError(line, "expected query-point row flagged 'x'");
  }
  if (fields.size() != static_cast<std::size_t>(cloud.dim) + 1) {
    throw CsvError(line, "query-point row has wrong column count");
  }
  for (int k = 0; k < cloud.dim; ++k) {
    cloud.x.push_back(detail::parse_double(fields[k + 1], line));
  }

  cloud.coords.reserve(n * static_cast<std::size_t>(cloud.dim));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(is, row)) {
      throw CsvError(line + 1, "expected " + std::to_string(n) +
                                  " point rows, found " + std::to_string(i));
    }
    ++line;
    detail::split_csv_row(row, fields);
    if (fields.size() != static_cast<std::size_t>(cloud.dim)) {
      throw CsvError(line, "point row has wrong column count");
    }
    for (int k = 0; k < cloud.dim; ++k) {
      cloud.coords.push_back(detail::parse_double(fields[k], line));
    }
  }
  return cloud;
}

}  // namespace manikde
