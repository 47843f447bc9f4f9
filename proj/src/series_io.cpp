#include "rslra/series_io.hpp"

#include <cctype>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rslra::io {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  if (cells.empty()) cells.emplace_back();
  return cells;
}

bool parse_number(const std::string& cell, double* out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) return false;
  *out = v;
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

SeriesFile load_series_csv(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw DataError("load_series_csv: cannot open '" + path + "'");

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw DataError("load_series_csv: '" + path + "' holds no data");

  // The selector is either a 0-based column index or a header name.
  long sel_index = -1;
  {
    char* end = nullptr;
    const long v = std::strtol(column.c_str(), &end, 10);
    if (!column.empty() && end == column.c_str() + column.size()) sel_index = v;
  }

  SeriesFile out;
  size_t first_data = 0;
  size_t col = 0;
  if (sel_index < 0) { // select by header name
    const auto& header = rows.front();
    bool found = false;
    for (size_t c = 0; c < header.size(); ++c)
      if (header[c] == column) {
        col = c;
        found = true;
        break;
      }
    if (!found)
      throw DataError("load_series_csv: no column named '" + column + "' in '" + path + "'");
    out.column_name = column;
    first_data = 1;
  } else {
    col = static_cast<size_t>(sel_index);
    if (col >= rows.front().size())
      throw DataError("load_series_csv: column index " + column + " out of range");
    double ignored;
    if (!parse_number(rows.front()[col], &ignored)) { // header row
      out.column_name = rows.front()[col];
      first_data = 1;
    }
  }

  std::vector<double> values;
  values.reserve(rows.size() - first_data);
  for (size_t r = first_data; r < rows.size(); ++r) {
    if (col >= rows[r].size())
      throw DataError("load_series_csv: row " + std::to_string(r + 1) + " has no column " +
                      std::to_string(col));
    double v;
    if (!parse_number(rows[r][col], &v))
      throw DataError("load_series_csv: row " + std::to_string(r + 1) + " cell '" + rows[r][col] +
                      "' is not a number");
    if (!std::isfinite(v))
      throw DataError("load_series_csv: row " + std::to_string(r + 1) +
                      " holds a non-finite value");
    values.push_back(v);
    if (col != 0 && rows[r].size() > 1) out.labels.push_back(rows[r][0]);
  }
  if (values.empty()) throw DataError("load_series_csv: selected column of '" + path + "' is empty");

  out.values = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  return out;
}

void save_series_csv(const std::string& path, const Vector& d, const std::string& header) {
  std::ofstream outf(path);
  if (!outf) throw DataError("save_series_csv: cannot write '" + path + "'");
  if (!header.empty()) outf << header << "\n";
  for (Index i = 0; i < d.size(); ++i) outf << format_double(d(i)) << "\n";
}

void save_matrix_csv(const std::string& path, const Matrix& X) {
  std::ofstream outf(path);
  if (!outf) throw DataError("save_matrix_csv: cannot write '" + path + "'");
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < X.cols(); ++j) {
      if (j) outf << ",";
      outf << format_double(X(i, j));
    }
    outf << "\n";
  }
}

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_matrix_csv: cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split_csv_line(line)) {
      double v;
      if (!parse_number(cell, &v) || !std::isfinite(v))
        throw DataError("load_matrix_csv: row " + std::to_string(lineno) + " cell '" + cell +
                        "' is not a finite number");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError("load_matrix_csv: row " + std::to_string(lineno) + " has " +
                      std::to_string(row.size()) + " cells, expected " +
                      std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("load_matrix_csv: '" + path + "' holds no data");
  Matrix X(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < X.rows(); ++i)
    for (Index j = 0; j < X.cols(); ++j) X(i, j) = rows[i][j];
  return X;
}

Vector Normalization::denormalize(const Vector& v) const {
  return (v.array() * (max - min) + min).matrix();
}

Normalization normalize_unit(const Vector& d) {
  if (d.size() < 1) throw DataError("normalize_unit: empty series");
  const double lo = d.minCoeff(), hi = d.maxCoeff();
  if (!(hi > lo)) throw DataError("normalize_unit: constant series cannot be normalized");
  Normalization out;
  out.min = lo;
  out.max = hi;
  out.values = ((d.array() - lo) / (hi - lo)).matrix();
  return out;
}

double mean_abs_deviation(const Vector& pred, const Vector& truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("mean_abs_deviation: length mismatch");
  if (pred.size() < 1) throw std::invalid_argument("mean_abs_deviation: empty input");
  return (pred - truth).cwiseAbs().mean();
}

} // namespace rslra::io
