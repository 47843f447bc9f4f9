#pragma once

#include "rslra/types.hpp"

#include <string>
#include <vector>

namespace rslra::io {

/// A scalar series loaded from CSV, plus whatever labeling the file carried.
struct SeriesFile {
  Vector values;
  std::string column_name;         // header of the selected column, if any
  std::vector<std::string> labels; // first column as text when another column is selected
};

/// Loads one column of a CSV file (UTF-8, LF or CRLF, '.' decimal separator,
/// one record per line). `column` is either a 0-based index or a header
/// name. A header row is auto-detected: the first row is skipped iff the
/// selected cell does not parse as a number. Non-finite cells are rejected
/// with the offending row number.
SeriesFile load_series_csv(const std::string& path, const std::string& column = "0");

/// One value per row at 17 significant digits, optional header line.
void save_series_csv(const std::string& path, const Vector& d,
                     const std::string& header = "");

/// Comma-separated rows at 17 significant digits.
void save_matrix_csv(const std::string& path, const Matrix& X);

/// Numeric matrix from comma-separated rows (no header). All rows must have
/// the same width and every cell must be a finite number.
Matrix load_matrix_csv(const std::string& path);

struct Normalization {
  Vector values;
  double min = 0.0;
  double max = 1.0;

  double denormalize(double v) const { return v * (max - min) + min; }
  Vector denormalize(const Vector& v) const;
};

/// Affine map of d onto [0, 1]; throws DataError for constant series.
Normalization normalize_unit(const Vector& d);

/// Mean of |pred - truth|; lengths must match and be positive.
double mean_abs_deviation(const Vector& pred, const Vector& truth);

} // namespace rslra::io
