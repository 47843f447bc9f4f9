#include "rslra/series_io.hpp"

#include "rslra/report.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace rslra;
using namespace rslra::io;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("rslra_io_test_" + std::to_string(++counter) + ".csv");
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("load_series_csv reads a bare single column") {
  TempFile f("1\n2\n3\n");
  const auto sf = load_series_csv(f.path.string());
  REQUIRE(sf.values.size() == 3);
  CHECK(sf.values(0) == 1);
  CHECK(sf.values(2) == 3);
  CHECK(sf.column_name.empty());
}

TEST_CASE("load_series_csv auto-detects a header row") {
  TempFile f("passengers\n112\n118\n");
  const auto sf = load_series_csv(f.path.string());
  REQUIRE(sf.values.size() == 2);
  CHECK(sf.values(0) == 112);
  CHECK(sf.values(1) == 118);
  CHECK(sf.column_name == "passengers");
}

TEST_CASE("load_series_csv selects a column by name") {
  TempFile f("month,passengers\n1949-01,112\n1949-02,118\n");
  const auto sf = load_series_csv(f.path.string(), "passengers");
  REQUIRE(sf.values.size() == 2);
  CHECK(sf.values(1) == 118);
  CHECK(sf.labels.size() == 2);
  CHECK(sf.labels[0] == "1949-01");
}

TEST_CASE("load_series_csv rejects non-finite cells with the row number") {
  TempFile f("1\nNaN\n3\n");
  try {
    load_series_csv(f.path.string());
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("load_series_csv rejects garbage cells with the row number") {
  TempFile f("x\n1\noops\n");
  try {
    load_series_csv(f.path.string());
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
}

TEST_CASE("load_series_csv error paths") {
  CHECK_THROWS_AS(load_series_csv("/nonexistent/file.csv"), DataError);
  TempFile empty("");
  CHECK_THROWS_AS(load_series_csv(empty.path.string()), DataError);
  TempFile header_only("values\n");
  CHECK_THROWS_AS(load_series_csv(header_only.path.string()), DataError);
  TempFile f("1,2\n3,4\n");
  CHECK_THROWS_AS(load_series_csv(f.path.string(), "5"), DataError);
  CHECK_THROWS_AS(load_series_csv(f.path.string(), "missing"), DataError);
}

TEST_CASE("matrix CSV round trip is bit exact") {
  const Matrix X = testing::random_matrix(5, 7, 99);
  const auto tmp = std::filesystem::temp_directory_path() / "rslra_matrix_roundtrip.csv";
  save_matrix_csv(tmp.string(), X);
  const Matrix back = load_matrix_csv(tmp.string());
  std::filesystem::remove(tmp);
  REQUIRE(back.rows() == X.rows());
  REQUIRE(back.cols() == X.cols());
  CHECK((back.array() == X.array()).all());

  TempFile ragged("1,2\n3\n");
  CHECK_THROWS_AS(load_matrix_csv(ragged.path.string()), DataError);
}

TEST_CASE("series CSV round trip is bit exact") {
  Vector d(6);
  d << 1.0 / 3.0, -2.5e-17, 42.0, 1e300, -0.0, 0.1234567890123456789;
  const auto tmp = std::filesystem::temp_directory_path() / "rslra_roundtrip.csv";
  save_series_csv(tmp.string(), d);
  const auto back = load_series_csv(tmp.string());
  std::filesystem::remove(tmp);
  REQUIRE(back.values.size() == d.size());
  for (Index i = 0; i < d.size(); ++i) CHECK(back.values(i) == d(i));
}

TEST_CASE("normalize_unit maps onto [0,1] and inverts") {
  Vector d(3);
  d << 0, 5, 10;
  const auto norm = normalize_unit(d);
  CHECK(norm.values(0) == 0.0);
  CHECK(norm.values(1) == 0.5);
  CHECK(norm.values(2) == 1.0);
  CHECK(norm.min == 0.0);
  CHECK(norm.max == 10.0);

  const Vector back = norm.denormalize(norm.values);
  CHECK((back - d).cwiseAbs().maxCoeff() <= 1e-12);

  Vector unit(3);
  unit << 0.0, 0.25, 1.0;
  const auto id = normalize_unit(unit);
  CHECK((id.values - unit).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(normalize_unit(Vector::Constant(4, 1.0)), DataError);
}

TEST_CASE("mean_abs_deviation basics and oracle") {
  Vector a(4), b(4);
  a << 1, 2, 3, 4;
  b = a;
  CHECK(mean_abs_deviation(a, b) == 0.0);
  CHECK(mean_abs_deviation((a.array() + 0.1).matrix(), b) == doctest::Approx(0.1).epsilon(1e-12));

  const Vector x = testing::random_vector(17, 3), y = testing::random_vector(17, 4);
  double acc = 0.0;
  for (Index i = 0; i < 17; ++i) acc += std::abs(x(i) - y(i));
  CHECK(mean_abs_deviation(x, y) == acc / 17.0);

  CHECK_THROWS_AS(mean_abs_deviation(Vector::Zero(2), Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("report JSON drops wall-clock fields when asked") {
  RunReport report;
  report.config = {{"k", 2}};
  forecast::ForecastRecord rec;
  rec.position = 12;
  rec.predictions = Vector::Zero(2);
  rec.elapsed_seconds = 0.5;
  report.result.records.push_back(rec);
  report.result.mad_per_horizon = {0.1, std::numeric_limits<double>::quiet_NaN()};
  report.result.total_seconds = 1.5;

  const auto timed = report_to_json(report, true);
  CHECK(timed["steps"][0].contains("elapsed_seconds"));
  CHECK(timed["summary"].contains("total_seconds"));

  const auto stable = report_to_json(report, false);
  CHECK_FALSE(stable["steps"][0].contains("elapsed_seconds"));
  CHECK_FALSE(stable["summary"].contains("total_seconds"));
  CHECK(stable["summary"]["mean_absolute_deviation_per_horizon"][1].is_null());
}

TEST_SUITE_END();
