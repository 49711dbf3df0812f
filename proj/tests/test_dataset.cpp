#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "core/dataset.hpp"
#include "core/errors.hpp"

#include "testutil.hpp"

using optiboost::Dataset;
using optiboost::Error;
using optiboost::ErrorCode;
using testutil::TempDir;
using testutil::write_file;

namespace {

ErrorCode code_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

}  // namespace

TEST_CASE("headerless csv loads with the last column as label") {
  TempDir dir;
  write_file(dir.file("d.csv"), "0.5,2,1\n1.5,3,-1\n2.5,4,+1\n");
  Dataset data = optiboost::load_dataset(dir.file("d.csv"));
  CHECK(data.n == 3);
  CHECK(data.d == 2);
  CHECK(data.features[0] == std::vector<double>{0.5, 2.0});
  CHECK(data.features[2] == std::vector<double>{2.5, 4.0});
  CHECK(data.labels == std::vector<int>{1, -1, 1});
}

TEST_CASE("header row is detected by a non-numeric cell and skipped") {
  TempDir dir;
  write_file(dir.file("d.csv"), "x1,x2,y\n0.5,2,1\n1.5,3,-1\n");
  Dataset data = optiboost::load_dataset(dir.file("d.csv"));
  CHECK(data.n == 2);
  CHECK(data.d == 2);
  CHECK(data.labels == std::vector<int>{1, -1});
}

TEST_CASE("label column can be selected by header name") {
  TempDir dir;
  write_file(dir.file("d.csv"), "y,x1\n1,0.5\n-1,1.5\n");
  Dataset data = optiboost::load_dataset(dir.file("d.csv"), "y");
  CHECK(data.d == 1);
  CHECK(data.features[0] == std::vector<double>{0.5});
  CHECK(data.labels == std::vector<int>{1, -1});
}

TEST_CASE("naming a label column without a header is a parse error") {
  TempDir dir;
  write_file(dir.file("d.csv"), "1,1\n2,-1\n");
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("d.csv"), "y"); }) ==
        ErrorCode::parse);
}

TEST_CASE("label column name absent from the header is a parse error") {
  TempDir dir;
  write_file(dir.file("d.csv"), "x,y\n1,1\n2,-1\n");
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("d.csv"), "label"); }) ==
        ErrorCode::parse);
}

TEST_CASE("blank lines and crlf endings are tolerated") {
  TempDir dir;
  write_file(dir.file("d.csv"), "0.5,1\r\n\r\n1.5,-1\r\n\n");
  Dataset data = optiboost::load_dataset(dir.file("d.csv"));
  CHECK(data.n == 2);
  CHECK(data.labels == std::vector<int>{1, -1});
}

TEST_CASE("malformed inputs map to the documented error codes") {
  TempDir dir;
  write_file(dir.file("empty.csv"), "");
  write_file(dir.file("one_row.csv"), "0.5,1\n");
  write_file(dir.file("bad_cell.csv"), "0.5,1\nfoo,-1\n");
  write_file(dir.file("empty_cell.csv"), "0.5,1\n,-1\n");
  write_file(dir.file("ragged.csv"), "0.5,1\n1.5,2,-1\n");
  write_file(dir.file("zero_label.csv"), "0.5,1\n1.5,0\n");
  write_file(dir.file("two_label.csv"), "0.5,1\n1.5,2\n");
  write_file(dir.file("inf.csv"), "0.5,1\ninf,-1\n");

  CHECK(code_of([&] { optiboost::load_dataset(dir.file("missing.csv")); }) ==
        ErrorCode::io);
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("empty.csv")); }) ==
        ErrorCode::empty_dataset);
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("one_row.csv")); }) ==
        ErrorCode::empty_dataset);
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("bad_cell.csv")); }) ==
        ErrorCode::parse);
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("empty_cell.csv")); }) ==
        ErrorCode::parse);
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("ragged.csv")); }) ==
        ErrorCode::parse);
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("zero_label.csv")); }) ==
        ErrorCode::label);
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("two_label.csv")); }) ==
        ErrorCode::label);
  CHECK(code_of([&] { optiboost::load_dataset(dir.file("inf.csv")); }) ==
        ErrorCode::parse);
}

TEST_CASE("make_dataset validates shape, labels and finiteness") {
  CHECK(code_of([] { optiboost::make_dataset({{1.0}}, {1, -1}); }) ==
        ErrorCode::shape);
  CHECK(code_of([] { optiboost::make_dataset({{1.0}}, {1}); }) ==
        ErrorCode::empty_dataset);
  CHECK(code_of([] { optiboost::make_dataset({{1.0}, {2.0}}, {1, 2}); }) ==
        ErrorCode::label);
  CHECK(code_of([] {
          optiboost::make_dataset({{1.0}, {std::nan("")}}, {1, -1});
        }) == ErrorCode::parse);
}

TEST_CASE("write then load reproduces the dataset exactly") {
  TempDir dir;
  Dataset data = optiboost::make_dataset(
      {{0.1, 1.0 / 3.0}, {-2.5e-17, 7.25}, {1e300, -0.0}}, {1, -1, 1});
  optiboost::write_dataset_csv(data, dir.file("round.csv"));
  Dataset back = optiboost::load_dataset(dir.file("round.csv"));
  CHECK(optiboost::datasets_equal(data, back));
}
