#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

#include "doctest.h"
#include "gmulti/io.hpp"

using namespace gmulti;

namespace {

// Writes content to a scratch file and removes it when the guard dies.
struct TmpFile {
  std::string path;
  TmpFile(const char* name, const std::string& content) {
    path = (std::filesystem::temp_directory_path() /
            (std::string("gmulti_test_") + name))
               .string();
    write_text_file(path, content);
  }
  ~TmpFile() { std::remove(path.c_str()); }
};

std::string what_contains(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("matrix csv parses rows and columns") {
  TmpFile f("m1.csv", "0,0\n1,0\n0,1\n");
  const DataMatrix m = read_csv_matrix(f.path);
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 2);
  CHECK(m(1, 0) == 1.0);
  CHECK(m(2, 1) == 1.0);
  CHECK(m(0, 0) == 0.0);
}

TEST_CASE("header rows are skipped automatically") {
  TmpFile f("m2.csv", "x,y\n1,2\n3,4\n");
  const DataMatrix m = read_csv_matrix(f.path);
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 1) == 4.0);
}

TEST_CASE("whitespace, CRLF, and scientific notation are tolerated") {
  TmpFile f("m3.csv", " 1e2 , -3.5\r\n2, 4.25e-1\r\n\n");
  const DataMatrix m = read_csv_matrix(f.path);
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == 100.0);
  CHECK(m(0, 1) == -3.5);
  CHECK(m(1, 1) == 0.425);
}

TEST_CASE("malformed matrices name the offending cell") {
  SUBCASE("ragged") {
    TmpFile f("m4.csv", "1,2\n3\n");
    CHECK_THROWS_AS(read_csv_matrix(f.path), InvalidData);
    const std::string msg =
        what_contains([&] { read_csv_matrix(f.path); });
    CHECK(msg.find("row 2") != std::string::npos);
  }
  SUBCASE("non-numeric body cell") {
    TmpFile f("m5.csv", "1,2\n3,4\nfoo,6\n");
    const std::string msg =
        what_contains([&] { read_csv_matrix(f.path); });
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("column 1") != std::string::npos);
  }
  SUBCASE("non-finite value") {
    TmpFile f("m6.csv", "1,2\n3,inf\n");
    const std::string msg =
        what_contains([&] { read_csv_matrix(f.path); });
    CHECK(msg.find("non-finite") != std::string::npos);
  }
  SUBCASE("empty file") {
    TmpFile f("m7.csv", "");
    CHECK_THROWS_AS(read_csv_matrix(f.path), InvalidData);
  }
  SUBCASE("only a header") {
    TmpFile f("m8.csv", "a,b\n");
    CHECK_THROWS_AS(read_csv_matrix(f.path), InvalidData);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_csv_matrix("/nonexistent/gmulti.csv"), IoError);
  }
}

TEST_CASE("distance csv accepts symmetric matrices") {
  TmpFile f("d1.csv", "0,1,2\n1,0,1.5\n2,1.5,0\n");
  const DistanceMatrix d = read_csv_distance(f.path);
  REQUIRE(d.size() == 3);
  CHECK(d(0, 1) == 1.0);
  CHECK(d(0, 2) == 2.0);
  CHECK(d(1, 2) == 1.5);
  CHECK(d(2, 1) == 1.5);
}

TEST_CASE("distance csv rejections carry cell coordinates") {
  SUBCASE("asymmetric") {
    TmpFile f("d2.csv", "0,1,2\n1.5,0,1\n2,1,0\n");
    const std::string msg =
        what_contains([&] { read_csv_distance(f.path); });
    CHECK(msg.find("asymmetric") != std::string::npos);
    CHECK(msg.find("(0,1)") != std::string::npos);
  }
  SUBCASE("nonzero diagonal") {
    TmpFile f("d3.csv", "0,1\n1,0.5\n");
    const std::string msg =
        what_contains([&] { read_csv_distance(f.path); });
    CHECK(msg.find("(1,1)") != std::string::npos);
  }
  SUBCASE("not square") {
    TmpFile f("d4.csv", "0,1\n1,0\n2,3\n");
    CHECK_THROWS_AS(read_csv_distance(f.path), InvalidData);
  }
  SUBCASE("too small") {
    TmpFile f("d5.csv", "0\n");
    CHECK_THROWS_AS(read_csv_distance(f.path), InvalidData);
  }
}

TEST_CASE("tiny asymmetry within tolerance is averaged away") {
  TmpFile f("d6.csv", "0,1.0000000000001\n1,0\n");
  const DistanceMatrix d = read_csv_distance(f.path);
  CHECK(d(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(d(0, 1) == d(1, 0));
}

TEST_CASE("text files round-trip") {
  const std::string body = "line one\nline two\n";
  TmpFile f("t1.txt", body);
  CHECK(detail::read_file(f.path) == body);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/x.txt", body), IoError);
}

TEST_SUITE_END();
