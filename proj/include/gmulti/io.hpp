#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gmulti/distance.hpp"
#include "gmulti/errors.hpp"
#include "gmulti/matrix.hpp"

namespace gmulti {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

inline std::string trim_ws(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline bool parse_double(const std::string& cell, double& out) {
  const std::string t = trim_ws(cell);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

// Splits CSV text into trimmed cells; blank lines are skipped. No quoting —
// the accepted format is plain numeric CSV.
inline std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_ws(line).empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

// Parses rows of numbers with a consistent column count. An optional single
// header row (any non-numeric cell) is skipped.
inline std::vector<std::vector<double>> numeric_rows(const std::string& path) {
  const auto rows = csv_rows(read_file(path));
  if (rows.empty()) throw InvalidData(path + ": empty input");
  std::vector<std::vector<double>> out;
  std::size_t expected_cols = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<double> vals(rows[r].size());
    bool numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      if (!parse_double(rows[r][c], vals[c])) {
        numeric = false;
        bad_col = c;
        break;
      }
    if (!numeric) {
      if (r == 0) continue;  // header row
      throw InvalidData(path + ": non-numeric cell at row " + std::to_string(r + 1) +
                        ", column " + std::to_string(bad_col + 1));
    }
    if (out.empty())
      expected_cols = vals.size();
    else if (vals.size() != expected_cols)
      throw InvalidData(path + ": row " + std::to_string(r + 1) + " has " +
                        std::to_string(vals.size()) + " columns, expected " +
                        std::to_string(expected_cols));
    for (std::size_t c = 0; c < vals.size(); ++c)
      if (!std::isfinite(vals[c]))
        throw InvalidData(path + ": non-finite value at row " + std::to_string(r + 1) +
                          ", column " + std::to_string(c + 1));
    out.push_back(std::move(vals));
  }
  if (out.empty()) throw InvalidData(path + ": no data rows");
  return out;
}

}  // namespace detail

// n x d observation matrix from CSV (optional header row).
inline DataMatrix read_csv_matrix(const std::string& path) {
  const auto rows = detail::numeric_rows(path);
  DataMatrix data(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) data(r, c) = rows[r][c];
  return data;
}

// Precomputed n x n distance matrix from CSV: square, symmetric within 1e-9,
// zero diagonal. Cell indices in error messages are 0-based matrix positions.
inline DistanceMatrix read_csv_distance(const std::string& path) {
  const auto rows = detail::numeric_rows(path);
  const std::size_t n = rows.size();
  if (rows[0].size() != n)
    throw InvalidData(path + ": distance matrix must be square, got " +
                      std::to_string(n) + "x" + std::to_string(rows[0].size()));
  if (n < 2) throw InvalidData(path + ": need at least 2 observations");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(rows[i][i]) > 1e-9)
      throw InvalidData(path + ": nonzero diagonal at cell (" + std::to_string(i) +
                        "," + std::to_string(i) + ")");
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(rows[i][j] - rows[j][i]) > 1e-9)
        throw InvalidData(path + ": asymmetric distance at cell (" + std::to_string(i) +
                          "," + std::to_string(j) + ")");
  }
  DistanceMatrix dist(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist.set(i, j, 0.5 * (rows[i][j] + rows[j][i]));
  return dist;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace gmulti
