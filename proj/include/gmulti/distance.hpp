#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gmulti/errors.hpp"
#include "gmulti/matrix.hpp"

namespace gmulti {

enum class Metric { euclidean, manhattan, hamming };

inline Metric metric_from_string(const std::string& name) {
  if (name == "euclidean") return Metric::euclidean;
  if (name == "manhattan") return Metric::manhattan;
  if (name == "hamming") return Metric::hamming;
  throw ConfigError("unknown metric: " + name);
}

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::manhattan: return "manhattan";
    case Metric::hamming: return "hamming";
  }
  return "?";
}

// Symmetric pairwise dissimilarities with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

  // Submatrix for the contiguous 0-based index range [lo, hi], both inclusive.
  DistanceMatrix slice(std::size_t lo, std::size_t hi) const {
    if (hi < lo || hi >= n_) throw InvalidWindow("distance slice out of range");
    DistanceMatrix out(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i)
      for (std::size_t j = i + 1; j <= hi; ++j) out.set(i - lo, j - lo, (*this)(i, j));
    return out;
  }

  // True when every off-diagonal entry is exactly equal: the matrix carries no
  // dissimilarity information and any spanning structure is pure tie-break.
  bool all_tied() const {
    if (n_ < 2) return true;
    const double v = (*this)(0, 1);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != v) return false;
    return true;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

// Pairwise distances between the rows of `data` under the chosen metric.
// Hamming counts coordinate mismatches (exact inequality).
inline DistanceMatrix pairwise_distances(const DataMatrix& data,
                                         Metric metric = Metric::euclidean) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (n < 2) throw InvalidData("need at least 2 observations");
  if (d < 1) throw InvalidData("need at least 1 coordinate");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (!std::isfinite(data(i, j)))
        throw InvalidData("non-finite value at observation " + std::to_string(i + 1) +
                          ", coordinate " + std::to_string(j + 1));
  DistanceMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = data.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto xj = data.row(j);
      double acc = 0.0;
      switch (metric) {
        case Metric::euclidean:
          for (std::size_t c = 0; c < d; ++c) {
            const double diff = xi[c] - xj[c];
            acc += diff * diff;
          }
          acc = std::sqrt(acc);
          break;
        case Metric::manhattan:
          for (std::size_t c = 0; c < d; ++c) acc += std::fabs(xi[c] - xj[c]);
          break;
        case Metric::hamming:
          for (std::size_t c = 0; c < d; ++c) acc += xi[c] != xj[c] ? 1.0 : 0.0;
          break;
      }
      out.set(i, j, acc);
    }
  }
  return out;
}

}  // namespace gmulti
