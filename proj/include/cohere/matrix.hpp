#pragma once

#include <cstddef>
#include <vector>

namespace cohere {

// An n x p data matrix: n observations (rows), p variables (columns).
// Entries are stored row-major and must be finite.
class DataMatrix {
 public:
  DataMatrix(int n, int p, std::vector<double> entries);

  int n() const { return n_; }
  int p() const { return p_; }

  double operator()(int row, int col) const { return entries_[static_cast<std::size_t>(row) * p_ + col]; }
  const double* row(int r) const { return entries_.data() + static_cast<std::size_t>(r) * p_; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  int n_;
  int p_;
  std::vector<double> entries_;
};

}  // namespace cohere
