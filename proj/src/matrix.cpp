#include "cohere/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace cohere {

DataMatrix::DataMatrix(int n, int p, std::vector<double> entries)
    : n_(n), p_(p), entries_(std::move(entries)) {
  if (n < 2 || p < 2) {
    throw std::invalid_argument("DataMatrix needs n >= 2 rows and p >= 2 columns");
  }
  if (entries_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(p)) {
    throw std::invalid_argument("DataMatrix entry count does not match n * p");
  }
  for (const double v : entries_) {
    if (!std::isfinite(v)) throw std::invalid_argument("DataMatrix entries must be finite");
  }
}

}  // namespace cohere
