#pragma once

#include <cstdint>

#include "cohere/distribution.hpp"
#include "cohere/matrix.hpp"

namespace cohere {

// n x p matrix of i.i.d. draws from spec. Bitwise deterministic in
// (spec, n, p, seed) and independent of the worker count: every entry owns a
// counter-based stream keyed by its index.
DataMatrix sample_matrix(const DistributionSpec& spec, int n, int p, std::uint64_t seed,
                         int workers = 1);

// Rows are i.i.d.; within a row, column j is the moving average
// (1/sqrt(m)) * sum_{l=0}^{m-1} e_{j+l} over standardized i.i.d. innovations
// from spec, then shifted/scaled by (location, scale). Columns at index
// distance >= m are independent; the population correlation at lag d < m is
// (m - d)/m.
DataMatrix sample_m_dependent(const DistributionSpec& spec, int n, int p, int m,
                              std::uint64_t seed, int workers = 1);

}  // namespace cohere
