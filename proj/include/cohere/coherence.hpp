#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cohere/matrix.hpp"

namespace cohere {

enum class StatKind { L_n, L_tilde, L_0, L_nm };

const char* stat_kind_name(StatKind kind);

// A coherence statistic with its achieving column pair (1-based, i < j).
// value is clamped to [0, 1] for the correlation-based kinds; L_0 is an
// unnormalized statistic and is reported as-is.
struct CoherenceResult {
  StatKind kind;
  double value;
  int i;
  int j;
  int mask_gap;  // m for L_nm, 1 otherwise
};

struct KernelOptions {
  int tile = 256;  // column tile width for the Gram sweep
  int workers = 1;
};

// Thrown when a column has zero sample variance (or equals the supplied mean
// everywhere): the correlation is undefined there.
class DegenerateColumnError : public std::runtime_error {
 public:
  DegenerateColumnError(int column, const std::string& what)
      : std::runtime_error(what), column_(column) {}
  int column() const { return column_; }  // 1-based

 private:
  int column_;
};

// Pearson correlation between columns i and j (1-based). rho_ii == 1.
double pearson_corr(const DataMatrix& X, int i, int j);

// L_n: max |rho_ij| over 1 <= i < j <= p. Ties broken toward the
// lexicographically smallest pair, independent of tiling and worker count.
CoherenceResult coherence(const DataMatrix& X, const KernelOptions& opts = {});

// L_{n,m}: the same maximum restricted to pairs with j - i >= m.
// m_coherence(X, 1) reproduces coherence(X) exactly.
CoherenceResult m_coherence(const DataMatrix& X, int m, const KernelOptions& opts = {});

// Known-moment variants: L_tilde centers at mu and normalizes by the
// centered column norms; L_0 centers at mu and divides by n*sigma^2.
CoherenceResult coherence_known_moments(const DataMatrix& X, double mu, double sigma,
                                        StatKind kind, const KernelOptions& opts = {});

// Full p x p sample correlation matrix, row-major, unit diagonal.
std::vector<double> correlation_matrix(const DataMatrix& X, const KernelOptions& opts = {});

}  // namespace cohere
