#include "cohere/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cohere/parallel.hpp"

namespace cohere {

namespace {

// Dot product with four independent accumulators and a fixed combine order.
// The summation order depends only on len, never on tiling or threading, so
// every (i, j) pair yields bitwise-identical values under any schedule.
double dot_det(const double* a, const double* b, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  double tail = 0.0;
  for (; k < len; ++k) tail += a[k] * b[k];
  return ((s0 + s1) + (s2 + s3)) + tail;
}

double sum_det(const double* a, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    s0 += a[k];
    s1 += a[k + 1];
    s2 += a[k + 2];
    s3 += a[k + 3];
  }
  double tail = 0.0;
  for (; k < len; ++k) tail += a[k];
  return ((s0 + s1) + (s2 + s3)) + tail;
}

enum class Transform { sample, known_mean, known_mean_var };

// Scale-aware zero-variance detection: a bitwise-constant column leaves
// residuals of at most a few ulps per entry after centering.
bool is_degenerate(double ss, double amax, std::size_t n) {
  if (ss <= 0.0) return true;
  const double thresh = 32.0 * std::numeric_limits<double>::epsilon() * amax;
  return ss <= static_cast<double>(n) * thresh * thresh;
}

// Column-major transformed copy of X. After the transform, rho for the
// requested statistic is a plain dot product of transformed columns.
std::vector<double> transform_columns(const DataMatrix& X, Transform t, double mu, double sigma) {
  const int n = X.n();
  const int p = X.p();
  std::vector<double> Z(static_cast<std::size_t>(n) * p);
  std::vector<double> col(n);
  for (int j = 0; j < p; ++j) {
    for (int r = 0; r < n; ++r) col[r] = X(r, j);
    double* out = Z.data() + static_cast<std::size_t>(j) * n;
    switch (t) {
      case Transform::sample: {
        const double mean = sum_det(col.data(), n) / n;
        double amax = 0.0;
        for (int r = 0; r < n; ++r) {
          out[r] = col[r] - mean;
          amax = std::max(amax, std::abs(col[r]));
        }
        const double ss = dot_det(out, out, n);
        if (is_degenerate(ss, amax, n)) {
          throw DegenerateColumnError(j + 1, "column " + std::to_string(j + 1) +
                                                 " has zero sample variance");
        }
        const double inv = 1.0 / std::sqrt(ss);
        for (int r = 0; r < n; ++r) out[r] *= inv;
        break;
      }
      case Transform::known_mean: {
        for (int r = 0; r < n; ++r) out[r] = col[r] - mu;
        const double ss = dot_det(out, out, n);
        if (ss <= 0.0) {
          throw DegenerateColumnError(j + 1, "column " + std::to_string(j + 1) +
                                                 " is identically equal to mu");
        }
        const double inv = 1.0 / std::sqrt(ss);
        for (int r = 0; r < n; ++r) out[r] *= inv;
        break;
      }
      case Transform::known_mean_var: {
        const double inv = 1.0 / (sigma * std::sqrt(static_cast<double>(n)));
        for (int r = 0; r < n; ++r) out[r] = (col[r] - mu) * inv;
        break;
      }
    }
  }
  return Z;
}

struct Best {
  double value = -1.0;
  int i = 0;  // 0-based during the sweep
  int j = 0;
};

// strictly better: larger value, ties toward the lexicographically smallest pair
bool better(const Best& a, const Best& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

// Masked max |Z_i . Z_j| over pairs with j - i >= gap, swept in column tiles.
Best masked_max_gram(const std::vector<double>& Z, int n, int p, int gap, bool clamp,
                     const KernelOptions& opts) {
  const int tile = std::max(1, opts.tile);
  const int ntiles = (p + tile - 1) / tile;

  struct Task {
    int ti, tj;
  };
  std::vector<Task> tasks;
  for (int ti = 0; ti < ntiles; ++ti) {
    for (int tj = ti; tj < ntiles; ++tj) {
      // largest j - i inside the block pair
      const int max_gap = std::min(p, (tj + 1) * tile) - 1 - ti * tile;
      if (max_gap >= gap) tasks.push_back({ti, tj});
    }
  }

  std::vector<Best> partial(tasks.size());
  parallel_for_index(tasks.size(), opts.workers, [&](std::size_t t) {
    const auto [ti, tj] = tasks[t];
    const int i0 = ti * tile, i1 = std::min(p, i0 + tile);
    const int j1 = std::min(p, (tj * tile) + tile);
    Best local;
    for (int i = i0; i < i1; ++i) {
      const double* zi = Z.data() + static_cast<std::size_t>(i) * n;
      const int jstart = std::max(tj * tile, i + gap);
      for (int j = jstart; j < j1; ++j) {
        const double* zj = Z.data() + static_cast<std::size_t>(j) * n;
        double v = std::abs(dot_det(zi, zj, n));
        if (clamp && v > 1.0) v = 1.0;
        const Best cand{v, i, j};
        if (better(cand, local)) local = cand;
      }
    }
    partial[t] = local;
  });

  Best best;
  for (const auto& b : partial) {
    if (b.value >= 0.0 && better(b, best)) best = b;
  }
  return best;
}

CoherenceResult run_kernel(const DataMatrix& X, StatKind kind, int gap, Transform t, double mu,
                           double sigma, const KernelOptions& opts) {
  const auto Z = transform_columns(X, t, mu, sigma);
  const bool clamp = kind != StatKind::L_0;
  const Best best = masked_max_gram(Z, X.n(), X.p(), gap, clamp, opts);
  return CoherenceResult{kind, best.value, best.i + 1, best.j + 1, gap};
}

}  // namespace

const char* stat_kind_name(StatKind kind) {
  switch (kind) {
    case StatKind::L_n: return "L_n";
    case StatKind::L_tilde: return "L_tilde";
    case StatKind::L_0: return "L_0";
    case StatKind::L_nm: return "L_nm";
  }
  return "?";
}

double pearson_corr(const DataMatrix& X, int i, int j) {
  const int p = X.p();
  if (i < 1 || i > p || j < 1 || j > p) throw std::invalid_argument("column index out of range");
  if (i == j) return 1.0;
  const int n = X.n();
  std::vector<double> a(n), b(n);
  for (int r = 0; r < n; ++r) {
    a[r] = X(r, i - 1);
    b[r] = X(r, j - 1);
  }
  for (auto [col, idx] : {std::pair{&a, i}, std::pair{&b, j}}) {
    const double mean = sum_det(col->data(), n) / n;
    double amax = 0.0;
    for (double& v : *col) {
      amax = std::max(amax, std::abs(v));
      v -= mean;
    }
    const double ss = dot_det(col->data(), col->data(), n);
    if (is_degenerate(ss, amax, static_cast<std::size_t>(n))) {
      throw DegenerateColumnError(idx, "column " + std::to_string(idx) +
                                           " has zero sample variance");
    }
    const double inv = 1.0 / std::sqrt(ss);
    for (double& v : *col) v *= inv;
  }
  const double r = dot_det(a.data(), b.data(), n);
  return std::clamp(r, -1.0, 1.0);
}

CoherenceResult coherence(const DataMatrix& X, const KernelOptions& opts) {
  return run_kernel(X, StatKind::L_n, 1, Transform::sample, 0.0, 0.0, opts);
}

CoherenceResult m_coherence(const DataMatrix& X, int m, const KernelOptions& opts) {
  if (m < 1 || m > X.p() - 1) {
    throw std::invalid_argument("mask gap m must satisfy 1 <= m <= p - 1");
  }
  return run_kernel(X, StatKind::L_nm, m, Transform::sample, 0.0, 0.0, opts);
}

CoherenceResult coherence_known_moments(const DataMatrix& X, double mu, double sigma,
                                        StatKind kind, const KernelOptions& opts) {
  if (kind != StatKind::L_tilde && kind != StatKind::L_0) {
    throw std::invalid_argument("known-moment coherence is defined for L_tilde and L_0");
  }
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const Transform t = kind == StatKind::L_tilde ? Transform::known_mean : Transform::known_mean_var;
  return run_kernel(X, kind, 1, t, mu, sigma, opts);
}

std::vector<double> correlation_matrix(const DataMatrix& X, const KernelOptions& opts) {
  const int n = X.n();
  const int p = X.p();
  const auto Z = transform_columns(X, Transform::sample, 0.0, 0.0);
  std::vector<double> R(static_cast<std::size_t>(p) * p);
  parallel_for_index(static_cast<std::size_t>(p), opts.workers, [&](std::size_t i) {
    const double* zi = Z.data() + i * n;
    R[i * p + i] = 1.0;
    for (std::size_t j = i + 1; j < static_cast<std::size_t>(p); ++j) {
      const double r = std::clamp(dot_det(zi, Z.data() + j * n, n), -1.0, 1.0);
      R[i * p + j] = r;
      R[j * p + i] = r;
    }
  });
  return R;
}

}  // namespace cohere
