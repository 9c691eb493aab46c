#include "cohere/matgen.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cohere/parallel.hpp"
#include "cohere/rng.hpp"

namespace cohere {

namespace {

using rng::EntryStream;

constexpr std::uint32_t kTagIid = 0x1D1Du;
constexpr std::uint32_t kTagInnovation = 0x1A7Au;

// Marsaglia-Tsang for shape >= 1; shape < 1 boosted via G_k = G_{k+1} U^{1/k}.
double sample_gamma(double shape, EntryStream& s) {
  double boost = 1.0;
  if (shape < 1.0) {
    boost = std::pow(s.next_uniform_pos(), 1.0 / shape);
    shape += 1.0;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    const double x = s.next_normal();
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = s.next_uniform_pos();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v;
  }
}

// sd of the density proportional to exp(-|x|^a): Gamma(3/a)/Gamma(1/a) is
// the variance of the unscaled variable.
double weibull_sym_sd(double a) {
  return std::exp(0.5 * (std::lgamma(3.0 / a) - std::lgamma(1.0 / a)));
}

// One draw from the standardized (mean 0, variance 1) family.
double sample_standardized(const DistributionSpec& spec, EntryStream& s) {
  switch (spec.family) {
    case DistFamily::gaussian:
      return s.next_normal();
    case DistFamily::centered_exponential:
      return -std::log(s.next_uniform_pos()) - 1.0;
    case DistFamily::symmetric_weibull: {
      const double a = spec.param;
      const double sign = s.next_uniform() < 0.5 ? -1.0 : 1.0;
      const double g = sample_gamma(1.0 / a, s);
      return sign * std::pow(g, 1.0 / a) / weibull_sym_sd(a);
    }
    case DistFamily::two_point_skewed: {
      const double q = spec.param;
      const double b = s.next_uniform() < q ? 1.0 : 0.0;
      return (b - q) / std::sqrt(q * (1.0 - q));
    }
    case DistFamily::student_t: {
      const double nu = spec.param;
      const double z = s.next_normal();
      const double v = 2.0 * sample_gamma(0.5 * nu, s);  // chi-square_nu
      const double t = z / std::sqrt(v / nu);
      return t / std::sqrt(nu / (nu - 2.0));
    }
    case DistFamily::rademacher:
      return s.next_uniform() < 0.5 ? -1.0 : 1.0;
  }
  return 0.0;
}

void check_dims(int n, int p) {
  if (n < 2 || p < 2) throw std::invalid_argument("matrix dimensions must satisfy n >= 2, p >= 2");
}

}  // namespace

DataMatrix sample_matrix(const DistributionSpec& spec, int n, int p, std::uint64_t seed,
                         int workers) {
  spec.validate();
  check_dims(n, p);
  std::vector<double> entries(static_cast<std::size_t>(n) * p);
  parallel_for_index(static_cast<std::size_t>(n), workers, [&](std::size_t r) {
    const std::size_t base = r * static_cast<std::size_t>(p);
    for (int c = 0; c < p; ++c) {
      EntryStream s(seed, base + c, kTagIid);
      entries[base + c] = spec.location + spec.scale * sample_standardized(spec, s);
    }
  });
  return DataMatrix(n, p, std::move(entries));
}

DataMatrix sample_m_dependent(const DistributionSpec& spec, int n, int p, int m,
                              std::uint64_t seed, int workers) {
  spec.validate();
  check_dims(n, p);
  if (m < 1 || m > p - 1) throw std::invalid_argument("m must satisfy 1 <= m <= p - 1");

  DistributionSpec innov = spec;
  innov.location = 0.0;
  innov.scale = 1.0;

  const int width = p + m - 1;
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> entries(static_cast<std::size_t>(n) * p);
  parallel_for_index(static_cast<std::size_t>(n), workers, [&](std::size_t r) {
    std::vector<double> eps(width);
    const std::size_t ebase = r * static_cast<std::size_t>(width);
    for (int t = 0; t < width; ++t) {
      EntryStream s(seed, ebase + t, kTagInnovation);
      eps[t] = sample_standardized(innov, s);
    }
    const std::size_t base = r * static_cast<std::size_t>(p);
    for (int c = 0; c < p; ++c) {
      double acc = 0.0;
      for (int l = 0; l < m; ++l) acc += eps[c + l];
      entries[base + c] = spec.location + spec.scale * inv_sqrt_m * acc;
    }
  });
  return DataMatrix(n, p, std::move(entries));
}

}  // namespace cohere
