#include "cohere/laws.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cohere {

namespace {

const double kSqrt8Pi = std::sqrt(8.0 * std::numbers::pi);
const double kHalfLogPi = 0.5 * std::log(std::numbers::pi);

}  // namespace

const char* alpha_regime_name(AlphaRegime regime) {
  return regime == AlphaRegime::low ? "low" : "mid";
}

void RegimeParams::validate() const {
  if (n < 2) throw std::invalid_argument("RegimeParams: n must be >= 2");
  if (p < 8) throw std::invalid_argument("RegimeParams: p must be >= 8");
  if (!std::isfinite(kappa)) throw std::invalid_argument("RegimeParams: kappa must be finite");
}

double beta_of_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must be in (0, 2]");
  return alpha / (4.0 - alpha);
}

double alpha_of_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in (0, 1]");
  return 4.0 * beta / (1.0 + beta);
}

double skew_correction(const RegimeParams& regime) {
  regime.validate();
  if (regime.regime == AlphaRegime::low) return 0.0;
  const double logp = std::log(static_cast<double>(regime.p));
  return (8.0 * regime.kappa * regime.kappa / 3.0) / std::sqrt(static_cast<double>(regime.n)) *
         logp * std::sqrt(logp);
}

NormalizedStat normalize_w(double L, StatKind kind, const RegimeParams& regime) {
  regime.validate();
  if (!(L >= 0.0)) throw std::invalid_argument("L must be nonnegative");
  const double logp = std::log(static_cast<double>(regime.p));
  const double w = regime.n * L * L - 4.0 * logp + std::log(logp) - skew_correction(regime);
  return NormalizedStat{w, kind, regime};
}

double gumbel_cdf(double y) {
  return std::exp(-std::exp(-y / 2.0) / kSqrt8Pi);
}

double gumbel_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile argument must be in (0, 1)");
  return -2.0 * std::log(-kSqrt8Pi * std::log(q));
}

double chisq1_sf(double y) {
  if (!(y >= 0.0)) throw std::invalid_argument("chisq1_sf needs y >= 0");
  return std::erfc(std::sqrt(y / 2.0));
}

double chisq1_log_sf(double y) {
  if (!(y >= 0.0)) throw std::invalid_argument("chisq1_log_sf needs y >= 0");
  const double x = std::sqrt(y / 2.0);
  if (x < 26.0) {
    return std::log(std::erfc(x));  // erfc(26) ~ 1e-295, still normal
  }
  // asymptotic expansion: erfc(x) = e^{-x^2} / (x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2x^2)^k
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0, series = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) * inv2x2;
    series += term;
  }
  return -x * x - std::log(x) - kHalfLogPi + std::log(series);
}

double chisq1_sf_inv(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw std::invalid_argument("probability must be in (0, 1)");
  const double target = std::log(prob);
  double lo = 0.0;        // log_sf(0) = 0 > target
  double hi = 1.0;
  while (chisq1_log_sf(hi) > target) {
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("chisq1_sf_inv: bracket expansion failed");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (chisq1_log_sf(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double pair_count(PairCount mode, int p) {
  const double pd = p;
  return mode == PairCount::exact_pairs ? pd * (pd - 1.0) / 2.0 : pd * pd / 2.0;
}

double pair_count_banded(int p, int m) {
  if (m < 1 || m > p - 1) throw std::invalid_argument("bandwidth m must satisfy 1 <= m <= p - 1");
  const double q = p - m;
  return q * (q + 1.0) / 2.0;
}

double intermediate_cdf_n(double y, const RegimeParams& regime, double n_pairs) {
  regime.validate();
  if (!(n_pairs >= 1.0)) throw std::invalid_argument("pair count must be >= 1");
  const double logp = std::log(static_cast<double>(regime.p));
  const double arg = 4.0 * logp - std::log(logp) + y + skew_correction(regime);
  if (!(arg > 0.0)) {
    throw std::invalid_argument("intermediate approximation needs 4 log p - log log p + y > 0");
  }
  // exp(-N * sf) via log space so small survival masses never underflow to 0
  const double t = std::log(n_pairs) + chisq1_log_sf(arg);
  return std::exp(-std::exp(t));
}

double intermediate_cdf(double y, const RegimeParams& regime, PairCount mode) {
  return intermediate_cdf_n(y, regime, pair_count(mode, regime.p));
}

double epsilon_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must be in (0, 1]");
  return (2.0 * delta - delta * delta) / (4.0 - 2.0 * delta + delta * delta);
}

std::vector<int> gamma_set(const std::vector<double>& R, int p, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
  if (p < 1 || R.size() != static_cast<std::size_t>(p) * p) {
    throw std::invalid_argument("correlation matrix size does not match p");
  }
  const double tol = 1e-12;
  for (int i = 0; i < p; ++i) {
    if (std::abs(R[static_cast<std::size_t>(i) * p + i] - 1.0) > tol) {
      throw std::invalid_argument("correlation matrix must have unit diagonal");
    }
    for (int j = i + 1; j < p; ++j) {
      const double rij = R[static_cast<std::size_t>(i) * p + j];
      const double rji = R[static_cast<std::size_t>(j) * p + i];
      if (std::abs(rij) > 1.0 + tol || std::abs(rij - rji) > tol) {
        throw std::invalid_argument("correlation matrix must be symmetric with entries in [-1, 1]");
      }
    }
  }
  const double threshold = 1.0 - delta;
  std::vector<int> members;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (j == i) continue;
      if (std::abs(R[static_cast<std::size_t>(i) * p + j]) > threshold) {
        members.push_back(i + 1);
        break;
      }
    }
  }
  return members;
}

double dense_regime_limit(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  return std::sqrt(-std::expm1(-4.0 * gamma));
}

}  // namespace cohere
