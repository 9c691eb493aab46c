#pragma once

#include <vector>

#include "cohere/coherence.hpp"

namespace cohere {

enum class AlphaRegime { low, mid };  // low: 0 < alpha <= 1, mid: 1 < alpha <= 4/3

const char* alpha_regime_name(AlphaRegime regime);

// (n, p, regime, kappa) bundle fixing the normalization of the coherence
// statistics and the reference distributions. p >= 8 keeps log p > 1 and
// log log p > 0, so every normalization below is well-defined.
struct RegimeParams {
  int n = 0;
  int p = 0;
  AlphaRegime regime = AlphaRegime::low;
  double kappa = 0.0;

  void validate() const;  // throws std::invalid_argument
};

struct NormalizedStat {
  double w;
  StatKind source_kind;
  RegimeParams regime;
};

// beta = alpha / (4 - alpha) for 0 < alpha <= 2; the largest dimension
// exponent compatible with the tail exponent alpha.
double beta_of_alpha(double alpha);
// Inverse map: alpha = 4 beta / (1 + beta) for 0 < beta <= 1.
double alpha_of_beta(double beta);

// Skewness correction c_{n,p} = (8 kappa^2 / 3) n^{-1/2} (log p)^{3/2};
// zero in the low regime.
double skew_correction(const RegimeParams& regime);

// W = n L^2 - 4 log p + log log p - c_{n,p}. Strictly increasing in L.
NormalizedStat normalize_w(double L, StatKind kind, const RegimeParams& regime);

// Type-I extreme-value limit F_Y(y) = exp(-(1/sqrt(8 pi)) e^{-y/2}).
double gumbel_cdf(double y);
// Closed-form inverse: y = -2 log(-sqrt(8 pi) log q), 0 < q < 1.
double gumbel_quantile(double q);

// Survival function of chi-square with one degree of freedom:
// P(chi2_1 >= y) = erfc(sqrt(y/2)).
double chisq1_sf(double y);
// log of the above; stays finite and accurate far past the erfc underflow
// point (y up to 1e6 and beyond).
double chisq1_log_sf(double y);
// Inverse of chisq1_sf by monotone bisection in log space.
double chisq1_sf_inv(double prob);

enum class PairCount { exact_pairs, squared_pairs };  // p(p-1)/2 vs p^2/2

double pair_count(PairCount mode, int p);
// Number of pairs with j - i >= m: (p - m)(p - m + 1)/2.
double pair_count_banded(int p, int m);

// Finite-p surrogate for F_Y:
//   exp{ -N * P(chi2_1 >= 4 log p - log log p + y + c_{n,p}) }.
// The mid-regime shift by c_{n,p} makes the approximation target the same W
// defined by normalize_w.
double intermediate_cdf(double y, const RegimeParams& regime, PairCount mode);
double intermediate_cdf_n(double y, const RegimeParams& regime, double n_pairs);

// epsilon_delta = (2 delta - delta^2) / (4 - 2 delta + delta^2), the exponent
// bounding the admissible bandwidth m = o(p^{epsilon_delta}).
double epsilon_delta(double delta);

// Gamma_{p,delta}: indices i (1-based) having some j != i with
// |r_ij| > 1 - delta. R is a p x p row-major correlation matrix.
std::vector<int> gamma_set(const std::vector<double>& R, int p, double delta);

// Limit of L_n when log p / n -> gamma > 0: sqrt(1 - e^{-4 gamma}).
double dense_regime_limit(double gamma);

}  // namespace cohere
