#pragma once

#include <optional>

#include "cohere/coherence.hpp"
#include "cohere/laws.hpp"

namespace cohere {

enum class CalibrationMethod { intermediate, extreme_limit };
enum class Decision { reject, retain };

const char* method_name(CalibrationMethod method);
const char* decision_name(Decision decision);

// Population-level banding assumption check: the fraction of variables with
// some |r_ij| > 1 - delta. The limit theory needs this fraction to vanish;
// a warning is raised when it exceeds 1/2.
struct BandAssumption {
  double delta;
  double gamma_fraction;
  bool warning;
};

// The statistic is reported on the coherence (L) scale so it is identical
// across calibration methods; critical_value lives on the same scale.
// decision == reject  <=>  statistic >= critical_value  <=>  p_value <= level.
struct TestReport {
  StatKind statistic_kind;
  double statistic;
  int n;
  int p;
  int m;  // 1 for the independence test
  double level;
  CalibrationMethod method;
  double critical_value;
  double p_value;
  Decision decision;
  RegimeParams regime;
  PairCount pair_mode;
  std::optional<BandAssumption> band_assumption;
};

// Tests H0: the p variables are independent. The intermediate calibration
// rejects when n L_n^2 >= z with P(chi2_1 >= z) = -2 log(1-level) / (p(p-1));
// the extreme calibration compares W_n with the type-I limit quantile.
TestReport independence_test(const DataMatrix& X, double level, CalibrationMethod method,
                             const RegimeParams& regime, const KernelOptions& opts = {});

// Tests H0: variables at index distance >= m are independent, via L_{n,m}.
// The intermediate calibration defaults to the p^2/2 pair-count convention;
// exact_pairs uses the admissible pair count (p-m)(p-m+1)/2 instead.
// When a population correlation matrix (p x p, row-major) is supplied, the
// report carries the Gamma_{p,delta} fraction and a warning when the
// banding assumption looks implausible. Gamma is never estimated from data.
TestReport m_dependence_test(const DataMatrix& X, int m, double level, CalibrationMethod method,
                             const RegimeParams& regime,
                             PairCount pair_mode = PairCount::squared_pairs,
                             const KernelOptions& opts = {},
                             const std::vector<double>* population_corr = nullptr,
                             double delta = 0.5);

struct MipCertificate {
  double coherence;  // L_tilde
  long long k_max;   // largest k >= 1 with (2k-1) L_tilde < 1; 0 if none
  long long k_rule_of_thumb;  // floor(sqrt(n / log p) / 4)
  std::optional<bool> satisfied;
  int n;
  int p;
};

// Largest k >= 1 with (2k-1) * coherence < 1 (0 if none). A perfectly
// incoherent matrix (coherence == 0) admits every k; the result is capped
// at 2^53.
long long mip_k_max(double coherence);

// Mutual incoherence certificate for a measurement matrix with known column
// mean mu: recovery of any k-sparse signal is guaranteed while
// (2k-1) L_tilde < 1.
MipCertificate mip_certificate(const DataMatrix& X, double mu,
                               std::optional<long long> requested_k = std::nullopt,
                               const KernelOptions& opts = {});

}  // namespace cohere
