#include "cohere/hypotest.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cohere {

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

TestReport calibrate(const CoherenceResult& stat, int n, int p, int m, double level,
                     CalibrationMethod method, const RegimeParams& regime, double n_pairs,
                     PairCount pair_mode) {
  const double logp = std::log(static_cast<double>(p));
  const double shift = 4.0 * logp - std::log(logp) + skew_correction(regime);

  double critical = 0.0;
  double p_value = 0.0;
  if (method == CalibrationMethod::intermediate) {
    const double z = chisq1_sf_inv(-std::log1p(-level) / n_pairs);
    critical = std::sqrt(z / n);
    const double t = std::log(n_pairs) + chisq1_log_sf(n * stat.value * stat.value);
    p_value = clip01(-std::expm1(-std::exp(t)));
  } else {
    const double w_crit = gumbel_quantile(1.0 - level);
    critical = std::sqrt(std::max(0.0, w_crit + shift) / n);
    const double w = normalize_w(stat.value, stat.kind, regime).w;
    p_value = clip01(1.0 - gumbel_cdf(w));
  }

  const Decision decision = stat.value >= critical ? Decision::reject : Decision::retain;
  return TestReport{stat.kind, stat.value, n,        p,        m,      level,   method,
                    critical,  p_value,    decision, regime,   pair_mode, std::nullopt};
}

}  // namespace

const char* method_name(CalibrationMethod method) {
  return method == CalibrationMethod::intermediate ? "intermediate" : "extreme_limit";
}

const char* decision_name(Decision decision) {
  return decision == Decision::reject ? "reject" : "retain";
}

TestReport independence_test(const DataMatrix& X, double level, CalibrationMethod method,
                             const RegimeParams& regime, const KernelOptions& opts) {
  check_level(level);
  regime.validate();
  if (regime.n != X.n() || regime.p != X.p()) {
    throw std::invalid_argument("regime (n, p) must match the data matrix");
  }
  const CoherenceResult stat = coherence(X, opts);
  const double n_pairs = pair_count(PairCount::exact_pairs, X.p());
  return calibrate(stat, X.n(), X.p(), 1, level, method, regime, n_pairs,
                   PairCount::exact_pairs);
}

TestReport m_dependence_test(const DataMatrix& X, int m, double level, CalibrationMethod method,
                             const RegimeParams& regime, PairCount pair_mode,
                             const KernelOptions& opts, const std::vector<double>* population_corr,
                             double delta) {
  check_level(level);
  regime.validate();
  if (regime.n != X.n() || regime.p != X.p()) {
    throw std::invalid_argument("regime (n, p) must match the data matrix");
  }
  const CoherenceResult stat = m_coherence(X, m, opts);
  const double n_pairs = pair_mode == PairCount::squared_pairs
                             ? pair_count(PairCount::squared_pairs, X.p())
                             : pair_count_banded(X.p(), m);
  TestReport report = calibrate(stat, X.n(), X.p(), m, level, method, regime, n_pairs, pair_mode);
  if (population_corr != nullptr) {
    const double fraction =
        static_cast<double>(gamma_set(*population_corr, X.p(), delta).size()) / X.p();
    report.band_assumption = BandAssumption{delta, fraction, fraction > 0.5};
  }
  return report;
}

long long mip_k_max(double coherence) {
  if (!(coherence >= 0.0)) throw std::invalid_argument("coherence must be nonnegative");
  constexpr long long kCap = 1LL << 53;
  if (coherence == 0.0) return kCap;
  if (coherence >= 1.0) return 0;
  // closed form, then nudged so the strict inequality is met exactly as
  // floating-point evaluation sees it
  const double est = std::ceil((1.0 / coherence + 1.0) / 2.0) - 1.0;
  long long k = static_cast<long long>(std::min(est, static_cast<double>(kCap)));
  while (k >= 1 && !((2.0 * k - 1.0) * coherence < 1.0)) --k;
  while (k < kCap && (2.0 * (k + 1) - 1.0) * coherence < 1.0) ++k;
  return k;
}

MipCertificate mip_certificate(const DataMatrix& X, double mu,
                               std::optional<long long> requested_k, const KernelOptions& opts) {
  const CoherenceResult res = coherence_known_moments(X, mu, 1.0, StatKind::L_tilde, opts);
  const double L = res.value;
  const long long k_max = mip_k_max(L);

  const double logp = std::log(static_cast<double>(X.p()));
  const long long k_rule =
      static_cast<long long>(std::floor(std::sqrt(X.n() / logp) / 4.0));

  std::optional<bool> satisfied;
  if (requested_k) {
    if (*requested_k < 1) throw std::invalid_argument("requested sparsity k must be >= 1");
    satisfied = (2.0 * *requested_k - 1.0) * L < 1.0;
  }
  return MipCertificate{L, k_max, k_rule, satisfied, X.n(), X.p()};
}

}  // namespace cohere
