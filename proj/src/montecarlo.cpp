#include "cohere/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cohere/matgen.hpp"
#include "cohere/parallel.hpp"
#include "cohere/rng.hpp"

namespace cohere {

const char* plan_stat_name(PlanStat stat) {
  switch (stat) {
    case PlanStat::Ln: return "Ln";
    case PlanStat::Ltilde: return "Ltilde";
    case PlanStat::L0: return "L0";
    case PlanStat::Lnm: return "Lnm";
    case PlanStat::Wn: return "Wn";
    case PlanStat::Wnm: return "Wnm";
  }
  return "?";
}

PlanStat parse_plan_stat(const std::string& text) {
  if (text == "Ln") return PlanStat::Ln;
  if (text == "Ltilde") return PlanStat::Ltilde;
  if (text == "L0") return PlanStat::L0;
  if (text == "Lnm") return PlanStat::Lnm;
  if (text == "Wn") return PlanStat::Wn;
  if (text == "Wnm") return PlanStat::Wnm;
  throw std::invalid_argument("unknown statistic '" + text + "' (Ln, Ltilde, L0, Lnm, Wn, Wnm)");
}

namespace {

bool is_masked_stat(PlanStat s) { return s == PlanStat::Lnm || s == PlanStat::Wnm; }
bool is_w_stat(PlanStat s) { return s == PlanStat::Wn || s == PlanStat::Wnm; }

// The coherence value of one replication; all recorded statistics derive
// from it.
double replicate_L(const SimulationPlan& plan, int rep) {
  const std::uint64_t seed = rng::derive_stream_seed(plan.master_seed, static_cast<std::uint64_t>(rep));
  const KernelOptions kopts{plan.tile, 1};  // replications parallelize, kernels stay serial
  try {
    DataMatrix X = plan.m ? sample_m_dependent(plan.spec, plan.n, plan.p, *plan.m, seed)
                          : sample_matrix(plan.spec, plan.n, plan.p, seed);
    switch (plan.statistic) {
      case PlanStat::Ltilde:
        return coherence_known_moments(X, plan.spec.location, plan.spec.scale, StatKind::L_tilde,
                                       kopts).value;
      case PlanStat::L0:
        return coherence_known_moments(X, plan.spec.location, plan.spec.scale, StatKind::L_0,
                                       kopts).value;
      case PlanStat::Lnm:
      case PlanStat::Wnm:
        return m_coherence(X, *plan.m, kopts).value;
      case PlanStat::Ln:
      case PlanStat::Wn:
        return coherence(X, kopts).value;
    }
    return 0.0;
  } catch (const DegenerateColumnError& e) {
    throw std::runtime_error("replication " + std::to_string(rep) + ": " + e.what());
  }
}

StatKind base_kind(PlanStat s) {
  switch (s) {
    case PlanStat::Ltilde: return StatKind::L_tilde;
    case PlanStat::L0: return StatKind::L_0;
    case PlanStat::Lnm:
    case PlanStat::Wnm: return StatKind::L_nm;
    default: return StatKind::L_n;
  }
}

}  // namespace

void SimulationPlan::validate() const {
  spec.validate();
  if (n < 2 || p < 2) throw std::invalid_argument("plan needs n >= 2 and p >= 2");
  if (replications < 1) throw std::invalid_argument("plan needs at least one replication");
  if (m && (*m < 1 || *m > p - 1)) throw std::invalid_argument("plan m must satisfy 1 <= m <= p - 1");
  if (is_masked_stat(statistic) != m.has_value()) {
    throw std::invalid_argument("masked statistics (Lnm, Wnm) require m and vice versa");
  }
  regime.validate();
  if (regime.n != n || regime.p != p) {
    throw std::invalid_argument("regime (n, p) must match the plan");
  }
  for (double eps : lln_epsilons) {
    if (!(eps > 0.0)) throw std::invalid_argument("lln epsilons must be positive");
  }
}

PairCount SimulationPlan::resolved_pair_mode() const {
  if (pair_mode) return *pair_mode;
  return is_masked_stat(statistic) ? PairCount::squared_pairs : PairCount::exact_pairs;
}

double ks_distance(const std::vector<double>& sorted_samples,
                   const std::function<double(double)>& cdf) {
  if (sorted_samples.empty()) throw std::invalid_argument("ks_distance needs samples");
  const double r = static_cast<double>(sorted_samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
    const double f = cdf(sorted_samples[i]);
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / r - f));
    d = std::max(d, std::abs(static_cast<double>(i) / r - f));
  }
  return d;
}

EmpiricalSummary run_replications(const SimulationPlan& plan) {
  plan.validate();
  const int R = plan.replications;

  std::vector<double> L(R);
  parallel_for_index(static_cast<std::size_t>(R), plan.workers,
                     [&](std::size_t r) { L[r] = replicate_L(plan, static_cast<int>(r)); });

  const StatKind kind = base_kind(plan.statistic);
  EmpiricalSummary out;
  out.samples.resize(R);
  for (int r = 0; r < R; ++r) {
    out.samples[r] = is_w_stat(plan.statistic) ? normalize_w(L[r], kind, plan.regime).w : L[r];
  }
  out.sorted = out.samples;
  std::sort(out.sorted.begin(), out.sorted.end());

  std::vector<double> w_sorted(R);
  for (int r = 0; r < R; ++r) w_sorted[r] = normalize_w(L[r], kind, plan.regime).w;
  std::sort(w_sorted.begin(), w_sorted.end());

  out.ks_vs_gumbel = ks_distance(w_sorted, [](double y) { return gumbel_cdf(y); });
  const double n_pairs = plan.resolved_pair_mode() == PairCount::squared_pairs
                             ? pair_count(PairCount::squared_pairs, plan.p)
                             : (plan.m ? pair_count_banded(plan.p, *plan.m)
                                       : pair_count(PairCount::exact_pairs, plan.p));
  out.ks_vs_intermediate = ks_distance(
      w_sorted, [&](double y) { return intermediate_cdf_n(y, plan.regime, n_pairs); });

  const double scale = std::sqrt(plan.n / std::log(static_cast<double>(plan.p)));
  for (double eps : plan.lln_epsilons) {
    int in_band = 0;
    for (int r = 0; r < R; ++r) {
      const double s = scale * L[r];
      if (s >= 2.0 - eps && s <= 2.0 + eps) ++in_band;
    }
    out.lln_fraction[eps] = static_cast<double>(in_band) / R;
  }

  double sum = 0.0;
  for (double v : out.samples) sum += v;
  out.mean = sum / R;
  out.median = R % 2 == 1 ? out.sorted[R / 2]
                          : 0.5 * (out.sorted[R / 2 - 1] + out.sorted[R / 2]);
  return out;
}

double lln_check(const SimulationPlan& plan, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  SimulationPlan local = plan;
  local.lln_epsilons = {epsilon};
  return run_replications(local).lln_fraction.at(epsilon);
}

double empirical_size(const SimulationPlan& plan, double level, CalibrationMethod method,
                      std::optional<int> test_gap) {
  plan.validate();
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");
  const std::optional<int> gap = test_gap ? test_gap : plan.m;
  if (gap && (*gap < 1 || *gap > plan.p - 1)) {
    throw std::invalid_argument("test gap must satisfy 1 <= gap <= p - 1");
  }

  const int R = plan.replications;
  std::vector<char> rejected(R, 0);
  parallel_for_index(static_cast<std::size_t>(R), plan.workers, [&](std::size_t r) {
    const std::uint64_t seed = rng::derive_stream_seed(plan.master_seed, r);
    const KernelOptions kopts{plan.tile, 1};
    DataMatrix X = plan.m ? sample_m_dependent(plan.spec, plan.n, plan.p, *plan.m, seed)
                          : sample_matrix(plan.spec, plan.n, plan.p, seed);
    const TestReport report =
        gap ? m_dependence_test(X, *gap, level, method, plan.regime, plan.resolved_pair_mode(),
                                kopts)
            : independence_test(X, level, method, plan.regime, kopts);
    rejected[r] = report.decision == Decision::reject ? 1 : 0;
  });
  int count = 0;
  for (char c : rejected) count += c;
  return static_cast<double>(count) / R;
}

}  // namespace cohere
