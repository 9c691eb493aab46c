#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "cohere/distribution.hpp"
#include "cohere/hypotest.hpp"
#include "cohere/laws.hpp"

namespace cohere {

// Which per-replication statistic is recorded.
enum class PlanStat { Ln, Ltilde, L0, Lnm, Wn, Wnm };

const char* plan_stat_name(PlanStat stat);
PlanStat parse_plan_stat(const std::string& text);

// A reproducible replication experiment. Replication r draws its matrix from
// a child seed derived from (master_seed, r), so the recorded samples are a
// pure function of the plan regardless of the worker count.
struct SimulationPlan {
  DistributionSpec spec;
  int n = 0;
  int p = 0;
  std::optional<int> m;  // present: MA(m) rows + the m-masked statistic
  PlanStat statistic = PlanStat::Ln;
  RegimeParams regime;
  int replications = 1;
  std::uint64_t master_seed = 0;
  std::optional<PairCount> pair_mode;  // default: squared for masked stats, exact otherwise
  std::vector<double> lln_epsilons{0.1, 0.2, 0.5};
  int workers = 1;
  int tile = 256;

  void validate() const;
  PairCount resolved_pair_mode() const;
};

struct EmpiricalSummary {
  std::vector<double> samples;  // by replication index, in the requested statistic's domain
  std::vector<double> sorted;
  double ks_vs_gumbel;
  double ks_vs_intermediate;
  std::map<double, double> lln_fraction;  // epsilon -> fraction in [2 - eps, 2 + eps]
  double mean;
  double median;
};

EmpiricalSummary run_replications(const SimulationPlan& plan);

// Two-sided Kolmogorov-Smirnov sup-distance between the ECDF of sorted
// samples and a monotone reference CDF.
double ks_distance(const std::vector<double>& sorted_samples,
                   const std::function<double(double)>& cdf);

// Fraction of replications whose sqrt(n / log p) * L statistic lies in
// [2 - epsilon, 2 + epsilon].
double lln_check(const SimulationPlan& plan, double epsilon);

// Fraction of replications rejected by the induced test. With the plan's own
// gap (H0 true) this estimates size; pass a smaller test_gap than the MA
// order to measure power against a dependent alternative.
double empirical_size(const SimulationPlan& plan, double level, CalibrationMethod method,
                      std::optional<int> test_gap = std::nullopt);

}  // namespace cohere
