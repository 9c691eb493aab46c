#pragma once

#include <string>

namespace cohere {

enum class DistFamily {
  gaussian,
  centered_exponential,   // Exp(1) - 1
  symmetric_weibull,      // density proportional to exp(-|x|^a), 0 < a <= 2
  two_point_skewed,       // standardized Bernoulli(q), 0 < q < 1
  student_t,              // nu > 2 so the variance exists
  rademacher,
};

// Entry distribution with closed-form standardized moments. The sampled
// variable is location + scale * Z where Z is the standardized (mean 0,
// variance 1) member of the family.
struct DistributionSpec {
  DistFamily family = DistFamily::gaussian;
  double param = 0.0;     // a (symmetric_weibull), q (two_point_skewed), nu (student_t)
  double location = 0.0;  // mu
  double scale = 1.0;     // sigma > 0

  void validate() const;  // throws std::invalid_argument
};

struct Moments {
  double mu;
  double sigma;
  double kappa;  // standardized third central moment
};

// Closed-form (mu, sigma, kappa). Throws when kappa is undefined for the
// family/parameters (student_t needs nu > 3).
Moments standardized_moments(const DistributionSpec& spec);

// Largest alpha such that E exp(t0 |x|^alpha) < infinity for some t0 > 0,
// capped at 2 (the relevant range). 0 means no exponential moment at all.
double tail_exponent_sup(const DistributionSpec& spec);

const char* family_name(DistFamily family);

// Parses "gaussian", "exp", "weibull:a", "two_point:q", "t:nu", "rademacher".
DistributionSpec parse_distribution(const std::string& text);

}  // namespace cohere
