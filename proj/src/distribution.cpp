#include "cohere/distribution.hpp"

#include <cmath>
#include <stdexcept>

namespace cohere {

void DistributionSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("distribution scale must be positive and finite");
  }
  if (!std::isfinite(location)) {
    throw std::invalid_argument("distribution location must be finite");
  }
  switch (family) {
    case DistFamily::gaussian:
    case DistFamily::centered_exponential:
    case DistFamily::rademacher:
      break;
    case DistFamily::symmetric_weibull:
      if (!(param > 0.0 && param <= 2.0)) {
        throw std::invalid_argument("symmetric_weibull tail exponent must be in (0, 2]");
      }
      break;
    case DistFamily::two_point_skewed:
      if (!(param > 0.0 && param < 1.0)) {
        throw std::invalid_argument("two_point_skewed success probability must be in (0, 1)");
      }
      break;
    case DistFamily::student_t:
      if (!(param > 2.0)) {
        throw std::invalid_argument("student_t degrees of freedom must exceed 2");
      }
      break;
  }
}

Moments standardized_moments(const DistributionSpec& spec) {
  spec.validate();
  double kappa = 0.0;
  switch (spec.family) {
    case DistFamily::gaussian:
    case DistFamily::rademacher:
    case DistFamily::symmetric_weibull:
      kappa = 0.0;  // symmetric families
      break;
    case DistFamily::centered_exponential:
      kappa = 2.0;  // third central moment of Exp(1)
      break;
    case DistFamily::two_point_skewed: {
      const double q = spec.param;
      kappa = (1.0 - 2.0 * q) / std::sqrt(q * (1.0 - q));
      break;
    }
    case DistFamily::student_t:
      if (!(spec.param > 3.0)) {
        throw std::invalid_argument("student_t skewness needs nu > 3");
      }
      kappa = 0.0;
      break;
  }
  return Moments{spec.location, spec.scale, kappa};
}

double tail_exponent_sup(const DistributionSpec& spec) {
  switch (spec.family) {
    case DistFamily::gaussian:
    case DistFamily::two_point_skewed:
    case DistFamily::rademacher:
      return 2.0;
    case DistFamily::centered_exponential:
      return 1.0;
    case DistFamily::symmetric_weibull:
      return spec.param;
    case DistFamily::student_t:
      return 0.0;  // polynomial tails: no exponential moment
  }
  return 0.0;
}

const char* family_name(DistFamily family) {
  switch (family) {
    case DistFamily::gaussian: return "gaussian";
    case DistFamily::centered_exponential: return "centered_exponential";
    case DistFamily::symmetric_weibull: return "symmetric_weibull";
    case DistFamily::two_point_skewed: return "two_point_skewed";
    case DistFamily::student_t: return "student_t";
    case DistFamily::rademacher: return "rademacher";
  }
  return "?";
}

DistributionSpec parse_distribution(const std::string& text) {
  std::string name = text;
  double param = 0.0;
  bool has_param = false;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    name = text.substr(0, colon);
    try {
      param = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad distribution parameter in '" + text + "'");
    }
    has_param = true;
  }

  DistributionSpec spec;
  if (name == "gaussian" || name == "normal") {
    spec.family = DistFamily::gaussian;
  } else if (name == "exp" || name == "centered_exponential") {
    spec.family = DistFamily::centered_exponential;
  } else if (name == "weibull" || name == "symmetric_weibull") {
    spec.family = DistFamily::symmetric_weibull;
    if (!has_param) throw std::invalid_argument("symmetric_weibull needs a tail exponent, e.g. weibull:0.5");
    spec.param = param;
  } else if (name == "two_point" || name == "two_point_skewed") {
    spec.family = DistFamily::two_point_skewed;
    if (!has_param) throw std::invalid_argument("two_point_skewed needs a success probability, e.g. two_point:0.2");
    spec.param = param;
  } else if (name == "t" || name == "student_t") {
    spec.family = DistFamily::student_t;
    if (!has_param) throw std::invalid_argument("student_t needs degrees of freedom, e.g. t:3");
    spec.param = param;
  } else if (name == "rademacher") {
    spec.family = DistFamily::rademacher;
  } else {
    throw std::invalid_argument("unknown distribution '" + text + "'");
  }
  spec.validate();
  return spec;
}

}  // namespace cohere
