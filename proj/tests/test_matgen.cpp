#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cohere/matgen.hpp"

using namespace cohere;

namespace {

double col_mean(const DataMatrix& X, int c) {
  double s = 0.0;
  for (int r = 0; r < X.n(); ++r) s += X(r, c);
  return s / X.n();
}

double col_corr(const DataMatrix& X, int a, int b) {
  const double ma = col_mean(X, a), mb = col_mean(X, b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (int r = 0; r < X.n(); ++r) {
    const double da = X(r, a) - ma, db = X(r, b) - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("rademacher entries live on {-1, +1}") {
  const DataMatrix X = sample_matrix({DistFamily::rademacher}, 2, 2, 12345);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) CHECK(std::abs(X(r, c)) == 1.0);
}

TEST_CASE("gaussian sample mean within the CLT bound") {
  // 4 / sqrt(n) band per column
  const int n = 10000;
  const DataMatrix X = sample_matrix({DistFamily::gaussian}, n, 2, 7);
  CHECK(std::abs(col_mean(X, 0)) < 0.04);
  CHECK(std::abs(col_mean(X, 1)) < 0.04);
}

TEST_CASE("sampling is deterministic and schedule independent") {
  DistributionSpec spec{DistFamily::symmetric_weibull, 0.5};
  const DataMatrix a = sample_matrix(spec, 40, 17, 99, 1);
  const DataMatrix b = sample_matrix(spec, 40, 17, 99, 4);
  CHECK(a.entries() == b.entries());
  const DataMatrix c = sample_matrix(spec, 40, 17, 100, 1);
  CHECK(a.entries() != c.entries());

  const DataMatrix d = sample_m_dependent(spec, 30, 12, 3, 5, 1);
  const DataMatrix e = sample_m_dependent(spec, 30, 12, 3, 5, 4);
  CHECK(d.entries() == e.entries());
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(sample_matrix({DistFamily::gaussian}, 1, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_matrix({DistFamily::gaussian}, 5, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS((sample_matrix({DistFamily::two_point_skewed, 1.5}, 5, 5, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS((sample_matrix({DistFamily::symmetric_weibull, 2.5}, 5, 5, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS((sample_matrix({DistFamily::student_t, 2.0}, 5, 5, 0)), std::invalid_argument);
  DistributionSpec bad{DistFamily::gaussian};
  bad.scale = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(sample_m_dependent({DistFamily::gaussian}, 10, 5, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_m_dependent({DistFamily::gaussian}, 10, 5, 0, 0), std::invalid_argument);
}

TEST_CASE("moving-average columns carry the designed lag correlations") {
  const int n = 100000;
  const DataMatrix X = sample_m_dependent({DistFamily::gaussian}, n, 6, 3, 2024);
  // population r at lag 1 is (m-1)/m = 2/3
  CHECK(std::abs(col_corr(X, 0, 1) - 2.0 / 3.0) < 0.01);
  // lag m: independent
  CHECK(std::abs(col_corr(X, 0, 3)) < 0.01);
  // lag 2: 1/3
  CHECK(std::abs(col_corr(X, 0, 2) - 1.0 / 3.0) < 0.01);
}

TEST_CASE("MA(1) is the i.i.d. design") {
  const int n = 50000;
  const DataMatrix X = sample_m_dependent({DistFamily::gaussian}, n, 4, 1, 77);
  double m2 = 0.0;
  for (int r = 0; r < n; ++r) m2 += X(r, 0) * X(r, 0);
  CHECK(std::abs(m2 / n - 1.0) < 0.05);
  CHECK(std::abs(col_corr(X, 0, 1)) < 0.02);
}

TEST_CASE("standardized moments match the closed forms") {
  CHECK(standardized_moments({DistFamily::gaussian}).kappa == 0.0);
  CHECK(standardized_moments({DistFamily::centered_exponential}).kappa == 2.0);
  CHECK(standardized_moments({DistFamily::two_point_skewed, 0.2}).kappa == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(standardized_moments({DistFamily::rademacher}).kappa == 0.0);
  CHECK(standardized_moments({DistFamily::student_t, 5.0}).kappa == 0.0);
  CHECK_THROWS_AS((standardized_moments({DistFamily::student_t, 3.0})), std::invalid_argument);

  DistributionSpec shifted{DistFamily::gaussian};
  shifted.location = 3.0;
  shifted.scale = 2.0;
  const Moments m = standardized_moments(shifted);
  CHECK(m.mu == 3.0);
  CHECK(m.sigma == 2.0);
}

TEST_CASE("tail exponent bookkeeping") {
  CHECK(tail_exponent_sup({DistFamily::gaussian}) == 2.0);
  CHECK(tail_exponent_sup({DistFamily::centered_exponential}) == 1.0);
  CHECK(tail_exponent_sup({DistFamily::symmetric_weibull, 0.7}) == 0.7);
  CHECK(tail_exponent_sup({DistFamily::student_t, 3.0}) == 0.0);
}

// Empirical mean / variance / skewness against the closed forms, judged by
// batch-mean standard errors (100 batches of 10^4 draws).
TEST_CASE("moment consistency across families") {
  struct Config {
    DistributionSpec spec;
    double kappa;
  };
  const Config configs[] = {
      {{DistFamily::gaussian}, 0.0},
      {{DistFamily::centered_exponential}, 2.0},
      {{DistFamily::symmetric_weibull, 0.5}, 0.0},
      {{DistFamily::symmetric_weibull, 1.5}, 0.0},
      {{DistFamily::two_point_skewed, 0.2}, 1.5},
      {{DistFamily::student_t, 7.0}, 0.0},  // nu > 6 keeps the skewness SE stable
      {{DistFamily::rademacher}, 0.0},
  };
  const int batches = 100;
  const int batch_n = 10000;
  for (const auto& [spec, kappa] : configs) {
    CAPTURE(family_name(spec.family));
    const DataMatrix X = sample_matrix(spec, batches * batch_n / 2, 2, 31337);
    std::vector<double> bm(batches), bv(batches), bs(batches);
    for (int b = 0; b < batches; ++b) {
      double s1 = 0, s2 = 0, s3 = 0;
      for (int k = 0; k < batch_n; ++k) {
        const std::size_t idx = static_cast<std::size_t>(b) * batch_n + k;
        const double v = X.entries()[idx];
        s1 += v;
        s2 += v * v;
        s3 += v * v * v;
      }
      bm[b] = s1 / batch_n;
      bv[b] = s2 / batch_n;
      bs[b] = s3 / batch_n;
    }
    auto grand_and_se = [&](const std::vector<double>& vals) {
      double g = 0;
      for (double v : vals) g += v;
      g /= batches;
      double var = 0;
      for (double v : vals) var += (v - g) * (v - g);
      var /= (batches - 1);
      return std::pair{g, std::sqrt(var / batches)};
    };
    const auto [gm, sem] = grand_and_se(bm);
    const auto [gv, sev] = grand_and_se(bv);
    const auto [gs, ses] = grand_and_se(bs);
    CHECK(std::abs(gm - 0.0) < 5.0 * sem + 1e-12);
    CHECK(std::abs(gv - 1.0) < 5.0 * sev + 1e-12);
    // E X^3 of the standardized family equals kappa
    CHECK(std::abs(gs - kappa) < 5.0 * ses + 1e-12);
  }
}
