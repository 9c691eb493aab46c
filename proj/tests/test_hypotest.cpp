#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cohere/hypotest.hpp"
#include "cohere/matgen.hpp"

using namespace cohere;

namespace {

RegimeParams low_regime(const DataMatrix& X) {
  return RegimeParams{X.n(), X.p(), AlphaRegime::low, 0.0};
}

// n x p matrix whose first two columns coincide (alternating signs keep the
// column norms exactly representable).
DataMatrix duplicated_columns(int n, int p) {
  std::vector<double> entries(static_cast<std::size_t>(n) * p);
  std::mt19937_64 gen(17);
  std::normal_distribution<double> d;
  for (int r = 0; r < n; ++r) {
    const double v = r % 2 == 0 ? 1.0 : -1.0;
    entries[static_cast<std::size_t>(r) * p + 0] = v;
    entries[static_cast<std::size_t>(r) * p + 1] = v;
    for (int c = 2; c < p; ++c) entries[static_cast<std::size_t>(r) * p + c] = d(gen);
  }
  return DataMatrix(n, p, std::move(entries));
}

}  // namespace

TEST_CASE("duplicated columns force rejection") {
  const DataMatrix X = duplicated_columns(100, 10);
  for (auto method : {CalibrationMethod::intermediate, CalibrationMethod::extreme_limit}) {
    const TestReport r = independence_test(X, 0.05, method, low_regime(X));
    CHECK(r.statistic == 1.0);
    CHECK(r.decision == Decision::reject);
    CHECK(r.p_value <= 0.05);
  }
}

TEST_CASE("intermediate critical value matches the direct oracle") {
  // target tail mass -2 log(0.95) / (p(p-1)) at level 0.05, p = 100
  const double tail = -2.0 * std::log(0.95) / (100.0 * 99.0);
  CHECK(tail == doctest::Approx(1.0362281694454653e-5).epsilon(1e-12));
  const double z = chisq1_sf_inv(tail);
  CHECK(z == doctest::Approx(19.443445857632868).epsilon(1e-9));
  CHECK(chisq1_sf(z) == doctest::Approx(tail).epsilon(1e-10));

  const DataMatrix X = sample_matrix({DistFamily::gaussian}, 50, 100, 3);
  const TestReport r = independence_test(X, 0.05, CalibrationMethod::intermediate, low_regime(X));
  CHECK(r.critical_value == doctest::Approx(std::sqrt(z / 50.0)).epsilon(1e-12));
  CHECK(r.m == 1);
  CHECK(r.statistic_kind == StatKind::L_n);
}

TEST_CASE("level validation") {
  const DataMatrix X = sample_matrix({DistFamily::gaussian}, 20, 10, 5);
  for (double bad : {0.0, 1.0, 1.5, -0.2}) {
    CHECK_THROWS_AS(independence_test(X, bad, CalibrationMethod::intermediate, low_regime(X)),
                    std::invalid_argument);
  }
}

TEST_CASE("statistic is identical across calibration methods") {
  const DataMatrix X = sample_matrix({DistFamily::centered_exponential}, 60, 20, 9);
  const TestReport a = independence_test(X, 0.05, CalibrationMethod::intermediate, low_regime(X));
  const TestReport b = independence_test(X, 0.05, CalibrationMethod::extreme_limit, low_regime(X));
  CHECK(a.statistic == b.statistic);
}

TEST_CASE("decision, critical value and p-value stay consistent") {
  std::mt19937_64 gen(404);
  std::uniform_real_distribution<double> level_d(0.001, 0.6);
  int checked = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const DataMatrix X = sample_matrix({DistFamily::gaussian}, 24, 12, 1000 + rep);
    for (int k = 0; k < 25; ++k) {
      const double level = level_d(gen);
      for (auto method : {CalibrationMethod::intermediate, CalibrationMethod::extreme_limit}) {
        const TestReport r = independence_test(X, level, method, low_regime(X));
        CHECK((r.decision == Decision::reject) == (r.statistic >= r.critical_value));
        CHECK((r.decision == Decision::reject) == (r.p_value <= r.level));
        CHECK(r.p_value >= 0.0);
        CHECK(r.p_value <= 1.0);
        ++checked;
      }
    }
  }
  CHECK(checked == 2000);
}

TEST_CASE("decision is scale invariant") {
  const DataMatrix X = sample_matrix({DistFamily::gaussian}, 40, 16, 77);
  std::vector<double> scaled = X.entries();
  for (int r = 0; r < X.n(); ++r)
    for (int c = 0; c < X.p(); ++c) scaled[static_cast<std::size_t>(r) * X.p() + c] *= (1.0 + c);
  const DataMatrix Y(X.n(), X.p(), std::move(scaled));
  for (double level : {0.01, 0.05, 0.2, 0.5}) {
    const TestReport a = independence_test(X, level, CalibrationMethod::intermediate, low_regime(X));
    const TestReport b = independence_test(Y, level, CalibrationMethod::intermediate, low_regime(Y));
    CHECK(a.decision == b.decision);
    CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-10));
  }
}

TEST_CASE("m-dependence test with m=1 and exact count reproduces independence") {
  const DataMatrix X = sample_matrix({DistFamily::gaussian}, 50, 12, 6);
  const TestReport ind = independence_test(X, 0.05, CalibrationMethod::intermediate, low_regime(X));
  const TestReport m1 = m_dependence_test(X, 1, 0.05, CalibrationMethod::intermediate,
                                          low_regime(X), PairCount::exact_pairs);
  CHECK(m1.statistic == ind.statistic);
  CHECK(m1.critical_value == ind.critical_value);
  CHECK(m1.p_value == ind.p_value);
  CHECK(m1.decision == ind.decision);

  CHECK_THROWS_AS(m_dependence_test(X, 12, 0.05, CalibrationMethod::intermediate, low_regime(X)),
                  std::invalid_argument);
}

TEST_CASE("monotone in the statistic for a fixed calibration") {
  const DataMatrix A = sample_matrix({DistFamily::gaussian}, 40, 10, 1);
  const DataMatrix B = duplicated_columns(40, 10);
  const TestReport ra = independence_test(A, 0.05, CalibrationMethod::intermediate, low_regime(A));
  const TestReport rb = independence_test(B, 0.05, CalibrationMethod::intermediate, low_regime(B));
  CHECK(ra.critical_value == rb.critical_value);
  if (ra.decision == Decision::reject) CHECK(rb.decision == Decision::reject);
  CHECK(rb.statistic > ra.statistic);
}

TEST_CASE("banding-assumption warning from a population correlation matrix") {
  const DataMatrix X = sample_matrix({DistFamily::gaussian}, 50, 10, 44);
  const int p = X.p();

  std::vector<double> eye(static_cast<std::size_t>(p) * p, 0.0);
  for (int i = 0; i < p; ++i) eye[static_cast<std::size_t>(i) * p + i] = 1.0;
  const TestReport clean = m_dependence_test(X, 2, 0.05, CalibrationMethod::intermediate,
                                             low_regime(X), PairCount::squared_pairs, {}, &eye);
  REQUIRE(clean.band_assumption.has_value());
  CHECK(clean.band_assumption->gamma_fraction == 0.0);
  CHECK_FALSE(clean.band_assumption->warning);

  // MA(3)-style population: every variable has a neighbor with |r| = 2/3
  std::vector<double> ma(static_cast<std::size_t>(p) * p, 0.0);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      const int d = std::abs(i - j);
      ma[static_cast<std::size_t>(i) * p + j] = d < 3 ? (3.0 - d) / 3.0 : 0.0;
    }
  }
  const TestReport warned = m_dependence_test(X, 2, 0.05, CalibrationMethod::intermediate,
                                              low_regime(X), PairCount::squared_pairs, {}, &ma);
  REQUIRE(warned.band_assumption.has_value());
  CHECK(warned.band_assumption->gamma_fraction == 1.0);
  CHECK(warned.band_assumption->warning);

  const TestReport none = m_dependence_test(X, 2, 0.05, CalibrationMethod::intermediate,
                                            low_regime(X));
  CHECK_FALSE(none.band_assumption.has_value());
}

TEST_CASE("mip k_max closed form against brute force") {
  CHECK(mip_k_max(0.1) == 5);
  CHECK(mip_k_max(1.0) == 0);
  CHECK(mip_k_max(1.7) == 0);
  CHECK(mip_k_max(0.0) == (1LL << 53));

  std::mt19937_64 gen(88);
  std::uniform_real_distribution<double> ld(1e-7, 2.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const double L = ld(gen);
    long long brute = 0;
    for (long long k = 1; k <= 1000000; ++k) {
      if ((2.0 * k - 1.0) * L < 1.0) {
        brute = k;
      } else {
        break;
      }
    }
    CAPTURE(L);
    CHECK(mip_k_max(L) == brute);
  }
}

TEST_CASE("mip certificate") {
  // identical columns with exactly representable norms: L_tilde == 1
  const DataMatrix dup(2, 2, {2.0, 2.0, 0.0, 0.0});
  const MipCertificate c1 = mip_certificate(dup, 0.0);
  CHECK(c1.coherence == 1.0);
  CHECK(c1.k_max == 0);
  CHECK_FALSE(c1.satisfied.has_value());

  const MipCertificate c2 = mip_certificate(dup, 0.0, 1);
  REQUIRE(c2.satisfied.has_value());
  CHECK_FALSE(*c2.satisfied);
  CHECK_THROWS_AS(mip_certificate(dup, 0.0, 0), std::invalid_argument);

  // rule of thumb: n = 10^4, log p ~ 4 -> floor(50.circa / 4) = 12
  const DataMatrix big = sample_matrix({DistFamily::gaussian}, 10000, 55, 12);
  const MipCertificate c3 = mip_certificate(big, 0.0);
  const long long expect =
      static_cast<long long>(std::floor(std::sqrt(10000.0 / std::log(55.0)) / 4.0));
  CHECK(c3.k_rule_of_thumb == expect);
  CHECK(expect == 12);
  CHECK(c3.satisfied == std::nullopt);

  // orthogonal columns: L_tilde = 0, every sparsity certified
  const DataMatrix ortho(2, 2, {1.0, 1.0, -1.0, 1.0});
  const MipCertificate c4 = mip_certificate(ortho, 0.0, 1000);
  CHECK(c4.coherence == 0.0);
  CHECK(c4.k_max == (1LL << 53));
  CHECK(*c4.satisfied);
}
