#include <doctest.h>

#include <sstream>

#include "cohere/io.hpp"
#include "cohere/matgen.hpp"

using namespace cohere;

TEST_CASE("CSV round trip is bitwise exact") {
  const DataMatrix X = sample_matrix({DistFamily::gaussian}, 13, 7, 42);
  std::stringstream buf;
  io::write_matrix_csv(buf, X);
  const DataMatrix Y = io::read_matrix_csv(buf, "buf");
  CHECK(Y.n() == X.n());
  CHECK(Y.p() == X.p());
  CHECK(Y.entries() == X.entries());
}

TEST_CASE("CSV header and malformed rows") {
  std::stringstream ok("a,b\n1,2\n3,4\n5,6\n");
  const DataMatrix X = io::read_matrix_csv(ok, "ok");
  CHECK(X.n() == 3);
  CHECK(X.p() == 2);
  CHECK(X(2, 1) == 6.0);

  std::stringstream bad("1,2\n3,oops\n");
  CHECK_THROWS_WITH_AS(io::read_matrix_csv(bad, "bad"),
                       doctest::Contains("bad:2"), std::invalid_argument);

  std::stringstream ragged("1,2\n3,4,5\n");
  CHECK_THROWS_AS(io::read_matrix_csv(ragged, "ragged"), std::invalid_argument);

  std::stringstream small("1,2\n");
  CHECK_THROWS_AS(io::read_matrix_csv(small, "small"), std::invalid_argument);

  std::stringstream nonfinite("1,2\ninf,4\n");
  CHECK_THROWS_AS(io::read_matrix_csv(nonfinite, "nonfinite"), std::invalid_argument);
}

TEST_CASE("binary round trip and sniffing") {
  const DataMatrix X = sample_matrix({DistFamily::centered_exponential}, 9, 5, 8);
  std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
  io::write_matrix_binary(buf, X);
  const DataMatrix Y = io::read_matrix_binary(buf, "buf");
  CHECK(Y.entries() == X.entries());

  std::stringstream junk("JUNKxxxxxxxxxxxxxxxx");
  CHECK_THROWS_AS(io::read_matrix_binary(junk, "junk"), std::invalid_argument);

  std::stringstream trunc(std::ios::in | std::ios::out | std::ios::binary);
  io::write_matrix_binary(trunc, X);
  std::string payload = trunc.str();
  payload.resize(payload.size() - 8);
  std::stringstream cut(payload, std::ios::in | std::ios::binary);
  CHECK_THROWS_AS(io::read_matrix_binary(cut, "cut"), std::invalid_argument);
}

TEST_CASE("report JSON carries the contract keys") {
  const DataMatrix X = sample_matrix({DistFamily::gaussian}, 50, 12, 4);
  const RegimeParams regime{50, 12, AlphaRegime::low, 0.0};
  const TestReport r = independence_test(X, 0.05, CalibrationMethod::intermediate, regime);
  const nlohmann::json j = io::to_json(r);
  for (const char* key : {"statistic_kind", "statistic", "n", "p", "m", "level", "method",
                          "critical_value", "p_value", "decision"}) {
    CAPTURE(key);
    CHECK(j.contains(key));
  }
  CHECK(j["m"] == 1);
  CHECK(j["decision"].is_string());
  // doubles survive a serialization round trip exactly
  const nlohmann::json back = nlohmann::json::parse(j.dump());
  CHECK(back["statistic"].get<double>() == r.statistic);
  CHECK(back["p_value"].get<double>() == r.p_value);

  const CoherenceResult c = coherence(X);
  const nlohmann::json jc = io::to_json(c);
  CHECK(jc["kind"] == "L_n");
  CHECK(jc["pair"].size() == 2);
  CHECK(jc["pair"][0].get<int>() == c.i);

  const MipCertificate cert = mip_certificate(X, 0.0, 2);
  const nlohmann::json jm = io::to_json(cert);
  CHECK(jm.contains("coherence"));
  CHECK(jm.contains("k_max"));
  CHECK(jm.contains("k_rule_of_thumb"));
  CHECK(jm.contains("satisfied"));
}

TEST_CASE("samples CSV format") {
  std::stringstream buf;
  io::write_samples_csv(buf, {0.5, 1.25});
  CHECK(buf.str() == "replication,value\n0,0.5\n1,1.25\n");
}

TEST_CASE("square CSV dump") {
  std::stringstream buf;
  io::write_square_csv(buf, {1.0, 0.25, 0.25, 1.0}, 2);
  CHECK(buf.str() == "1,0.25\n0.25,1\n");
}
