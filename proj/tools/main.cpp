#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohere/coherence.hpp"
#include "cohere/hypotest.hpp"
#include "cohere/io.hpp"
#include "cohere/laws.hpp"
#include "cohere/matgen.hpp"
#include "cohere/montecarlo.hpp"
#include "cohere/parallel.hpp"

namespace {

using namespace cohere;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitReject = 10;

int env_default_workers() {
  if (const char* env = std::getenv("COHERENCE_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return default_workers();
}

// Shared input options: a matrix file, or generation parameters.
struct InputOpts {
  std::string input;
  std::string format = "auto";
  std::string dist;
  int n = 0;
  int p = 0;
  int gen_m = 0;  // 0: i.i.d., else MA(gen_m)
  std::uint64_t seed = 0;
  double loc = 0.0;
  double scale = 1.0;

  void attach(CLI::App* cmd) {
    auto* in = cmd->add_option("--input,-i", input, "matrix file (CSV or COHM binary)");
    cmd->add_option("--format", format, "input format: csv, bin, auto")->capture_default_str();
    auto* d = cmd->add_option("--dist", dist,
                              "generate input instead: gaussian, exp, weibull:a, two_point:q, "
                              "t:nu, rademacher");
    cmd->add_option("--n", n, "rows (observations) for generated input");
    cmd->add_option("--p", p, "columns (variables) for generated input");
    cmd->add_option("--seed", seed, "generator seed");
    cmd->add_option("--gen-m", gen_m, "generate MA(m) dependent rows");
    cmd->add_option("--loc", loc, "generated distribution location")->capture_default_str();
    cmd->add_option("--scale", scale, "generated distribution scale")->capture_default_str();
    in->excludes(d);
    d->excludes(in);
  }

  DataMatrix load(int workers) const {
    if (!input.empty()) {
      return io::read_matrix(input, io::parse_format(format));
    }
    if (dist.empty()) {
      throw std::invalid_argument("either --input or --dist/--n/--p/--seed is required");
    }
    DistributionSpec spec = parse_distribution(dist);
    spec.location = loc;
    spec.scale = scale;
    return gen_m > 0 ? sample_m_dependent(spec, n, p, gen_m, seed, workers)
                     : sample_matrix(spec, n, p, seed, workers);
  }
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
  out << text << '\n';
}

RegimeParams make_regime(int n, int p, const std::string& regime_name, double kappa) {
  RegimeParams regime;
  regime.n = n;
  regime.p = p;
  regime.kappa = kappa;
  if (regime_name == "low") {
    regime.regime = AlphaRegime::low;
  } else if (regime_name == "mid") {
    regime.regime = AlphaRegime::mid;
  } else {
    throw std::invalid_argument("regime must be 'low' or 'mid'");
  }
  regime.validate();
  return regime;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> ys;
  if (text.find(':') != std::string::npos) {
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    ss >> start >> c1 >> stop >> c2 >> step;
    if (!ss || c1 != ':' || c2 != ':' || !(step > 0.0) || stop < start) {
      throw std::invalid_argument("grid must be start:stop:step with step > 0");
    }
    for (double y = start; y <= stop + 1e-12 * std::abs(step); y += step) ys.push_back(y);
  } else {
    std::istringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
      if (field.empty()) continue;
      ys.push_back(std::stod(field));
    }
  }
  if (ys.empty()) throw std::invalid_argument("empty grid");
  return ys;
}

int run(int argc, char** argv) {
  CLI::App app{"coherence statistics of high-dimensional data matrices"};
  app.require_subcommand(1);
  int workers = env_default_workers();
  app.add_option("--workers", workers, "worker thread cap")->capture_default_str();

  // --- coherence ---
  auto* c_cmd = app.add_subcommand("coherence", "compute a coherence statistic");
  InputOpts c_in;
  c_in.attach(c_cmd);
  std::string c_kind = "Ln";
  int c_m = 1;
  double c_mu = 0.0, c_sigma = 1.0;
  int c_tile = 256;
  std::string c_out, c_dump_corr;
  int c_corr_cap = 2000;
  c_cmd->add_option("--kind", c_kind, "Ln, Ltilde, L0, Lnm")->capture_default_str();
  c_cmd->add_option("--m", c_m, "mask gap for --kind Lnm")->capture_default_str();
  c_cmd->add_option("--mu", c_mu, "known mean for Ltilde/L0")->capture_default_str();
  c_cmd->add_option("--sigma", c_sigma, "known sd for L0")->capture_default_str();
  c_cmd->add_option("--tile", c_tile, "column tile width")->capture_default_str();
  c_cmd->add_option("--dump-corr", c_dump_corr, "write the full correlation matrix (CSV)");
  c_cmd->add_option("--corr-cap", c_corr_cap, "largest p for --dump-corr")->capture_default_str();
  c_cmd->add_option("-o,--output", c_out, "output path (default stdout)");

  // --- test ---
  auto* t_cmd = app.add_subcommand("test", "independence / m-dependence test");
  InputOpts t_in;
  t_in.attach(t_cmd);
  double t_level = 0.05;
  std::string t_method = "intermediate";
  int t_m = 0;
  std::string t_regime = "low";
  double t_kappa = 0.0;
  std::string t_pairs = "squared";
  int t_tile = 256;
  std::string t_out, t_pop_corr;
  double t_delta = 0.5;
  t_cmd->add_option("--level", t_level, "significance level in (0,1)")->capture_default_str();
  t_cmd->add_option("--method", t_method, "intermediate or extreme")->capture_default_str();
  t_cmd->add_option("--m", t_m, "test m-dependence at this gap (0: independence)")
      ->capture_default_str();
  t_cmd->add_option("--regime", t_regime, "low (0<a<=1) or mid (1<a<=4/3)")->capture_default_str();
  t_cmd->add_option("--kappa", t_kappa, "entry skewness (mid regime)")->capture_default_str();
  t_cmd->add_option("--pair-count", t_pairs, "m-test intermediate count: squared or exact")
      ->capture_default_str();
  t_cmd->add_option("--tile", t_tile, "column tile width")->capture_default_str();
  t_cmd->add_option("--pop-corr", t_pop_corr,
                    "population correlation matrix (p x p CSV) for the banding-assumption check");
  t_cmd->add_option("--delta", t_delta, "threshold 1 - delta for the assumption check")
      ->capture_default_str();
  t_cmd->add_option("-o,--output", t_out, "output path (default stdout)");

  // --- simulate ---
  auto* s_cmd = app.add_subcommand("simulate", "Monte Carlo replication of a statistic");
  std::string s_dist = "gaussian";
  int s_n = 0, s_p = 0, s_m = 0, s_R = 1, s_tile = 256;
  std::uint64_t s_seed = 0;
  std::string s_stat = "Ln", s_regime = "low", s_kappa = "auto", s_pairs = "";
  double s_loc = 0.0, s_scale = 1.0;
  std::vector<double> s_eps{0.1, 0.2, 0.5};
  std::string s_out, s_samples;
  s_cmd->add_option("--dist", s_dist, "entry distribution")->capture_default_str();
  s_cmd->add_option("--n", s_n, "rows")->required();
  s_cmd->add_option("--p", s_p, "columns")->required();
  s_cmd->add_option("--m", s_m, "MA order (enables Lnm/Wnm)")->capture_default_str();
  s_cmd->add_option("--R", s_R, "replications")->required();
  s_cmd->add_option("--seed", s_seed, "master seed")->capture_default_str();
  s_cmd->add_option("--stat", s_stat, "Ln, Ltilde, L0, Lnm, Wn, Wnm")->capture_default_str();
  s_cmd->add_option("--regime", s_regime, "low or mid")->capture_default_str();
  s_cmd->add_option("--kappa", s_kappa, "entry skewness or 'auto'")->capture_default_str();
  s_cmd->add_option("--pair-count", s_pairs, "intermediate count: squared or exact");
  s_cmd->add_option("--loc", s_loc, "distribution location")->capture_default_str();
  s_cmd->add_option("--scale", s_scale, "distribution scale")->capture_default_str();
  s_cmd->add_option("--eps", s_eps, "band half-widths for the law-of-large-numbers check")
      ->capture_default_str();
  s_cmd->add_option("--tile", s_tile, "column tile width")->capture_default_str();
  s_cmd->add_option("--samples-out", s_samples, "write per-replication samples CSV");
  s_cmd->add_option("-o,--output", s_out, "output path (default stdout)");

  // --- mip ---
  auto* m_cmd = app.add_subcommand("mip", "mutual incoherence certificate");
  InputOpts m_in;
  m_in.attach(m_cmd);
  double m_mu = 0.0;
  long long m_k = 0;
  std::string m_out;
  m_cmd->add_option("--mu", m_mu, "known column mean")->capture_default_str();
  m_cmd->add_option("--k", m_k, "requested sparsity to certify");
  m_cmd->add_option("-o,--output", m_out, "output path (default stdout)");

  // --- dist-tables ---
  auto* d_cmd = app.add_subcommand("dist-tables", "reference distribution table (CSV)");
  int d_n = 0, d_p = 0;
  std::string d_regime = "low", d_grid, d_pairs = "exact", d_out;
  double d_kappa = 0.0;
  d_cmd->add_option("--n", d_n, "sample size")->required();
  d_cmd->add_option("--p", d_p, "dimension")->required();
  d_cmd->add_option("--regime", d_regime, "low or mid")->capture_default_str();
  d_cmd->add_option("--kappa", d_kappa, "entry skewness")->capture_default_str();
  d_cmd->add_option("--grid", d_grid, "y grid: start:stop:step or y1,y2,...")->required();
  d_cmd->add_option("--pair-count", d_pairs, "exact or squared")->capture_default_str();
  d_cmd->add_option("-o,--output", d_out, "output path (default stdout)");

  // --- generate ---
  auto* g_cmd = app.add_subcommand("generate", "write a sampled matrix to a file");
  for (CLI::App* sc : {c_cmd, t_cmd, s_cmd, m_cmd, d_cmd, g_cmd}) sc->fallthrough();
  std::string g_dist = "gaussian", g_format = "csv", g_out;
  int g_n = 0, g_p = 0, g_m = 0;
  std::uint64_t g_seed = 0;
  double g_loc = 0.0, g_scale = 1.0;
  g_cmd->add_option("--dist", g_dist, "entry distribution")->capture_default_str();
  g_cmd->add_option("--n", g_n, "rows")->required();
  g_cmd->add_option("--p", g_p, "columns")->required();
  g_cmd->add_option("--m", g_m, "MA order (0: i.i.d.)")->capture_default_str();
  g_cmd->add_option("--seed", g_seed, "seed")->capture_default_str();
  g_cmd->add_option("--loc", g_loc, "location")->capture_default_str();
  g_cmd->add_option("--scale", g_scale, "scale")->capture_default_str();
  g_cmd->add_option("--format", g_format, "csv or bin")->capture_default_str();
  g_cmd->add_option("-o,--output", g_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints message or help text
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (c_cmd->parsed()) {
    const DataMatrix X = c_in.load(workers);
    const KernelOptions opts{c_tile, workers};
    CoherenceResult res{};
    if (c_kind == "Ln") {
      res = coherence(X, opts);
    } else if (c_kind == "Lnm") {
      res = m_coherence(X, c_m, opts);
    } else if (c_kind == "Ltilde") {
      res = coherence_known_moments(X, c_mu, 1.0, StatKind::L_tilde, opts);
    } else if (c_kind == "L0") {
      res = coherence_known_moments(X, c_mu, c_sigma, StatKind::L_0, opts);
    } else {
      throw std::invalid_argument("unknown --kind '" + c_kind + "'");
    }
    nlohmann::json j = io::to_json(res);
    j["n"] = X.n();
    j["p"] = X.p();
    if (!c_dump_corr.empty()) {
      if (X.p() > c_corr_cap) {
        throw std::invalid_argument("p exceeds --corr-cap; refusing to materialize the matrix");
      }
      std::ofstream out(c_dump_corr);
      if (!out) throw std::invalid_argument("cannot open '" + c_dump_corr + "'");
      io::write_square_csv(out, correlation_matrix(X, opts), X.p());
    }
    emit(c_out, j.dump(2));
    return kExitOk;
  }

  if (t_cmd->parsed()) {
    const DataMatrix X = t_in.load(workers);
    const RegimeParams regime = make_regime(X.n(), X.p(), t_regime, t_kappa);
    CalibrationMethod method;
    if (t_method == "intermediate") {
      method = CalibrationMethod::intermediate;
    } else if (t_method == "extreme" || t_method == "extreme_limit") {
      method = CalibrationMethod::extreme_limit;
    } else {
      throw std::invalid_argument("method must be 'intermediate' or 'extreme'");
    }
    PairCount pairs;
    if (t_pairs == "squared") {
      pairs = PairCount::squared_pairs;
    } else if (t_pairs == "exact") {
      pairs = PairCount::exact_pairs;
    } else {
      throw std::invalid_argument("pair-count must be 'squared' or 'exact'");
    }
    const KernelOptions opts{t_tile, workers};
    std::vector<double> pop_corr;
    if (!t_pop_corr.empty()) {
      const DataMatrix R = io::read_matrix(t_pop_corr, io::MatrixFormat::csv);
      if (R.n() != X.p() || R.p() != X.p()) {
        throw std::invalid_argument("--pop-corr must be a p x p matrix matching the data");
      }
      pop_corr = R.entries();
    }
    const TestReport report =
        t_m > 0 ? m_dependence_test(X, t_m, t_level, method, regime, pairs, opts,
                                    pop_corr.empty() ? nullptr : &pop_corr, t_delta)
                : independence_test(X, t_level, method, regime, opts);
    emit(t_out, io::to_json(report).dump(2));
    return report.decision == Decision::reject ? kExitReject : kExitOk;
  }

  if (s_cmd->parsed()) {
    SimulationPlan plan;
    plan.spec = parse_distribution(s_dist);
    plan.spec.location = s_loc;
    plan.spec.scale = s_scale;
    plan.n = s_n;
    plan.p = s_p;
    if (s_m > 0) plan.m = s_m;
    plan.statistic = parse_plan_stat(s_stat);
    double kappa = 0.0;
    if (s_kappa == "auto") {
      try {
        kappa = standardized_moments(plan.spec).kappa;
      } catch (const std::invalid_argument&) {
        if (s_regime == "mid") {
          throw std::invalid_argument("kappa undefined for this distribution; pass --kappa");
        }
      }
    } else {
      kappa = std::stod(s_kappa);
    }
    plan.regime = make_regime(s_n, s_p, s_regime, kappa);
    plan.replications = s_R;
    plan.master_seed = s_seed;
    if (!s_pairs.empty()) {
      plan.pair_mode = s_pairs == "squared" ? PairCount::squared_pairs : PairCount::exact_pairs;
    }
    plan.lln_epsilons = s_eps;
    plan.workers = workers;
    plan.tile = s_tile;
    const EmpiricalSummary summary = run_replications(plan);
    if (!s_samples.empty()) {
      std::ofstream out(s_samples);
      if (!out) throw std::invalid_argument("cannot open '" + s_samples + "'");
      io::write_samples_csv(out, summary.samples);
    }
    emit(s_out, io::to_json(summary, plan).dump(2));
    return kExitOk;
  }

  if (m_cmd->parsed()) {
    const DataMatrix X = m_in.load(workers);
    std::optional<long long> k;
    if (m_cmd->count("--k")) k = m_k;
    const MipCertificate cert = mip_certificate(X, m_mu, k, KernelOptions{256, workers});
    emit(m_out, io::to_json(cert).dump(2));
    return kExitOk;
  }

  if (d_cmd->parsed()) {
    const RegimeParams regime = make_regime(d_n, d_p, d_regime, d_kappa);
    const PairCount pairs =
        d_pairs == "squared" ? PairCount::squared_pairs : PairCount::exact_pairs;
    const auto grid = parse_grid(d_grid);
    std::ostringstream table;
    table << "y,F_Y,intermediate\n";
    char buf[128];
    for (double y : grid) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", y, gumbel_cdf(y),
                    intermediate_cdf(y, regime, pairs));
      table << buf;
    }
    if (d_out.empty()) {
      std::cout << table.str();
    } else {
      std::ofstream out(d_out);
      if (!out) throw std::invalid_argument("cannot open '" + d_out + "'");
      out << table.str();
    }
    return kExitOk;
  }

  if (g_cmd->parsed()) {
    DistributionSpec spec = parse_distribution(g_dist);
    spec.location = g_loc;
    spec.scale = g_scale;
    const DataMatrix X = g_m > 0 ? sample_m_dependent(spec, g_n, g_p, g_m, g_seed, workers)
                                 : sample_matrix(spec, g_n, g_p, g_seed, workers);
    io::write_matrix(g_out, X, io::parse_format(g_format));
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const DegenerateColumnError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
