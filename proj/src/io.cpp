#include "cohere/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cohere::io {

static_assert(std::endian::native == std::endian::little,
              "binary matrix format assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'C', 'O', 'H', 'M'};
constexpr std::uint32_t kVersion = 1;

[[noreturn]] void parse_fail(const std::string& name, std::size_t line, std::size_t column,
                             const std::string& what) {
  throw std::invalid_argument(name + ":" + std::to_string(line) + ":" + std::to_string(column) +
                              ": " + what);
}

// One CSV line into doubles; returns false if any field is non-numeric.
bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t next = line.find(',', pos);
    if (next == std::string::npos) next = line.size();
    std::string field = line.substr(pos, next - pos);
    // trim blanks and a stray carriage return
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.pop_back();
    std::size_t lead = 0;
    while (lead < field.size() && (field[lead] == ' ' || field[lead] == '\t')) ++lead;
    field.erase(0, lead);
    if (field.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') return false;
    out.push_back(v);
    if (next == line.size()) break;
    pos = next + 1;
  }
  return !out.empty();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MatrixFormat parse_format(const std::string& text) {
  if (text == "csv") return MatrixFormat::csv;
  if (text == "bin" || text == "binary") return MatrixFormat::binary;
  if (text == "auto") return MatrixFormat::autodetect;
  throw std::invalid_argument("unknown matrix format '" + text + "' (csv, bin, auto)");
}

DataMatrix read_matrix_csv(std::istream& in, const std::string& name) {
  std::string line;
  std::vector<double> row;
  std::vector<double> entries;
  std::size_t p = 0;
  std::size_t lineno = 0;
  std::size_t rows = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (!parse_row(line, row)) {
      if (first_data) {
        first_data = false;  // header row
        continue;
      }
      parse_fail(name, lineno, 1, "malformed CSV row (non-numeric field)");
    }
    first_data = false;
    if (p == 0) {
      p = row.size();
    } else if (row.size() != p) {
      parse_fail(name, lineno, row.size(), "row has " + std::to_string(row.size()) +
                                               " fields, expected " + std::to_string(p));
    }
    entries.insert(entries.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows < 2 || p < 2) {
    throw std::invalid_argument(name + ": matrix must have at least 2 rows and 2 columns");
  }
  return DataMatrix(static_cast<int>(rows), static_cast<int>(p), std::move(entries));
}

DataMatrix read_matrix_binary(std::istream& in, const std::string& name) {
  char magic[4];
  std::uint32_t version = 0, n = 0, p = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&p), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::invalid_argument(name + ": not a COHM binary matrix");
  }
  if (version != kVersion) {
    throw std::invalid_argument(name + ": unsupported COHM version " + std::to_string(version));
  }
  if (n < 2 || p < 2 || n > (1u << 30) || p > (1u << 30)) {
    throw std::invalid_argument(name + ": bad matrix dimensions in header");
  }
  std::vector<double> entries(static_cast<std::size_t>(n) * p);
  in.read(reinterpret_cast<char*>(entries.data()),
          static_cast<std::streamsize>(entries.size() * sizeof(double)));
  if (!in) throw std::invalid_argument(name + ": truncated COHM payload");
  return DataMatrix(static_cast<int>(n), static_cast<int>(p), std::move(entries));
}

DataMatrix read_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  if (format == MatrixFormat::autodetect) {
    char magic[4] = {};
    in.read(magic, 4);
    in.clear();
    in.seekg(0);
    format = std::memcmp(magic, kMagic, 4) == 0 ? MatrixFormat::binary : MatrixFormat::csv;
  }
  return format == MatrixFormat::binary ? read_matrix_binary(in, path) : read_matrix_csv(in, path);
}

void write_matrix_csv(std::ostream& out, const DataMatrix& X) {
  for (int r = 0; r < X.n(); ++r) {
    for (int c = 0; c < X.p(); ++c) {
      if (c) out << ',';
      out << fmt17(X(r, c));
    }
    out << '\n';
  }
}

void write_matrix_binary(std::ostream& out, const DataMatrix& X) {
  const std::uint32_t n = static_cast<std::uint32_t>(X.n());
  const std::uint32_t p = static_cast<std::uint32_t>(X.p());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&p), 4);
  out.write(reinterpret_cast<const char*>(X.entries().data()),
            static_cast<std::streamsize>(X.entries().size() * sizeof(double)));
}

void write_matrix(const std::string& path, const DataMatrix& X, MatrixFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  if (format == MatrixFormat::binary) {
    write_matrix_binary(out, X);
  } else {
    write_matrix_csv(out, X);
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_square_csv(std::ostream& out, const std::vector<double>& M, int p) {
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (j) out << ',';
      out << fmt17(M[static_cast<std::size_t>(i) * p + j]);
    }
    out << '\n';
  }
}

void write_samples_csv(std::ostream& out, const std::vector<double>& samples) {
  out << "replication,value\n";
  for (std::size_t r = 0; r < samples.size(); ++r) {
    out << r << ',' << fmt17(samples[r]) << '\n';
  }
}

nlohmann::json to_json(const CoherenceResult& r) {
  return {{"kind", stat_kind_name(r.kind)},
          {"value", r.value},
          {"pair", {r.i, r.j}},
          {"mask_gap", r.mask_gap}};
}

nlohmann::json to_json(const TestReport& r) {
  nlohmann::json j{{"statistic_kind", stat_kind_name(r.statistic_kind)},
                   {"statistic", r.statistic},
                   {"n", r.n},
                   {"p", r.p},
                   {"m", r.m},
                   {"level", r.level},
                   {"method", method_name(r.method)},
                   {"critical_value", r.critical_value},
                   {"p_value", r.p_value},
                   {"decision", decision_name(r.decision)},
                   {"regime", {{"alpha_regime", alpha_regime_name(r.regime.regime)},
                               {"kappa", r.regime.kappa}}},
                   {"pair_count_mode",
                    r.pair_mode == PairCount::squared_pairs ? "squared" : "exact"}};
  if (r.band_assumption) {
    j["gamma_delta"] = r.band_assumption->delta;
    j["gamma_fraction"] = r.band_assumption->gamma_fraction;
    j["gamma_warning"] = r.band_assumption->warning;
  }
  return j;
}

nlohmann::json to_json(const MipCertificate& c) {
  nlohmann::json j{{"coherence", c.coherence},
                   {"k_max", c.k_max},
                   {"k_rule_of_thumb", c.k_rule_of_thumb},
                   {"n", c.n},
                   {"p", c.p}};
  if (c.satisfied) j["satisfied"] = *c.satisfied;
  return j;
}

nlohmann::json to_json(const EmpiricalSummary& s, const SimulationPlan& plan) {
  nlohmann::json lln = nlohmann::json::object();
  for (const auto& [eps, frac] : s.lln_fraction) {
    lln[fmt17(eps)] = frac;
  }
  nlohmann::json j{{"statistic", plan_stat_name(plan.statistic)},
                   {"distribution", family_name(plan.spec.family)},
                   {"n", plan.n},
                   {"p", plan.p},
                   {"replications", plan.replications},
                   {"master_seed", plan.master_seed},
                   {"ks_vs_gumbel", s.ks_vs_gumbel},
                   {"ks_vs_intermediate", s.ks_vs_intermediate},
                   {"lln_fraction", lln},
                   {"mean", s.mean},
                   {"median", s.median}};
  if (plan.m) j["m"] = *plan.m;
  return j;
}

}  // namespace cohere::io
