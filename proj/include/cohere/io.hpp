#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cohere/hypotest.hpp"
#include "cohere/matrix.hpp"
#include "cohere/montecarlo.hpp"

namespace cohere::io {

// Matrix file formats: CSV (comma-separated, optional header row, '.'
// decimal point) and a raw binary with a 16-byte header
// ("COHM", u32 version, u32 n, u32 p) followed by n*p little-endian
// 64-bit floats, row-major.
enum class MatrixFormat { csv, binary, autodetect };

MatrixFormat parse_format(const std::string& text);

DataMatrix read_matrix(const std::string& path, MatrixFormat format = MatrixFormat::autodetect);
DataMatrix read_matrix_csv(std::istream& in, const std::string& name);
DataMatrix read_matrix_binary(std::istream& in, const std::string& name);

void write_matrix(const std::string& path, const DataMatrix& X, MatrixFormat format);
void write_matrix_csv(std::ostream& out, const DataMatrix& X);
void write_matrix_binary(std::ostream& out, const DataMatrix& X);

// Square matrix dump (e.g. the full correlation matrix), %.17g cells.
void write_square_csv(std::ostream& out, const std::vector<double>& M, int p);

// Samples CSV: "replication,value", one row per replication.
void write_samples_csv(std::ostream& out, const std::vector<double>& samples);

nlohmann::json to_json(const CoherenceResult& r);
nlohmann::json to_json(const TestReport& r);
nlohmann::json to_json(const MipCertificate& c);
nlohmann::json to_json(const EmpiricalSummary& s, const SimulationPlan& plan);

}  // namespace cohere::io
