#pragma once

// JSON interchange for assemblages and realisations, and machine-readable
// reports.
//
// Matrix: array of rows; each entry is [re, im] where each component is a
// JSON number or an exact rational string "p/q".

#include <string>
#include <vector>

#include "steercert/bell.hpp"
#include "steercert/certify.hpp"
#include "steercert/robustness.hpp"

namespace steercert {

enum class Encoding { Rational, Decimal };

// Throws ParseError with a line number or a field path.
Assemblage parse_assemblage_json(const std::string& text);
// Rational encoding writes every double as its exact dyadic value, so
// parsing the output gives back identical doubles.
std::string assemblage_to_json(const Assemblage& a, Encoding enc = Encoding::Rational);

struct RealizationDocument {
  QuantumRealization realization;
  std::vector<MeasurementSet> bob_measurements;  // may be empty
};
RealizationDocument parse_realization_json(const std::string& text);
std::string realization_to_json(const RealizationDocument& doc);

// Reports: JSON objects with a fixed field order and floats printed with 17
// significant digits.
std::string report_json(const ValidationReport& r);
std::string report_json(const LambdaReport& r);
std::string report_json(const CertificationReport& r);
std::string report_json(const LhsResult& r);
std::string report_json(const RobustnessResult& r);
std::string report_json(const HierarchyResult& r);
std::string report_json(const NpaResult& r);

std::string read_file(const std::string& path);  // throws IoError
void write_file(const std::string& path, const std::string& content);

}  // namespace steercert
