#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oschalf/extension.hpp"
#include "oschalf/extremal.hpp"
#include "oschalf/solvers.hpp"
#include "oschalf/variational.hpp"

namespace oschalf {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Writing an artifact failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "%.17g"; non-finite values become "nan", "inf" or "-inf".
std::string format_double(double value);

/// Two-space indented JSON in insertion order. Floats use 17 significant
/// digits and non-finite floats are written as null.
std::string dump_json(const Json& value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const CsvTable& table);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// JSON number, or null when not finite.
Json number(double value);

Json to_json(const Tolerances& tol);
Json to_json(const Nonlinearity& nl);
Json to_json(const SolveReport& report, bool include_coefficients = false);
Json to_json(const EnergyBreakdown& energy);
Json to_json(const PohozaevTerms& terms);
Json to_json(const PowerIdentity& identity);
Json to_json(const LpReport& report);
Json to_json(const DecayReport& report);
Json to_json(const ScanReport& report);
Json to_json(const FitReport& report);
Json to_json(const ProbeReport& report);

CsvTable scan_table(const ScanReport& report);
CsvTable fit_table(const FitReport& report);
CsvTable decay_table(const DecayReport& report);
/// u(r e_1) for r on a uniform grid from 0 to the trust radius.
CsvTable axis_profile_table(const SpectralSpace& space, const SpectralField& u, int points = 65);

}  // namespace oschalf
