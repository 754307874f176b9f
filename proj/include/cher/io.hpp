#pragma once

// File formats: JSON for structured records, CSV for grids and time series.
// Every file carries the format tag and, when produced by a run, the hash of
// the run configuration.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cher/common.hpp"
#include "cher/dephasing.hpp"
#include "cher/mode_oracle.hpp"
#include "cher/nonclassicality.hpp"
#include "cher/quasi.hpp"
#include "cher/spin_boson.hpp"

namespace cher::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "cher-v1";
inline constexpr const char* kGeneratorOrder = "gellmann-v1";

/// Schema violation; `pointer` is the JSON-pointer-style location.
class SchemaError : public ValidationError {
 public:
  SchemaError(const std::string& pointer, const std::string& message);
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// Writes `content` to a temporary sibling file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

Json to_json(const ChiSeries& c, const std::string& config_hash = "");
ChiSeries chi_series_from_json(const Json& j);
void save_chi_series(const std::filesystem::path& path, const ChiSeries& c, const std::string& config_hash = "");
ChiSeries load_chi_series(const std::filesystem::path& path);

Json to_json(const QuasiDistribution& q, const std::string& config_hash = "");
QuasiDistribution quasi_from_json(const Json& j);
std::string to_csv(const QuasiDistribution& q, const std::string& config_hash = "");
QuasiDistribution quasi_from_csv(const std::string& text);
/// Dispatches on the extension (.json or .csv).
void save_quasi(const std::filesystem::path& path, const QuasiDistribution& q, const std::string& config_hash = "");
QuasiDistribution load_quasi(const std::filesystem::path& path);

Json to_json(const ModeConfig& cfg);
ModeConfig mode_config_from_json(const Json& j);
ModeConfig load_mode_config(const std::filesystem::path& path);

Json to_json(const NonclassicalityResult& r, const std::string& config_hash = "");
NonclassicalityResult result_from_json(const Json& j);

std::string to_csv(const DephasingFactors& f, const std::string& config_hash = "");
DephasingFactors factors_from_csv(const std::string& text);
DephasingFactors load_factors(const std::filesystem::path& path);

/// One row per time: t, then the n^2 x n^2 map entries row-major as re, im.
std::string to_csv(const DynamicalMapSeries& m, const std::string& config_hash = "");

/// Two columns omega, J(omega) with strictly increasing omega; '#' lines and
/// a non-numeric first row are skipped.
SpectralDensity load_spectral_table(const std::filesystem::path& path);

/// Generic numeric table with a header row.
std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns,
                      const std::string& kind, const std::string& config_hash = "");

}  // namespace cher::io
