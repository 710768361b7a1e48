#pragma once

// CSV and JSON serialisation of results. Floats are written with 17
// significant digits so that reading a file back recovers every value bit for
// bit. CSV files start with "# key=value" metadata lines, then a header row.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "magrect/analysis.hpp"
#include "magrect/muopt.hpp"
#include "magrect/oscillator1d.hpp"

namespace magrect {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kJsonSchema = 1;

/// "%.17g"; NaN and infinities as "nan", "inf", "-inf".
[[nodiscard]] std::string format_double(double x);
[[nodiscard]] double parse_double(std::string_view text);

/// Ordered key/value metadata embedded in every output file.
using Metadata = nlohmann::ordered_json;

[[nodiscard]] Metadata base_metadata(std::string_view subcommand);

void write_figure1_csv(std::ostream& out, const std::vector<NuPoint>& rows, const Metadata& meta);
[[nodiscard]] std::vector<NuPoint> read_figure1_csv(std::istream& in);
[[nodiscard]] nlohmann::ordered_json figure1_json(const std::vector<NuPoint>& rows,
                                                  const Metadata& meta);

void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& rows, const Metadata& meta);
[[nodiscard]] std::vector<ScanRecord> read_scan_csv(std::istream& in);
[[nodiscard]] nlohmann::ordered_json scan_json(const std::vector<ScanRecord>& rows,
                                               const Metadata& meta);
[[nodiscard]] std::vector<ScanRecord> scan_from_json(const nlohmann::ordered_json& doc);

[[nodiscard]] nlohmann::ordered_json deriv_json(const DerivReport& report, const Metadata& meta);
[[nodiscard]] nlohmann::ordered_json mu_json(const MuResult& result, const Metadata& meta);

/// Reads metadata lines ("# key=value") from the top of a CSV stream.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> read_csv_metadata(std::istream& in);

}  // namespace magrect
