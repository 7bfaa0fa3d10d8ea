#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pballs {

inline constexpr const char* kToolName = "pballs";
inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 0;
  std::string out_path;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  int precision = 15;  // significant digits, [6, 17]
  int threads = 1;
  std::vector<std::pair<std::string, std::string>> flags;  // echo of parsed flags

  void validate() const;
};

using Cell = std::variant<double, long long, std::uint64_t, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Self-describing result record. The timestamp is pinned to the epoch so
/// that identical (flags, seed) invocations are byte-identical; wall-clock
/// time is a stderr diagnostic, never part of the payload.
struct ResultEnvelope {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::string timestamp = "1970-01-01T00:00:00Z";
  RunConfig config;
  ResultTable payload;
};

/// Decimal literal with the given number of significant digits.
std::string format_number(double value, int precision);

/// Payload table as CSV: header row, comma separators, LF line endings.
std::string to_csv(const ResultEnvelope& envelope);

/// Full envelope as a single JSON object.
std::string to_json(const ResultEnvelope& envelope);

/// Renders per config.format.
std::string render(const ResultEnvelope& envelope);

}  // namespace pballs
