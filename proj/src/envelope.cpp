#include "pballs/envelope.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pballs {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';  // doubled quote
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& cell, int precision, bool json) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return json ? "null" : "nan";
    return format_number(*d, precision);
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&cell)) return std::to_string(*u);
  const auto& s = std::get<std::string>(cell);
  return json ? "\"" + json_escape(s) + "\"" : csv_escape(s);
}

}  // namespace

std::string to_string(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

void RunConfig::validate() const {
  if (precision < 6 || precision > 17)
    throw std::invalid_argument("precision must lie in [6, 17]");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

std::string format_number(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, value);
  return buf;
}

std::string to_csv(const ResultEnvelope& envelope) {
  std::string out;
  for (std::size_t i = 0; i < envelope.payload.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(envelope.payload.columns[i]);
  }
  out += '\n';
  for (const auto& row : envelope.payload.rows) {
    if (row.size() != envelope.payload.columns.size())
      throw std::logic_error("payload row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i], envelope.config.precision, /*json=*/false);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultEnvelope& envelope) {
  const auto& cfg = envelope.config;
  std::string out = "{\n";
  out += "  \"tool\": \"" + json_escape(envelope.tool) + "\",\n";
  out += "  \"version\": \"" + json_escape(envelope.version) + "\",\n";
  out += "  \"timestamp\": \"" + json_escape(envelope.timestamp) + "\",\n";
  out += "  \"config\": {\n";
  out += "    \"subcommand\": \"" + json_escape(cfg.subcommand) + "\",\n";
  // worker-thread count is execution detail, not part of the result
  out += "    \"seed\": " + std::to_string(cfg.seed) + ",\n";
  out += "    \"format\": \"" + to_string(cfg.format) + "\",\n";
  out += "    \"precision\": " + std::to_string(cfg.precision) + ",\n";
  out += "    \"out\": \"" + json_escape(cfg.out_path) + "\",\n";
  out += "    \"flags\": {";
  for (std::size_t i = 0; i < cfg.flags.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + json_escape(cfg.flags[i].first) + "\": \"" +
           json_escape(cfg.flags[i].second) + "\"";
  }
  out += "}\n  },\n";
  out += "  \"payload\": {\n    \"columns\": [";
  for (std::size_t i = 0; i < envelope.payload.columns.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + json_escape(envelope.payload.columns[i]) + "\"";
  }
  out += "],\n    \"rows\": [";
  for (std::size_t r = 0; r < envelope.payload.rows.size(); ++r) {
    const auto& row = envelope.payload.rows[r];
    if (row.size() != envelope.payload.columns.size())
      throw std::logic_error("payload row width does not match the header");
    out += r ? ",\n      [" : "\n      [";
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ", ";
      out += cell_text(row[i], cfg.precision, /*json=*/true);
    }
    out += "]";
  }
  out += envelope.payload.rows.empty() ? "]\n  }\n}\n" : "\n    ]\n  }\n}\n";
  return out;
}

std::string render(const ResultEnvelope& envelope) {
  envelope.config.validate();
  return envelope.config.format == OutputFormat::csv ? to_csv(envelope)
                                                     : to_json(envelope);
}

}  // namespace pballs
