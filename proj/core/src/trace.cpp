#include "zodfo/trace.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace zodfo {

namespace {

constexpr const char* kHeader = "epoch,f_value,subopt,queries,elapsed_ms";

double parse_double(const std::string& field, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("trace: bad float on line " + std::to_string(line));
  }
  return v;
}

std::uint64_t parse_u64(const std::string& field, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("trace: bad integer on line " + std::to_string(line));
  }
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string format_double(double v) {
  // Shortest representation that round-trips; never exceeds 17 significant
  // digits and is independent of the global locale.
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: buffer too small");
  return std::string(buf, ptr);
}

void write_trace_csv(const std::vector<TraceRecord>& records, std::ostream& out) {
  out << kHeader << '\n';
  for (const TraceRecord& r : records) {
    out << r.epoch << ',' << format_double(r.f_value) << ',';
    if (r.subopt) out << format_double(*r.subopt);
    out << ',' << r.queries << ',' << format_double(r.elapsed_ms) << '\n';
  }
}

std::vector<TraceRecord> read_trace_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: empty stream");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) throw std::runtime_error("trace: unexpected header");
  std::vector<TraceRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      throw std::runtime_error("trace: expected 5 fields on line " +
                               std::to_string(lineno));
    }
    TraceRecord r;
    r.epoch = static_cast<int>(parse_u64(fields[0], lineno));
    r.f_value = parse_double(fields[1], lineno);
    if (!fields[2].empty()) r.subopt = parse_double(fields[2], lineno);
    r.queries = parse_u64(fields[3], lineno);
    r.elapsed_ms = parse_double(fields[4], lineno);
    records.push_back(r);
  }
  return records;
}

}  // namespace zodfo
