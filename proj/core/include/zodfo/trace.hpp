#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zodfo {

struct TraceRecord {
  int epoch = 0;
  double f_value = 0.0;
  // Suboptimality f - f*; empty when no reference optimum is known.
  std::optional<double> subopt;
  std::uint64_t queries = 0;
  double elapsed_ms = 0.0;
};

enum class RunStatus { ok, diverged };

/*! Per-run record every solver returns.
 *
 *  Records are contiguous from epoch 1 with strictly increasing cumulative
 *  queries.  With a fixed seed and config all fields except elapsed_ms are
 *  bit-identical across runs; elapsed_ms is measured wall time.
 */
struct RunTrace {
  std::string solver;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config_echo;
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::ok;
  std::string diagnostic;

  std::uint64_t total_queries() const {
    return records.empty() ? 0 : records.back().queries;
  }
};

/*! CSV serialization: header `epoch,f_value,subopt,queries,elapsed_ms`, one
 *  row per record.  Floats are rendered with up to 17 significant digits via
 *  a locale-independent shortest-round-trip encoding, so
 *  read_trace_records(write_trace_csv(t)) == t exactly.  A missing subopt is
 *  an empty field.
 */
void write_trace_csv(const std::vector<TraceRecord>& records, std::ostream& out);

std::vector<TraceRecord> read_trace_records(std::istream& in);

// Locale-independent double rendering used for every float in trace output.
std::string format_double(double v);

}  // namespace zodfo
