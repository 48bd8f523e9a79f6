/**
 * @file run.hpp
 * @brief Executes a RunConfig and renders the result as CSV.
 *
 * CSV layout: one header line, then one row per sample; numbers use 12
 * significant digits with '.' as decimal separator and LF line endings, so
 * output is byte-for-byte reproducible.
 */
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fracdisc/config.hpp"

namespace fracdisc {

/// Column-major result table. The first column is an integer index (k or j).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
  const std::vector<double>& column(std::string_view name) const;
};

/// Dispatches to the module operation selected by cfg.mode.
Table execute(const RunConfig& cfg);

std::string format_number(double value);
std::string to_csv(const Table& table);

/// Checks the config's [expect] entries; returns one message per failure.
std::vector<std::string> check_expectations(const Table& table, const RunConfig& cfg);

/// Field accepted by --sweep: "T"/"sample_period" or "L"/"memory_length".
enum class SweepField { SamplePeriod, MemoryLength };

struct SweepSpec {
  SweepField field = SweepField::SamplePeriod;
  std::string field_label;          // as given, used in file names
  std::vector<std::string> tokens;  // values as given
  std::vector<double> values;
};

/// Parses "<field>=<v1,v2,...>". Throws std::invalid_argument.
SweepSpec parse_sweep(std::string_view text);

/// Copy of cfg with the swept field set to `value`.
RunConfig apply_sweep_value(const RunConfig& cfg, SweepField field, double value);

/// "dir/name.csv" -> "dir/name_<label><token>.csv".
std::string sweep_output_path(const std::string& base, const std::string& label,
                              const std::string& token);

struct SweepOutcome {
  std::string path;
  std::vector<std::string> failures;  // expectation failures
  std::string error;                  // non-empty if the run itself failed
};

/// Runs one config per sweep value on up to `threads` workers, each writing
/// its own CSV. Results are returned in sweep order.
std::vector<SweepOutcome> run_sweep(const RunConfig& cfg, const SweepSpec& sweep,
                                    const std::string& base_path,
                                    std::size_t threads);

/// Worker count from FRACDISC_THREADS, else hardware concurrency (min 1).
std::size_t sweep_threads_from_env();

/// Writes `contents` to `path`. Throws std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace fracdisc
