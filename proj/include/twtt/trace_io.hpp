#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twtt/channel.hpp"
#include "twtt/detector.hpp"
#include "twtt/harness.hpp"
#include "twtt/metrics.hpp"

namespace twtt {

// Malformed CSV input. line() is 1-based; 0 when the problem is file-level.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Trace CSV. Every time-valued column (time_s included) is written as integer
// picoseconds; gamma columns as round-trip decimal; flags as 0/1.
inline constexpr const char* kTraceHeader =
    "epoch_index,time_s,theta_true,theta_m,u_theta,offset_f,i_attack,"
    "gamma_best,gamma_e,attack_true_delay,attack_detected,measurement_missing";

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records);
void write_trace(const std::vector<TraceRecord>& records, const std::string& path);

std::vector<TraceRecord> read_trace(std::istream& in,
                                    const std::string& source = "<stream>");
std::vector<TraceRecord> read_trace(const std::string& path);

// The record as it reads back from a trace file.
TraceRecord quantize(const TraceRecord& r);

// Header-addressed CSV table. Rejects ragged rows and files that do not end
// with a newline (truncated writes).
struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const;
  std::size_t require_column(const std::string& name) const;
  // Row r lives on file line r + 2.
  std::int64_t integer(std::size_t row, std::size_t col) const;
  double real(std::size_t row, std::size_t col) const;
  bool empty_cell(std::size_t row, std::size_t col) const;
};

CsvTable read_csv(std::istream& in, const std::string& source);
CsvTable read_csv(const std::string& path);

// Offline measurements: epoch_index plus either theta_m, or delta_t_a and
// delta_t_b, all in integer picoseconds. Empty cells mark missing epochs.
struct MeasurementRow {
  std::int64_t epoch_index = 0;
  std::optional<double> theta_m;
};

std::vector<MeasurementRow> read_measurements(const CsvTable& table);

struct DecisionRow {
  std::int64_t epoch_index = 0;
  std::optional<double> theta_m;
  CorrectionDecision decision;
};

void write_decisions(std::ostream& out, const std::vector<DecisionRow>& rows);

// Two columns, tau_s and value_s, in seconds.
void write_curve(std::ostream& out, const StabilityCurve& curve);

// Adversary ground truth: epoch,delay_ps,direction.
struct GroundTruthEntry {
  std::int64_t epoch_index = 0;
  double delay = 0.0;
  Direction direction = Direction::kBToA;

  bool operator==(const GroundTruthEntry&) const = default;
};

void write_ground_truth(std::ostream& out,
                        const std::vector<GroundTruthEntry>& entries);
std::vector<GroundTruthEntry> read_ground_truth(const CsvTable& table);

std::string format_real(double v);

}  // namespace twtt
