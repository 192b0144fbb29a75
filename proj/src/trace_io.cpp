#include "twtt/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "twtt/units.hpp"

namespace twtt {

ParseError::ParseError(const std::string& source, std::size_t line,
                       const std::string& what)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + what
                                  : source + ": " + what),
      line_(line) {}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return in;
}

void finish(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::int64_t ps(double seconds) { return seconds_to_ps(seconds); }

}  // namespace

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::require_column(const std::string& name) const {
  if (auto c = column(name)) return *c;
  throw ParseError(source, 1, "missing column '" + name + "'");
}

bool CsvTable::empty_cell(std::size_t row, std::size_t col) const {
  return rows.at(row).at(col).empty();
}

std::int64_t CsvTable::integer(std::size_t row, std::size_t col) const {
  const std::string& cell = rows.at(row).at(col);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError(source, row + 2,
                     "column '" + header[col] + "': expected an integer, got '" +
                         cell + "'");
  }
  return v;
}

double CsvTable::real(std::size_t row, std::size_t col) const {
  const std::string& cell = rows.at(row).at(col);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (cell.empty() || used != cell.size()) {
    throw ParseError(source, row + 2,
                     "column '" + header[col] + "': expected a number, got '" +
                         cell + "'");
  }
  return v;
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.empty()) throw ParseError(source, 0, "empty file (no header)");
  if (text.back() != '\n') {
    throw ParseError(source, 0, "truncated file (last line has no newline)");
  }

  CsvTable table;
  table.source = source;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      table.header = split(line);
      continue;
    }
    if (line.empty()) throw ParseError(source, line_no, "blank line");
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(table.header.size()) +
                           " fields, got " + std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  auto in = open_in(path);
  return read_csv(in, path);
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
  out << kTraceHeader << '\n';
  for (const auto& r : records) {
    out << r.epoch_index << ',' << ps(r.time_s) << ',' << ps(r.theta_true) << ','
        << ps(r.theta_m) << ',' << ps(r.u_theta) << ',' << ps(r.offset_f) << ','
        << ps(r.i_attack) << ',' << format_real(r.gamma_best) << ','
        << format_real(r.gamma_e) << ',' << ps(r.attack_true_delay) << ','
        << (r.attack_detected ? 1 : 0) << ',' << (r.measurement_missing ? 1 : 0)
        << '\n';
  }
}

void write_trace(const std::vector<TraceRecord>& records, const std::string& path) {
  auto out = open_out(path);
  write_trace(out, records);
  finish(out, path);
}

std::vector<TraceRecord> read_trace(std::istream& in, const std::string& source) {
  const CsvTable t = read_csv(in, source);
  if (split(kTraceHeader) != t.header) {
    throw ParseError(source, 1, std::string("unexpected header; expected ") +
                                    kTraceHeader);
  }
  auto flag = [&](std::size_t row, std::size_t col) {
    const auto v = t.integer(row, col);
    if (v != 0 && v != 1) {
      throw ParseError(source, row + 2,
                       "column '" + t.header[col] + "': expected 0 or 1");
    }
    return v == 1;
  };
  auto sec = [&](std::size_t row, std::size_t col) {
    return ps_to_seconds(t.integer(row, col));
  };

  std::vector<TraceRecord> records;
  records.reserve(t.rows.size());
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    TraceRecord r;
    r.epoch_index = t.integer(row, 0);
    if (r.epoch_index != static_cast<std::int64_t>(row)) {
      throw ParseError(source, row + 2,
                       "epoch_index " + std::to_string(r.epoch_index) +
                           " out of sequence (expected " + std::to_string(row) +
                           ")");
    }
    r.time_s = sec(row, 1);
    r.theta_true = sec(row, 2);
    r.theta_m = sec(row, 3);
    r.u_theta = sec(row, 4);
    r.offset_f = sec(row, 5);
    r.i_attack = sec(row, 6);
    r.gamma_best = t.real(row, 7);
    r.gamma_e = t.real(row, 8);
    r.attack_true_delay = sec(row, 9);
    r.attack_detected = flag(row, 10);
    r.measurement_missing = flag(row, 11);
    records.push_back(r);
  }
  return records;
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  auto in = open_in(path);
  return read_trace(in, path);
}

TraceRecord quantize(const TraceRecord& r) {
  auto q = [](double s) { return ps_to_seconds(seconds_to_ps(s)); };
  TraceRecord out = r;
  out.time_s = q(r.time_s);
  out.theta_true = q(r.theta_true);
  out.theta_m = q(r.theta_m);
  out.u_theta = q(r.u_theta);
  out.offset_f = q(r.offset_f);
  out.i_attack = q(r.i_attack);
  out.attack_true_delay = q(r.attack_true_delay);
  return out;
}

std::vector<MeasurementRow> read_measurements(const CsvTable& t) {
  const auto epoch_col = t.column("epoch_index");
  const auto theta_col = t.column("theta_m");
  const auto a_col = t.column("delta_t_a");
  const auto b_col = t.column("delta_t_b");
  if (!theta_col && !(a_col && b_col)) {
    throw ParseError(t.source, 1,
                     "need a theta_m column or both delta_t_a and delta_t_b");
  }
  std::vector<MeasurementRow> rows;
  rows.reserve(t.rows.size());
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    MeasurementRow m;
    m.epoch_index = epoch_col ? t.integer(row, *epoch_col)
                              : static_cast<std::int64_t>(row);
    if (!rows.empty() && m.epoch_index <= rows.back().epoch_index) {
      throw ParseError(t.source, row + 2, "epoch_index not increasing");
    }
    if (theta_col) {
      if (!t.empty_cell(row, *theta_col)) {
        m.theta_m = ps_to_seconds(t.integer(row, *theta_col));
      }
    } else if (!t.empty_cell(row, *a_col) && !t.empty_cell(row, *b_col)) {
      m.theta_m = measured_offset(ps_to_seconds(t.integer(row, *a_col)),
                                  ps_to_seconds(t.integer(row, *b_col)));
    }
    rows.push_back(m);
  }
  return rows;
}

void write_decisions(std::ostream& out, const std::vector<DecisionRow>& rows) {
  out << "epoch_index,theta_m,u_theta,offset_f,i_attack,gamma_m,gamma_e,"
         "gamma_best,attack_detected,measurement_missing\n";
  for (const auto& r : rows) {
    const auto& d = r.decision;
    out << r.epoch_index << ',';
    if (r.theta_m) out << ps(*r.theta_m);
    out << ',' << ps(d.u_theta) << ',' << ps(d.offset_f) << ',' << ps(d.i_attack)
        << ',';
    if (d.gamma_m) out << format_real(*d.gamma_m);
    out << ',' << format_real(d.gamma_e) << ',' << format_real(d.gamma_best) << ','
        << (d.attack_detected ? 1 : 0) << ',' << (d.measurement_missing ? 1 : 0)
        << '\n';
  }
}

void write_curve(std::ostream& out, const StabilityCurve& curve) {
  out << "tau_s,value_s\n";
  for (const auto& p : curve.points) {
    out << format_real(p.tau) << ',' << format_real(p.value) << '\n';
  }
}

void write_ground_truth(std::ostream& out,
                        const std::vector<GroundTruthEntry>& entries) {
  out << "epoch,delay_ps,direction\n";
  for (const auto& e : entries) {
    out << e.epoch_index << ',' << ps(e.delay) << ',' << to_string(e.direction)
        << '\n';
  }
}

std::vector<GroundTruthEntry> read_ground_truth(const CsvTable& t) {
  const auto epoch = t.require_column("epoch");
  const auto delay = t.require_column("delay_ps");
  const auto dir = t.require_column("direction");
  std::vector<GroundTruthEntry> entries;
  for (std::size_t row = 0; row < t.rows.size(); ++row) {
    GroundTruthEntry e;
    e.epoch_index = t.integer(row, epoch);
    e.delay = ps_to_seconds(t.integer(row, delay));
    try {
      e.direction = parse_direction(t.rows[row][dir]);
    } catch (const std::invalid_argument& ex) {
      throw ParseError(t.source, row + 2, ex.what());
    }
    entries.push_back(e);
  }
  return entries;
}

}  // namespace twtt
