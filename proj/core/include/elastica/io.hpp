#pragma once

// Time-series CSV and PFIELD snapshot files.

#include <cstdio>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "elastica/functionals.hpp"
#include "elastica/grid.hpp"

namespace elastica {

struct TimeSeriesRecord {
  int step = 0;
  double time = 0.0;
  EnergyBreakdown energy;
  int components = 0;
  double length = 0.0;
  double max_radius = 0.0;
  /// NaN when not computed for this record; written as an empty cell.
  double T_tilde = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr const char* kTimeSeriesHeader =
    "step,time,B,L,T_abs,T_bar,M,total,components,length,max_radius,T_tilde";

std::string format_timeseries_row(const TimeSeriesRecord& r);
/// Throws std::runtime_error on a malformed row.
TimeSeriesRecord parse_timeseries_row(const std::string& line);

void write_timeseries(std::ostream& os, const std::vector<TimeSeriesRecord>& records);
void write_timeseries(const std::filesystem::path& path, const std::vector<TimeSeriesRecord>& records);
std::vector<TimeSeriesRecord> read_timeseries(std::istream& is);
std::vector<TimeSeriesRecord> read_timeseries(const std::filesystem::path& path);

/// Appends rows as they arrive; the header is written on open.
class TimeSeriesWriter {
 public:
  explicit TimeSeriesWriter(const std::filesystem::path& path);
  ~TimeSeriesWriter();
  TimeSeriesWriter(const TimeSeriesWriter&) = delete;
  TimeSeriesWriter& operator=(const TimeSeriesWriter&) = delete;

  void append(const TimeSeriesRecord& r);
  void flush();

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

struct Snapshot {
  ScalarField field;
  int step = 0;
  double time = 0.0;
};

/// Header line `PFIELD n extent step time`, then n*n values in row-major
/// order printed with 17 significant digits.
void write_snapshot(const ScalarField& u, const std::filesystem::path& path, int step = 0, double time = 0.0);
/// Throws std::runtime_error on a malformed header or a value count mismatch.
Snapshot read_snapshot(const std::filesystem::path& path);
Snapshot parse_snapshot(const std::string& text);

}  // namespace elastica
