#include "elastica/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace elastica {

namespace {

double parse_double(std::string_view s, std::string_view what) {
  // from_chars rejects a leading '+'.
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error(fmt::format("cannot parse {} from '{}'", what, s));
  }
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error(fmt::format("cannot parse {} from '{}'", what, s));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_timeseries_row(const TimeSeriesRecord& r) {
  const auto& e = r.energy;
  std::string row = fmt::format("{},{},{},{},{},{},{},{},{},{},{},",
                                r.step, r.time, e.B, e.Lval, e.T_abs, e.T_bar, e.M, e.total, r.components,
                                r.length, r.max_radius);
  if (!std::isnan(r.T_tilde)) row += fmt::format("{}", r.T_tilde);
  return row;
}

TimeSeriesRecord parse_timeseries_row(const std::string& line) {
  const auto cells = split(line, ',');
  if (cells.size() != 12) {
    throw std::runtime_error(fmt::format("time series row has {} cells, expected 12", cells.size()));
  }
  TimeSeriesRecord r;
  r.step = parse_int(cells[0], "step");
  r.time = parse_double(cells[1], "time");
  r.energy.B = parse_double(cells[2], "B");
  r.energy.Lval = parse_double(cells[3], "L");
  r.energy.T_abs = parse_double(cells[4], "T_abs");
  r.energy.T_bar = parse_double(cells[5], "T_bar");
  r.energy.M = parse_double(cells[6], "M");
  r.energy.total = parse_double(cells[7], "total");
  r.components = parse_int(cells[8], "components");
  r.length = parse_double(cells[9], "length");
  r.max_radius = parse_double(cells[10], "max_radius");
  if (!cells[11].empty()) r.T_tilde = parse_double(cells[11], "T_tilde");
  return r;
}

void write_timeseries(std::ostream& os, const std::vector<TimeSeriesRecord>& records) {
  os << kTimeSeriesHeader << '\n';
  for (const auto& r : records) os << format_timeseries_row(r) << '\n';
}

void write_timeseries(const std::filesystem::path& path, const std::vector<TimeSeriesRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_timeseries(out, records);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<TimeSeriesRecord> read_timeseries(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTimeSeriesHeader) {
    throw std::runtime_error("time series: missing or unexpected header");
  }
  std::vector<TimeSeriesRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    out.push_back(parse_timeseries_row(line));
  }
  return out;
}

std::vector<TimeSeriesRecord> read_timeseries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_timeseries(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

TimeSeriesWriter::TimeSeriesWriter(const std::filesystem::path& path) : path_(path) {
  file_ = std::fopen(path.string().c_str(), "w");
  if (!file_) throw std::runtime_error("cannot write " + path.string());
  fmt::print(file_, "{}\n", kTimeSeriesHeader);
}

TimeSeriesWriter::~TimeSeriesWriter() {
  if (file_) std::fclose(file_);
}

void TimeSeriesWriter::append(const TimeSeriesRecord& r) { fmt::print(file_, "{}\n", format_timeseries_row(r)); }

void TimeSeriesWriter::flush() {
  if (std::fflush(file_) != 0) throw std::runtime_error("write failed: " + path_.string());
}

void write_snapshot(const ScalarField& u, const std::filesystem::path& path, int step, double time) {
  const GridSpec& g = u.grid();
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "PFIELD {} {:.17g} {} {:.17g}\n", g.n, g.extent, step, time);
  const auto v = u.values();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      fmt::format_to(std::back_inserter(buf), "{:.17g}{}", v[g.index(i, j)], i + 1 < g.n ? ' ' : '\n');
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Snapshot parse_snapshot(const std::string& text) {
  const std::size_t eol = text.find('\n');
  if (eol == std::string::npos) throw std::runtime_error("snapshot: missing header line");
  std::istringstream header(text.substr(0, eol));
  std::string magic;
  std::string n_s, extent_s, step_s, time_s, extra;
  header >> magic >> n_s >> extent_s >> step_s >> time_s;
  if (magic != "PFIELD" || time_s.empty() || (header >> extra)) {
    throw std::runtime_error("snapshot: malformed header, expected 'PFIELD n extent step time'");
  }
  const int n = parse_int(n_s, "n");
  const double extent = parse_double(extent_s, "extent");
  auto domain = std::make_shared<const Domain>(build_grid(n, extent));

  std::vector<double> values;
  values.reserve(domain->grid().node_count());
  const char* p = text.data() + eol + 1;
  const char* end = text.data() + text.size();
  auto is_space = [](char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; };
  while (true) {
    while (p < end && is_space(*p)) ++p;
    if (p >= end) break;
    const char* q = p;
    while (q < end && !is_space(*q)) ++q;
    values.push_back(parse_double(std::string_view(p, q - p), "snapshot value"));
    p = q;
  }
  if (values.size() != domain->grid().node_count()) {
    throw std::runtime_error(fmt::format("snapshot: {} values, expected {}", values.size(),
                                         domain->grid().node_count()));
  }
  return Snapshot{ScalarField(std::move(domain), std::move(values)), parse_int(step_s, "step"),
                  parse_double(time_s, "time")};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  try {
    return parse_snapshot(read_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace elastica
