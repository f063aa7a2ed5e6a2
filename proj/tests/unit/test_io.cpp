#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "elastica/io.hpp"

namespace elastica {
namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("elastica_test_" + name);
}

TimeSeriesRecord sample_record(int step) {
  TimeSeriesRecord r;
  r.step = step;
  r.time = 1e-5 * step + 1.0 / 3.0;
  r.energy.B = 12.566370614359172;
  r.energy.Lval = 3.1415926535897931;
  r.energy.T_abs = 6.2831853;
  r.energy.T_bar = 6.28 + 1e-13;
  r.energy.M = 1.5e-7;
  r.energy.total = 99.125;
  r.components = 2;
  r.length = 3.14;
  r.max_radius = 0.5;
  return r;
}

TEST(TimeSeries, RowRoundTripIsExact) {
  TimeSeriesRecord r = sample_record(7);
  r.T_tilde = 18.8;
  const TimeSeriesRecord back = parse_timeseries_row(format_timeseries_row(r));
  EXPECT_EQ(back.step, 7);
  EXPECT_EQ(back.time, r.time);
  EXPECT_EQ(back.energy.B, r.energy.B);
  EXPECT_EQ(back.energy.T_bar, r.energy.T_bar);
  EXPECT_EQ(back.energy.M, r.energy.M);
  EXPECT_EQ(back.components, 2);
  EXPECT_EQ(back.T_tilde, 18.8);
}

TEST(TimeSeries, MissingImprovedWindingIsEmptyCell) {
  const std::string row = format_timeseries_row(sample_record(1));
  EXPECT_EQ(row.back(), ',');
  EXPECT_TRUE(std::isnan(parse_timeseries_row(row).T_tilde));
}

TEST(TimeSeries, StreamRoundTripWithHeader) {
  std::vector<TimeSeriesRecord> rs{sample_record(0), sample_record(10), sample_record(20)};
  std::stringstream ss;
  write_timeseries(ss, rs);
  std::string header;
  std::getline(std::stringstream(ss.str()), header);
  EXPECT_EQ(header, kTimeSeriesHeader);
  const auto back = read_timeseries(ss);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[2].step, 20);
  EXPECT_EQ(back[1].energy.total, 99.125);
}

TEST(TimeSeries, RejectsMalformedRows) {
  EXPECT_THROW(parse_timeseries_row("1,2,3"), std::runtime_error);
  EXPECT_THROW(parse_timeseries_row("a,0,0,0,0,0,0,0,0,0,0,"), std::runtime_error);
}

TEST(TimeSeries, WriterAppendsIncrementally) {
  const auto path = temp_path("series.csv");
  {
    TimeSeriesWriter w(path);
    w.append(sample_record(0));
    w.flush();
    EXPECT_EQ(read_timeseries(path).size(), 1u);
    w.append(sample_record(5));
  }
  EXPECT_EQ(read_timeseries(path).size(), 2u);
  std::filesystem::remove(path);
}

TEST(Snapshot, RoundTripIsBitExact) {
  auto d = Domain::create(17, 1.1);
  ScalarField u(d, -1.0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (d->mask().is_free(k)) u[k] = std::sin(0.1 * k) / 3.0;
  }
  const auto path = temp_path("field.pfield");
  write_snapshot(u, path, 42, 1.25e-3);
  const Snapshot s = read_snapshot(path);
  EXPECT_EQ(s.step, 42);
  EXPECT_EQ(s.time, 1.25e-3);
  EXPECT_EQ(s.field.grid(), d->grid());
  EXPECT_EQ(s.field.data(), u.data());
  std::filesystem::remove(path);
}

TEST(Snapshot, RejectsBadInput) {
  EXPECT_THROW(parse_snapshot("NOTAFIELD 4 1.1 0 0\n"), std::runtime_error);
  EXPECT_THROW(parse_snapshot("PFIELD 16 1.1 0 0\n1 2 3\n"), std::runtime_error);
  EXPECT_THROW(read_snapshot(temp_path("does_not_exist.pfield")), std::runtime_error);
}

}  // namespace
}  // namespace elastica
