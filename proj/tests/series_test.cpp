#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>

#include "muxstat/common.hpp"
#include "muxstat/rng.hpp"
#include "muxstat/series.hpp"

using namespace muxstat;

namespace {

ChannelMatrix load(const std::string& text) {
  std::istringstream in(text);
  return load_csv(in);
}

struct Caught {
  std::string category;
  std::string detail;
};

Caught load_error(const std::string& text) {
  try {
    load(text);
  } catch (const Error& e) {
    return {e.category(), e.detail()};
  }
  return {};
}

}  // namespace

TEST_CASE("csv load with two channels") {
  const ChannelMatrix m = load("bbc1,itv\n100.5,200\n101,201.25\n102,202\n");
  REQUIRE(m.channels.size() == 2);
  CHECK(m.channels[0].channel_id == "bbc1");
  CHECK(m.channels[1].channel_id == "itv");
  REQUIRE(m.channels[0].samples.size() == 3);
  CHECK(m.channels[0].samples[0] == 100.5);
  CHECK(m.channels[1].samples[1] == 201.25);
  CHECK(m.channels[0].sample_period_ms == kDefaultSamplePeriodMs);
}

TEST_CASE("leading time column is ignored") {
  const ChannelMatrix m = load("t,bbc1\n0,100\n489.2,101\n");
  REQUIRE(m.channels.size() == 1);
  CHECK(m.channels[0].channel_id == "bbc1");
  CHECK(m.channels[0].samples[1] == 101.0);
}

TEST_CASE("csv errors name the offending cell") {
  Caught c = load_error("a,b\n1,2\n3\n");
  CHECK(c.category == "format");
  CHECK(c.detail.find("row 3") != std::string::npos);

  c = load_error("a,b\n1,2\n3,oops\n");
  CHECK(c.category == "parse");
  CHECK(c.detail.find("row 3") != std::string::npos);
  CHECK(c.detail.find("column 2") != std::string::npos);

  c = load_error("a,b\n1,2\n3,-4\n");
  CHECK(c.category == "domain");

  c = load_error("a,b\n1,0\n3,4\n");
  CHECK(c.category == "domain");

  c = load_error("a,b\n1,2\n");
  CHECK(c.category == "size");

  c = load_error("a,a\n1,2\n3,4\n");
  CHECK(c.category == "format");
}

TEST_CASE("synchronize truncates to the shortest channel") {
  std::vector<BitrateSeries> series;
  Eigen::ArrayXd longer(5);
  longer << 1, 2, 3, 4, 5;
  Eigen::ArrayXd shorter(3);
  shorter << 10, 20, 30;
  series.push_back({"a", std::nullopt, longer, kDefaultSamplePeriodMs});
  series.push_back({"b", std::nullopt, shorter, kDefaultSamplePeriodMs});
  const ChannelMatrix s = synchronize(series);
  CHECK(s.channels[0].samples.size() == 3);
  CHECK(s.channels[1].samples.size() == 3);
  CHECK(s.channels[0].samples[2] == 3.0);

  const ChannelMatrix twice = synchronize(s.channels);
  CHECK(twice.channels[0].samples.size() == 3);

  CHECK_THROWS_AS(synchronize(std::vector<BitrateSeries>{}), Error);

  std::vector<BitrateSeries> mismatched = series;
  mismatched[1].sample_period_ms = 1000.0;
  CHECK_THROWS_AS(synchronize(mismatched), Error);
}

TEST_CASE("aggregate adds aligned samples exactly") {
  const ChannelMatrix m = load("a,b\n1,3\n2,4\n");
  const BitrateSeries total = aggregate_sum(m);
  CHECK(total.channel_id == "aggregate");
  REQUIRE(total.samples.size() == 2);
  CHECK(total.samples[0] == 4.0);
  CHECK(total.samples[1] == 6.0);

  const ChannelMatrix single = load("solo\n7\n9\n");
  const BitrateSeries same = aggregate_sum(single);
  CHECK(same.samples[0] == 7.0);
  CHECK(same.samples[1] == 9.0);
}

TEST_CASE("aggregate mean equals the sum of channel means") {
  std::ostringstream csv;
  csv << "a,b,c\n";
  SplitRng rng(99);
  double mean_sum = 0.0;
  Eigen::ArrayXd cols[3];
  for (int j = 0; j < 3; ++j) cols[j] = Eigen::ArrayXd(400);
  for (int i = 0; i < 400; ++i) {
    for (int j = 0; j < 3; ++j) {
      cols[j][i] = 500.0 + 4000.0 * rng.next_uniform();
      csv << (j ? "," : "") << format_double(cols[j][i]);
    }
    csv << "\n";
  }
  for (int j = 0; j < 3; ++j) mean_sum += cols[j].mean();
  const ChannelMatrix m = load(csv.str());
  const BitrateSeries total = aggregate_sum(m);
  CHECK(std::fabs(total.samples.mean() - mean_sum) <= 1e-9 * mean_sum);
}

TEST_CASE("pooling concatenates channels in declaration order") {
  const ChannelMatrix m = load("a,b\n1,3\n2,4\n");
  const Eigen::ArrayXd pooled = pool_samples(m);
  REQUIRE(pooled.size() == 4);
  CHECK(pooled[0] == 1.0);
  CHECK(pooled[1] == 2.0);
  CHECK(pooled[2] == 3.0);
  CHECK(pooled[3] == 4.0);
}

TEST_CASE("histogram densities integrate to one") {
  Eigen::ArrayXd x(9);
  x << 120, 340, 560, 890, 1200, 1500, 2300, 3100, 4400;
  const HistogramView h = build_histogram(x, std::nullopt);
  REQUIRE(h.bin_edges.size() == h.densities.size() + 1);
  double mass = 0.0;
  for (Eigen::Index i = 0; i < h.densities.size(); ++i) {
    mass += h.densities[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
  }
  CHECK(std::fabs(mass - 1.0) <= 1e-9);
  CHECK(h.n == 9);
}

TEST_CASE("automatic bin count follows the interquartile width") {
  Eigen::ArrayXd x(8);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  const HistogramView h = build_histogram(x, std::nullopt);
  CHECK(h.densities.size() == 2);
  CHECK(h.bin_edges[0] == 1.0);
  CHECK(h.bin_edges[h.bin_edges.size() - 1] == 8.0);
}

TEST_CASE("zero interquartile range falls back to a square-root rule") {
  Eigen::ArrayXd x(8);
  x << 1, 5, 5, 5, 5, 5, 5, 9;
  const HistogramView h = build_histogram(x, std::nullopt);
  CHECK(h.densities.size() == 3);
}

TEST_CASE("identical samples produce one tight bin") {
  const Eigen::ArrayXd x = Eigen::ArrayXd::Constant(12, 250.0);
  const HistogramView h = build_histogram(x, std::nullopt);
  REQUIRE(h.densities.size() == 1);
  CHECK(h.bin_edges[0] < 250.0);
  CHECK(h.bin_edges[1] > 250.0);
  double mass = h.densities[0] * (h.bin_edges[1] - h.bin_edges[0]);
  CHECK(std::fabs(mass - 1.0) <= 1e-9);
}

TEST_CASE("explicit bin count spans the sample range") {
  Eigen::ArrayXd x(5);
  x << 10, 20, 30, 40, 50;
  const HistogramView h = build_histogram(x, 4);
  REQUIRE(h.densities.size() == 4);
  CHECK(h.bin_edges[0] == 10.0);
  CHECK(h.bin_edges[4] == 50.0);
  CHECK_THROWS_AS(build_histogram(x, 0), Error);
  CHECK_THROWS_AS(build_histogram(Eigen::ArrayXd(0), std::nullopt), Error);
}

TEST_CASE("csv writers emit stable headers") {
  BitrateSeries s{"bbc1", std::nullopt, Eigen::ArrayXd(2), 489.2};
  s.samples << 100.0, 101.5;
  const std::string text = series_to_csv(s);
  CHECK(text.rfind("t_ms,kbps\n", 0) == 0);
  CHECK(text.find("101.5") != std::string::npos);

  Eigen::ArrayXd x(4);
  x << 1, 2, 3, 4;
  const HistogramView h = build_histogram(x, 2);
  const std::string htext = histogram_to_csv(h);
  CHECK(htext.rfind("bin_lo,bin_hi,density\n", 0) == 0);
}
