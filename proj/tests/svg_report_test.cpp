#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "muxstat/common.hpp"
#include "muxstat/distributions.hpp"
#include "muxstat/fitting.hpp"
#include "muxstat/series.hpp"
#include "muxstat/svg_report.hpp"

using namespace muxstat;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

FitResult fake_fit(const DistributionSpec& spec, double bic) {
  FitResult r;
  r.spec = spec;
  r.log_likelihood = -bic / 2.0;
  r.bic = bic;
  r.n = 100;
  r.param_count = param_count(spec.family);
  r.converged = true;
  return r;
}

ReportBundle sample_bundle(std::size_t overlay_count) {
  const Eigen::ArrayXd x = sample_n(normal_spec(2000.0, 300.0), 77, 500);
  ReportBundle bundle;
  bundle.histogram = build_histogram(x, std::nullopt);
  bundle.title = "synthetic demo";
  if (overlay_count > 0) {
    const FitRanking ranking = rank_catalog(x, "demo");
    for (std::size_t i = 0; i < overlay_count && i < ranking.entries.size(); ++i) {
      bundle.overlays.emplace_back(ranking.entries[i].spec, ranking.entries[i]);
    }
  }
  return bundle;
}

}  // namespace

TEST_CASE("report draws one polyline per overlay") {
  const ReportBundle bundle = sample_bundle(3);
  REQUIRE(bundle.overlays.size() == 3);
  const std::string svg = render_report(bundle, 960, 600);
  CHECK(count_occurrences(svg, "<polyline") == 3);
  CHECK(count_occurrences(svg, "legend-entry") == 3);
  CHECK(svg.find("Kbps") != std::string::npos);
  CHECK(svg.find("width=\"960\"") != std::string::npos);
  CHECK(svg.find("height=\"600\"") != std::string::npos);
}

TEST_CASE("report without overlays has no polylines") {
  const ReportBundle bundle = sample_bundle(0);
  const std::string svg = render_report(bundle, 640, 480);
  CHECK(count_occurrences(svg, "<polyline") == 0);
  CHECK(count_occurrences(svg, "legend-entry") == 0);
  CHECK(svg.find("<rect") != std::string::npos);
}

TEST_CASE("each curve is sampled densely") {
  const ReportBundle bundle = sample_bundle(1);
  const std::string svg = render_report(bundle, 960, 600);
  const std::size_t start = svg.find("points=\"");
  REQUIRE(start != std::string::npos);
  const std::size_t end = svg.find('"', start + 8);
  const std::string points = svg.substr(start + 8, end - start - 8);
  CHECK(count_occurrences(points, " ") + 1 >= 200);
}

TEST_CASE("legend lists overlays by ascending score") {
  ReportBundle bundle = sample_bundle(0);
  bundle.overlays.emplace_back(normal_spec(2000.0, 300.0),
                               fake_fit(normal_spec(2000.0, 300.0), 900.0));
  bundle.overlays.emplace_back(logistic_spec(2000.0, 170.0),
                               fake_fit(logistic_spec(2000.0, 170.0), 500.0));
  bundle.overlays.emplace_back(extreme_value_spec(2150.0, 260.0),
                               fake_fit(extreme_value_spec(2150.0, 260.0), 700.0));
  const std::string svg = render_report(bundle, 960, 600);
  const std::size_t p_logistic = svg.find("logistic");
  const std::size_t p_ev = svg.find("extremevalue");
  const std::size_t p_normal = svg.find("normal");
  REQUIRE(p_logistic != std::string::npos);
  REQUIRE(p_ev != std::string::npos);
  REQUIRE(p_normal != std::string::npos);
  CHECK(p_logistic < p_ev);
  CHECK(p_ev < p_normal);
  CHECK(svg.find("BIC 500.00") != std::string::npos);
}

TEST_CASE("discrete overlays render without error") {
  Eigen::ArrayXd counts(12);
  counts << 40, 42, 38, 45, 41, 39, 44, 40, 43, 42, 38, 46;
  ReportBundle bundle;
  bundle.histogram = build_histogram(counts, 4);
  bundle.title = "arrivals";
  bundle.overlays.emplace_back(poisson_spec(41.5), fake_fit(poisson_spec(41.5), 80.0));
  const std::string svg = render_report(bundle, 800, 500);
  CHECK(count_occurrences(svg, "<polyline") == 1);
}

TEST_CASE("titles are escaped") {
  ReportBundle bundle = sample_bundle(0);
  bundle.title = "mux <3 & friends";
  const std::string svg = render_report(bundle, 640, 480);
  CHECK(svg.find("mux &lt;3 &amp; friends") != std::string::npos);
  CHECK(svg.find("mux <3") == std::string::npos);
}

TEST_CASE("rejects unusable dimensions and histograms") {
  const ReportBundle bundle = sample_bundle(1);
  CHECK_THROWS_AS(render_report(bundle, 99, 600), Error);
  CHECK_THROWS_AS(render_report(bundle, 960, 99), Error);

  ReportBundle empty;
  empty.title = "empty";
  CHECK_THROWS_AS(render_report(empty, 960, 600), Error);
}
