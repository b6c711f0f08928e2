#pragma once

#include <string>
#include <utility>
#include <vector>

#include "muxstat/distributions.hpp"
#include "muxstat/fitting.hpp"
#include "muxstat/series.hpp"

namespace muxstat {

struct ReportBundle {
  HistogramView histogram;
  std::vector<std::pair<DistributionSpec, FitResult>> overlays;
  std::string title;
};

// Histogram bars plus one density polyline per overlay (>= 200 sample
// points each); the legend lists families in ascending-BIC order. Axes are
// drawn with line elements so the polyline count equals the overlay count.
std::string render_report(const ReportBundle& bundle, int width_px, int height_px);

}  // namespace muxstat
