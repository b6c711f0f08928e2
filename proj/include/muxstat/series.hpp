#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace muxstat {

constexpr double kDefaultSamplePeriodMs = 489.2;

struct BitrateSeries {
  std::string channel_id;
  std::optional<std::string> category;
  Eigen::ArrayXd samples;  // Kbps
  double sample_period_ms = kDefaultSamplePeriodMs;
};

// All member series share length and sample period; channel ids unique.
struct ChannelMatrix {
  std::vector<BitrateSeries> channels;
};

struct HistogramView {
  std::vector<double> bin_edges;  // m + 1, strictly ascending
  std::vector<double> densities;  // m, in 1/Kbps, integrates to 1
  std::size_t n = 0;
};

void validate(const BitrateSeries& series);
void validate(const ChannelMatrix& matrix);

// Wide CSV: header row of channel labels (optional leading "t" index
// column, ignored), then one sample per channel per row.
ChannelMatrix load_csv(std::istream& source, double sample_period_ms = kDefaultSamplePeriodMs);

// Truncates every series to the shortest length, aligned by index.
ChannelMatrix synchronize(const std::vector<BitrateSeries>& series);

// Per-index sum across channels in fixed channel order (bit-stable).
BitrateSeries aggregate_sum(const ChannelMatrix& matrix);

// Concatenation of all channels' samples in channel order.
Eigen::ArrayXd pool_samples(const ChannelMatrix& matrix);

// bins empty -> Freedman-Diaconis width 2*IQR*n^(-1/3) (type-7 quartiles),
// falling back to ceil(sqrt(n)) equal bins when IQR is 0.
HistogramView build_histogram(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                              std::optional<int> bins = std::nullopt);

std::string series_to_csv(const BitrateSeries& series);
std::string histogram_to_csv(const HistogramView& view);

}  // namespace muxstat
