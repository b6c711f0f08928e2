#include "muxstat/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "muxstat/common.hpp"

namespace muxstat {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || cell.empty()) {
    throw Error("parse", "row " + std::to_string(row) + " column " + std::to_string(col) +
                             ": not a number: \"" + cell + "\"");
  }
  return value;
}

// Type-7 quantile (linear interpolation between order statistics).
double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - std::floor(h);
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

}  // namespace

void validate(const BitrateSeries& series) {
  if (series.channel_id.empty()) throw Error("domain", "channel_id must be non-empty");
  if (!(series.sample_period_ms > 0.0)) throw Error("domain", "sample_period_ms must be > 0");
  if (series.samples.size() < 2) {
    throw Error("size", "series \"" + series.channel_id + "\" needs at least 2 samples");
  }
  for (Eigen::Index i = 0; i < series.samples.size(); ++i) {
    const double v = series.samples[i];
    if (!std::isfinite(v) || v <= 0.0) {
      throw Error("domain", "series \"" + series.channel_id + "\" sample " + std::to_string(i) +
                                " must be positive and finite");
    }
  }
}

void validate(const ChannelMatrix& matrix) {
  if (matrix.channels.empty()) throw Error("domain", "matrix has no channels");
  std::set<std::string> ids;
  const Eigen::Index n = matrix.channels.front().samples.size();
  const double period = matrix.channels.front().sample_period_ms;
  for (const BitrateSeries& s : matrix.channels) {
    validate(s);
    if (s.samples.size() != n) throw Error("domain", "channel lengths differ");
    if (s.sample_period_ms != period) throw Error("domain", "sample periods differ");
    if (!ids.insert(s.channel_id).second) {
      throw Error("domain", "duplicate channel id \"" + s.channel_id + "\"");
    }
  }
}

ChannelMatrix load_csv(std::istream& source, double sample_period_ms) {
  if (!(sample_period_ms > 0.0)) throw Error("domain", "sample_period_ms must be > 0");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(source, line)) lines.push_back(line);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw Error("format", "empty input");

  std::vector<std::string> labels = split_cells(lines[0]);
  const bool has_index = !labels.empty() && labels[0] == "t";
  const std::size_t skip = has_index ? 1 : 0;
  if (labels.size() <= skip) throw Error("format", "header has no channel labels");
  std::set<std::string> seen;
  for (std::size_t c = skip; c < labels.size(); ++c) {
    if (labels[c].empty()) {
      throw Error("format", "header column " + std::to_string(c + 1) + " is empty");
    }
    if (!seen.insert(labels[c]).second) {
      throw Error("format", "duplicate channel label \"" + labels[c] + "\"");
    }
  }

  const std::size_t rows = lines.size() - 1;
  if (rows < 2) throw Error("size", "need at least 2 data rows, got " + std::to_string(rows));

  const std::size_t n_channels = labels.size() - skip;
  std::vector<Eigen::ArrayXd> columns(n_channels, Eigen::ArrayXd(static_cast<Eigen::Index>(rows)));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t file_row = r + 2;  // 1-based, header is row 1
    const std::vector<std::string> cells = split_cells(lines[r + 1]);
    if (cells.size() != labels.size()) {
      throw Error("format", "row " + std::to_string(file_row) + " has " +
                                std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(labels.size()));
    }
    for (std::size_t c = skip; c < cells.size(); ++c) {
      const double v = parse_cell(cells[c], file_row, c + 1);
      if (!std::isfinite(v) || v <= 0.0) {
        throw Error("domain", "row " + std::to_string(file_row) + " column " +
                                  std::to_string(c + 1) + ": value must be > 0");
      }
      columns[c - skip][static_cast<Eigen::Index>(r)] = v;
    }
  }

  ChannelMatrix matrix;
  matrix.channels.reserve(n_channels);
  for (std::size_t c = 0; c < n_channels; ++c) {
    BitrateSeries s;
    s.channel_id = labels[c + skip];
    s.samples = std::move(columns[c]);
    s.sample_period_ms = sample_period_ms;
    matrix.channels.push_back(std::move(s));
  }
  validate(matrix);
  return matrix;
}

ChannelMatrix synchronize(const std::vector<BitrateSeries>& series) {
  if (series.empty()) throw Error("domain", "no series to synchronize");
  const double period = series.front().sample_period_ms;
  Eigen::Index min_len = series.front().samples.size();
  for (const BitrateSeries& s : series) {
    validate(s);
    if (s.sample_period_ms != period) throw Error("domain", "sample periods differ");
    min_len = std::min(min_len, s.samples.size());
  }
  ChannelMatrix matrix;
  matrix.channels.reserve(series.size());
  for (const BitrateSeries& s : series) {
    BitrateSeries cut = s;
    cut.samples = s.samples.head(min_len);
    matrix.channels.push_back(std::move(cut));
  }
  validate(matrix);
  return matrix;
}

BitrateSeries aggregate_sum(const ChannelMatrix& matrix) {
  validate(matrix);
  BitrateSeries out;
  out.channel_id = "aggregate";
  out.sample_period_ms = matrix.channels.front().sample_period_ms;
  out.samples = Eigen::ArrayXd::Zero(matrix.channels.front().samples.size());
  for (const BitrateSeries& s : matrix.channels) out.samples += s.samples;
  return out;
}

Eigen::ArrayXd pool_samples(const ChannelMatrix& matrix) {
  validate(matrix);
  const Eigen::Index n = matrix.channels.front().samples.size();
  Eigen::ArrayXd pooled(static_cast<Eigen::Index>(matrix.channels.size()) * n);
  Eigen::Index at = 0;
  for (const BitrateSeries& s : matrix.channels) {
    pooled.segment(at, n) = s.samples;
    at += n;
  }
  return pooled;
}

HistogramView build_histogram(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                              std::optional<int> bins) {
  const std::size_t n = static_cast<std::size_t>(samples.size());
  if (n < 2) throw Error("size", "need at least 2 samples, got " + std::to_string(n));
  if (bins && *bins < 1) throw Error("domain", "bin count must be >= 1");
  std::vector<double> sorted(samples.data(), samples.data() + samples.size());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw Error("domain", "samples must be finite");
  }
  std::sort(sorted.begin(), sorted.end());
  double lo = sorted.front();
  double hi = sorted.back();

  std::size_t m;
  if (lo == hi) {
    const double width = std::max(1.0, std::fabs(lo) * 1e-6);
    lo -= 0.5 * width;
    hi += 0.5 * width;
    m = bins ? static_cast<std::size_t>(*bins) : 1;
  } else if (bins) {
    m = static_cast<std::size_t>(*bins);
  } else {
    const double iqr = sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
    if (iqr > 0.0) {
      const double w = 2.0 * iqr * std::pow(static_cast<double>(n), -1.0 / 3.0);
      m = static_cast<std::size_t>(std::ceil((hi - lo) / w));
    } else {
      m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    }
    m = std::max<std::size_t>(m, 1);
  }

  HistogramView view;
  view.n = n;
  view.bin_edges.resize(m + 1);
  const double span = hi - lo;
  for (std::size_t i = 0; i <= m; ++i) {
    view.bin_edges[i] = lo + span * static_cast<double>(i) / static_cast<double>(m);
  }
  view.bin_edges[m] = hi;

  std::vector<std::size_t> counts(m, 0);
  for (double v : sorted) {
    double idx = std::floor((v - lo) / span * static_cast<double>(m));
    idx = std::clamp(idx, 0.0, static_cast<double>(m) - 1.0);
    ++counts[static_cast<std::size_t>(idx)];
  }
  view.densities.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double width = view.bin_edges[i + 1] - view.bin_edges[i];
    view.densities[i] = static_cast<double>(counts[i]) / (static_cast<double>(n) * width);
  }
  return view;
}

std::string series_to_csv(const BitrateSeries& series) {
  validate(series);
  std::string out = "t_ms,kbps\n";
  for (Eigen::Index i = 0; i < series.samples.size(); ++i) {
    out += format_double(static_cast<double>(i) * series.sample_period_ms);
    out += ',';
    out += format_double(series.samples[i]);
    out += '\n';
  }
  return out;
}

std::string histogram_to_csv(const HistogramView& view) {
  std::string out = "bin_lo,bin_hi,density\n";
  for (std::size_t i = 0; i < view.densities.size(); ++i) {
    out += format_double(view.bin_edges[i]);
    out += ',';
    out += format_double(view.bin_edges[i + 1]);
    out += ',';
    out += format_double(view.densities[i]);
    out += '\n';
  }
  return out;
}

}  // namespace muxstat
