#include "muxstat/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "muxstat/common.hpp"

namespace muxstat {

namespace {

constexpr int kCurvePoints = 257;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
constexpr int kPaletteSize = 8;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string two_dp(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string four_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

double overlay_density(const DistributionSpec& spec, double x) {
  if (!is_continuous(spec.family)) return pdf(spec, std::floor(x));
  return pdf(spec, x);
}

}  // namespace

std::string render_report(const ReportBundle& bundle, int width_px, int height_px) {
  if (width_px < 100 || height_px < 100) {
    throw Error("domain", "width and height must be >= 100 pixels");
  }
  const HistogramView& hist = bundle.histogram;
  if (hist.bin_edges.size() < 2 || hist.densities.size() + 1 != hist.bin_edges.size()) {
    throw Error("domain", "histogram is degenerate");
  }
  for (std::size_t i = 0; i + 1 < hist.bin_edges.size(); ++i) {
    if (!(hist.bin_edges[i] < hist.bin_edges[i + 1])) {
      throw Error("domain", "histogram edges must be strictly ascending");
    }
  }

  std::vector<std::pair<DistributionSpec, FitResult>> overlays = bundle.overlays;
  std::stable_sort(overlays.begin(), overlays.end(), [](const auto& a, const auto& b) {
    if (a.second.bic != b.second.bic) return a.second.bic < b.second.bic;
    if (a.second.param_count != b.second.param_count) {
      return a.second.param_count < b.second.param_count;
    }
    return family_tag(a.first.family) < family_tag(b.first.family);
  });

  const double x_lo = hist.bin_edges.front();
  const double x_hi = hist.bin_edges.back();
  const double span = x_hi - x_lo;

  std::vector<std::vector<double>> curves(overlays.size());
  double y_max = 0.0;
  for (double d : hist.densities) y_max = std::max(y_max, d);
  for (std::size_t o = 0; o < overlays.size(); ++o) {
    curves[o].resize(kCurvePoints);
    for (int i = 0; i < kCurvePoints; ++i) {
      const double x = x_lo + span * static_cast<double>(i) / (kCurvePoints - 1);
      const double d = overlay_density(overlays[o].first, x);
      curves[o][i] = std::isfinite(d) ? d : 0.0;
      y_max = std::max(y_max, curves[o][i]);
    }
  }
  if (!(y_max > 0.0)) y_max = 1.0;
  y_max *= 1.05;

  const double ml = 80.0, mr = 24.0, mt = 48.0, mb = 56.0;
  const double pw = width_px - ml - mr;
  const double ph = height_px - mt - mb;
  auto sx = [&](double x) { return ml + (x - x_lo) / span * pw; };
  auto sy = [&](double y) { return mt + ph - std::clamp(y / y_max, 0.0, 1.0) * ph; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_px) +
         "\" height=\"" + std::to_string(height_px) + "\" viewBox=\"0 0 " +
         std::to_string(width_px) + " " + std::to_string(height_px) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  if (!bundle.title.empty()) {
    svg += "<text x=\"" + px(width_px / 2.0) +
           "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\" "
           "fill=\"#222\">" +
           xml_escape(bundle.title) + "</text>\n";
  }

  for (std::size_t i = 0; i < hist.densities.size(); ++i) {
    const double bx = sx(hist.bin_edges[i]);
    const double bw = sx(hist.bin_edges[i + 1]) - bx;
    const double by = sy(hist.densities[i]);
    svg += "<rect x=\"" + px(bx) + "\" y=\"" + px(by) + "\" width=\"" + px(bw) + "\" height=\"" +
           px(mt + ph - by) + "\" fill=\"#b5cde3\" stroke=\"#7da7c9\" stroke-width=\"0.5\"/>\n";
  }

  svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(mt + ph) + "\" x2=\"" + px(ml + pw) +
         "\" y2=\"" + px(mt + ph) + "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(ml) + "\" y2=\"" +
         px(mt + ph) + "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_lo + span * t / 4.0;
    const double xp = sx(xv);
    svg += "<line x1=\"" + px(xp) + "\" y1=\"" + px(mt + ph) + "\" x2=\"" + px(xp) + "\" y2=\"" +
           px(mt + ph + 5) + "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + px(xp) + "\" y=\"" + px(mt + ph + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">" +
           four_sig(xv) + "</text>\n";
    const double yv = y_max * t / 4.0;
    const double yp = sy(yv);
    svg += "<line x1=\"" + px(ml - 5) + "\" y1=\"" + px(yp) + "\" x2=\"" + px(ml) + "\" y2=\"" +
           px(yp) + "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + px(ml - 8) + "\" y=\"" + px(yp + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">" +
           four_sig(yv) + "</text>\n";
  }
  svg += "<text x=\"" + px(ml + pw / 2.0) + "\" y=\"" + px(height_px - 12.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "fill=\"#333\">Kbps</text>\n";
  svg += "<text x=\"18\" y=\"" + px(mt + ph / 2.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#333\" "
         "transform=\"rotate(-90 18 " +
         px(mt + ph / 2.0) + ")\">density (1/Kbps)</text>\n";

  for (std::size_t o = 0; o < overlays.size(); ++o) {
    const char* color = kPalette[o % kPaletteSize];
    std::string points;
    for (int i = 0; i < kCurvePoints; ++i) {
      const double x = x_lo + span * static_cast<double>(i) / (kCurvePoints - 1);
      points += px(sx(x)) + "," + px(sy(curves[o][i]));
      if (i + 1 < kCurvePoints) points += ' ';
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
  }

  const double lx = ml + pw - 250.0;
  double ly = mt + 14.0;
  for (std::size_t o = 0; o < overlays.size(); ++o) {
    const char* color = kPalette[o % kPaletteSize];
    svg += "<g class=\"legend-entry\">";
    svg += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(lx + 26) +
           "\" y2=\"" + px(ly - 4) + "\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\"/>";
    svg += "<text x=\"" + px(lx + 32) + "\" y=\"" + px(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">" +
           xml_escape(family_tag(overlays[o].first.family)) + "  BIC " +
           two_dp(overlays[o].second.bic) + "</text>";
    svg += "</g>\n";
    ly += 18.0;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace muxstat
