#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "muxstat/capacity.hpp"
#include "muxstat/common.hpp"
#include "muxstat/distributions.hpp"
#include "muxstat/fitting.hpp"
#include "muxstat/hurst.hpp"
#include "muxstat/json_io.hpp"
#include "muxstat/series.hpp"
#include "muxstat/svg_report.hpp"

namespace {

using muxstat::Error;

muxstat::ChannelMatrix load_matrix(const std::string& path, double period_ms) {
  std::ifstream in(path);
  if (!in) throw Error("format", "cannot open \"" + path + "\"");
  return muxstat::load_csv(in, period_ms);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("format", "cannot write \"" + path + "\"");
  out << content;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(part);
  return parts;
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error("parse", std::string("invalid ") + what + ": \"" + s + "\"");
  }
  return v;
}

const muxstat::BitrateSeries& pick_channel(const muxstat::ChannelMatrix& matrix,
                                           const std::string& key) {
  for (const muxstat::BitrateSeries& s : matrix.channels) {
    if (s.channel_id == key) return s;
  }
  std::size_t index = 0;
  const auto res = std::from_chars(key.data(), key.data() + key.size(), index);
  if (res.ec == std::errc() && res.ptr == key.data() + key.size() &&
      index < matrix.channels.size()) {
    return matrix.channels[index];
  }
  throw Error("domain", "no channel named \"" + key + "\"");
}

std::vector<muxstat::DistributionFamily> parse_families(const std::string& spec) {
  if (spec == "all") return muxstat::full_catalog();
  std::vector<muxstat::DistributionFamily> families;
  for (const std::string& tag : split_list(spec)) {
    families.push_back(muxstat::family_from_tag(tag));
  }
  if (families.empty()) throw Error("domain", "no families requested");
  return families;
}

int run(int argc, char** argv) {
  CLI::App app{"Live multiplexer bitrate statistics: distribution fitting, "
               "Hurst analysis, and capacity planning"};
  app.require_subcommand(1);
  app.fallthrough();

  double period_ms = muxstat::kDefaultSamplePeriodMs;
  std::uint64_t seed = 0;
  app.add_option("--period-ms", period_ms, "Sample period in milliseconds")
      ->capture_default_str();
  app.add_option("--seed", seed, "Random seed")->capture_default_str();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit catalog families to one channel");
  std::string fit_input, fit_channel, fit_families = "all", fit_json;
  fit_cmd->add_option("--input", fit_input, "Input CSV")->required();
  fit_cmd->add_option("--channel", fit_channel, "Channel label or index")->required();
  fit_cmd->add_option("--families", fit_families, "Comma-separated family tags, or \"all\"");
  fit_cmd->add_option("--json", fit_json, "Write the ranking JSON to this file");

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Best-fit census across channels");
  std::string rank_input;
  bool rank_pooled = false, rank_aggregate = false;
  rank_cmd->add_option("--input", rank_input, "Input CSV")->required();
  rank_cmd->add_flag("--pooled", rank_pooled, "Add a pooled-samples row");
  rank_cmd->add_flag("--aggregate", rank_aggregate, "Add an aggregate-series row");

  // hurst
  auto* hurst_cmd = app.add_subcommand("hurst", "Per-channel Hurst exponents");
  std::string hurst_input;
  double hurst_q = 1.0;
  int hurst_tau_min = 1, hurst_tau_max = 19;
  hurst_cmd->add_option("--input", hurst_input, "Input CSV")->required();
  hurst_cmd->add_option("--q", hurst_q, "Moment order")->capture_default_str();
  hurst_cmd->add_option("--tau-min", hurst_tau_min, "Smallest lag")->capture_default_str();
  hurst_cmd->add_option("--tau-max", hurst_tau_max, "Largest lag")->capture_default_str();

  // aggregate
  auto* agg_cmd = app.add_subcommand("aggregate", "Sum all channels into one series");
  std::string agg_input, agg_output;
  agg_cmd->add_option("--input", agg_input, "Input CSV")->required();
  agg_cmd->add_option("--output", agg_output, "Output CSV")->required();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo capacity simulation");
  std::string sim_model, sim_quantiles = "0.5,0.95,0.99";
  std::size_t sim_trials = 0;
  sim_cmd->add_option("--model", sim_model, "AudienceModel JSON file")->required();
  sim_cmd->add_option("--trials", sim_trials, "Trial count")->required();
  sim_cmd->add_option("--quantiles", sim_quantiles, "Comma-separated probabilities")
      ->capture_default_str();

  // report
  auto* rep_cmd = app.add_subcommand("report", "Histogram + best-fit overlay SVG");
  std::string rep_input, rep_channel, rep_bins = "auto", rep_svg;
  bool rep_pooled = false, rep_aggregate = false;
  int rep_top = 4;
  rep_cmd->add_option("--input", rep_input, "Input CSV")->required();
  rep_cmd->add_option("--channel", rep_channel, "Channel label or index");
  rep_cmd->add_flag("--pooled", rep_pooled, "Pool all channels' samples");
  rep_cmd->add_flag("--aggregate", rep_aggregate, "Use the aggregate series");
  rep_cmd->add_option("--top", rep_top, "Overlay the top-k fits")->capture_default_str();
  rep_cmd->add_option("--bins", rep_bins, "\"auto\" or an explicit bin count")
      ->capture_default_str();
  rep_cmd->add_option("--svg", rep_svg, "Output SVG file")->required();

  CLI11_PARSE(app, argc, argv);

  if (fit_cmd->parsed()) {
    const muxstat::ChannelMatrix matrix = load_matrix(fit_input, period_ms);
    const muxstat::BitrateSeries& series = pick_channel(matrix, fit_channel);
    const muxstat::FitRanking ranking =
        muxstat::rank_catalog(series.samples, parse_families(fit_families), series.channel_id);
    const std::string text = muxstat::to_json(ranking).dump(2) + "\n";
    if (fit_json.empty()) {
      std::cout << text;
    } else {
      write_file(fit_json, text);
    }
    return 0;
  }

  if (rank_cmd->parsed()) {
    const muxstat::ChannelMatrix matrix = load_matrix(rank_input, period_ms);
    std::string out = "channel,first,second,third\n";
    auto census_row = [&out](const std::string& label, const muxstat::FitRanking& ranking) {
      out += label;
      for (std::size_t i = 0; i < 3; ++i) {
        out += ',';
        if (i < ranking.entries.size()) {
          out += muxstat::family_tag(ranking.entries[i].spec.family);
        }
      }
      out += '\n';
    };
    for (const muxstat::BitrateSeries& s : matrix.channels) {
      census_row(s.channel_id, muxstat::rank_catalog(s.samples, s.channel_id));
    }
    if (rank_pooled) {
      census_row("pooled", muxstat::rank_catalog(muxstat::pool_samples(matrix), "pooled"));
    }
    if (rank_aggregate) {
      const muxstat::BitrateSeries agg = muxstat::aggregate_sum(matrix);
      census_row("aggregate", muxstat::rank_catalog(agg.samples, "aggregate"));
    }
    std::cout << out;
    return 0;
  }

  if (hurst_cmd->parsed()) {
    const muxstat::ChannelMatrix matrix = load_matrix(hurst_input, period_ms);
    std::string out = "channel_id,H,q,tau_min,tau_max,r2,classification\n";
    for (const muxstat::BitrateSeries& s : matrix.channels) {
      const muxstat::HurstEstimate est =
          muxstat::estimate_hurst(s.samples, hurst_q, hurst_tau_min, hurst_tau_max);
      out += s.channel_id + ',' + muxstat::format_double(est.h) + ',' +
             muxstat::format_double(est.q) + ',' + std::to_string(est.tau_min) + ',' +
             std::to_string(est.tau_max) + ',' + muxstat::format_double(est.slope_r2) + ',' +
             muxstat::persistence_tag(muxstat::classify_persistence(est.h)) + '\n';
    }
    std::cout << out;
    return 0;
  }

  if (agg_cmd->parsed()) {
    const muxstat::ChannelMatrix matrix = load_matrix(agg_input, period_ms);
    write_file(agg_output, muxstat::series_to_csv(muxstat::aggregate_sum(matrix)));
    return 0;
  }

  if (sim_cmd->parsed()) {
    std::ifstream in(sim_model);
    if (!in) throw Error("format", "cannot open \"" + sim_model + "\"");
    muxstat::OrderedJson mj;
    try {
      mj = muxstat::OrderedJson::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error("parse", std::string("model JSON: ") + e.what());
    }
    const muxstat::AudienceModel model = muxstat::model_from_json(mj);
    std::vector<double> ps;
    for (const std::string& part : split_list(sim_quantiles)) {
      ps.push_back(parse_double(part, "quantile probability"));
    }
    const muxstat::CapacityReport report = muxstat::simulate_demand(model, sim_trials, seed, ps);
    std::cout << muxstat::to_json(report).dump(2) << "\n";
    return 0;
  }

  if (rep_cmd->parsed()) {
    const int pick_count =
        static_cast<int>(!rep_channel.empty()) + static_cast<int>(rep_pooled) +
        static_cast<int>(rep_aggregate);
    if (pick_count != 1) {
      throw Error("domain", "choose exactly one of --channel, --pooled, --aggregate");
    }
    if (rep_top < 0) throw Error("domain", "--top must be >= 0");
    const muxstat::ChannelMatrix matrix = load_matrix(rep_input, period_ms);
    Eigen::ArrayXd samples;
    std::string label;
    if (!rep_channel.empty()) {
      const muxstat::BitrateSeries& s = pick_channel(matrix, rep_channel);
      samples = s.samples;
      label = s.channel_id;
    } else if (rep_pooled) {
      samples = muxstat::pool_samples(matrix);
      label = "pooled";
    } else {
      samples = muxstat::aggregate_sum(matrix).samples;
      label = "aggregate";
    }

    std::optional<int> bins;
    if (rep_bins != "auto") {
      bins = static_cast<int>(parse_double(rep_bins, "bin count"));
    }
    muxstat::ReportBundle bundle;
    bundle.histogram = muxstat::build_histogram(samples, bins);
    bundle.title = label + " bitrate density";
    if (rep_top > 0) {
      const muxstat::FitRanking ranking = muxstat::rank_catalog(samples, label);
      const std::size_t k =
          std::min<std::size_t>(static_cast<std::size_t>(rep_top), ranking.entries.size());
      for (std::size_t i = 0; i < k; ++i) {
        bundle.overlays.emplace_back(ranking.entries[i].spec, ranking.entries[i]);
      }
    }
    write_file(rep_svg, muxstat::render_report(bundle, 960, 600));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}
