#include "muxstat/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "muxstat/common.hpp"

namespace muxstat {

namespace {

double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * (h - std::floor(h));
}

}  // namespace

void validate(const AudienceModel& model) {
  if (model.groups.empty()) throw Error("domain", "model has no groups");
  std::set<std::string> ids;
  for (const AudienceGroup& g : model.groups) {
    if (g.channel_id.empty()) throw Error("domain", "group channel_id must be non-empty");
    if (!ids.insert(g.channel_id).second) {
      throw Error("domain", "duplicate group channel id \"" + g.channel_id + "\"");
    }
    if (!std::isfinite(g.lambda) || g.lambda < 0.0) {
      throw Error("domain", "lambda must be >= 0 for group \"" + g.channel_id + "\"");
    }
    validate(g.pid_dist);
    if (!is_continuous(g.pid_dist.family)) {
      throw Error("domain", "pid_dist must be a continuous family for group \"" + g.channel_id +
                                "\"");
    }
  }
}

CapacityReport simulate_groups(const std::vector<GroupSampler>& groups, bool shared_pid,
                               std::size_t trials, std::uint64_t seed,
                               const std::vector<double>& quantile_ps) {
  if (trials < 1) throw Error("domain", "trials must be >= 1");
  if (groups.empty()) throw Error("domain", "no groups to simulate");
  for (double p : quantile_ps) {
    if (!(p > 0.0 && p < 1.0)) {
      throw Error("domain", "quantile probability must lie strictly inside (0, 1)");
    }
  }

  std::vector<DistributionSpec> counts;
  counts.reserve(groups.size());
  for (const GroupSampler& g : groups) {
    counts.push_back(g.lambda > 0.0 ? poisson_spec(g.lambda) : DistributionSpec{});
  }

  std::vector<double> totals(trials, 0.0);
  std::size_t draws = 0, truncated = 0;
  SplitRng root(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    SplitRng rng = root.substream(i);
    double total = 0.0;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const GroupSampler& g = groups[gi];
      const double u = rng.next_uniform();
      const double n = g.lambda > 0.0 ? quantile(counts[gi], u) : 0.0;
      if (shared_pid) {
        // One allocation per channel per trial, drawn even when nobody is
        // watching so the stream layout does not depend on the draw.
        double pid = g.draw_pid(rng);
        ++draws;
        if (pid < 0.0) {
          pid = 0.0;
          ++truncated;
        }
        total += n * pid;
      } else {
        for (double j = 0.0; j < n; j += 1.0) {
          double pid = g.draw_pid(rng);
          ++draws;
          if (pid < 0.0) {
            pid = 0.0;
            ++truncated;
          }
          total += pid;
        }
      }
    }
    totals[i] = total;
  }

  CapacityReport report;
  report.trials = trials;
  report.seed = seed;
  const double mean =
      std::accumulate(totals.begin(), totals.end(), 0.0) / static_cast<double>(trials);
  report.mean_kbps = mean;
  if (trials > 1) {
    double ss = 0.0;
    for (double t : totals) ss += (t - mean) * (t - mean);
    report.std_kbps = std::sqrt(ss / static_cast<double>(trials - 1));
  }
  report.truncated_fraction = draws > 0 ? static_cast<double>(truncated) / static_cast<double>(draws) : 0.0;
  if (report.truncated_fraction > 0.05) {
    report.warnings.push_back("pid truncation fraction " +
                              format_double(report.truncated_fraction) + " exceeds 0.05");
  }

  std::sort(totals.begin(), totals.end());
  std::vector<double> ps = quantile_ps;
  std::sort(ps.begin(), ps.end());
  report.quantiles.reserve(ps.size());
  for (double p : ps) report.quantiles.emplace_back(p, sorted_quantile(totals, p));
  report.trial_totals = std::move(totals);
  return report;
}

CapacityReport simulate_demand(const AudienceModel& model, std::size_t trials, std::uint64_t seed,
                               const std::vector<double>& quantile_ps) {
  validate(model);
  std::vector<GroupSampler> groups;
  groups.reserve(model.groups.size());
  for (const AudienceGroup& g : model.groups) {
    groups.push_back(
        {g.lambda, [spec = g.pid_dist](SplitRng& rng) { return sample_one(spec, rng); }});
  }
  return simulate_groups(groups, model.shared_pid_per_channel, trials, seed, quantile_ps);
}

std::optional<double> expected_demand(const AudienceModel& model) {
  validate(model);
  double total = 0.0;
  for (const AudienceGroup& g : model.groups) {
    const std::optional<double> mean = analytic_mean(g.pid_dist);
    if (!mean) return std::nullopt;
    total += g.lambda * *mean;
  }
  return total;
}

double capacity_quantile(const CapacityReport& report, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error("domain", "quantile probability must lie strictly inside (0, 1)");
  }
  if (!report.trial_totals.empty()) return sorted_quantile(report.trial_totals, p);
  if (report.quantiles.empty()) throw Error("unavailable", "report stores no quantiles");
  if (p < report.quantiles.front().first || p > report.quantiles.back().first) {
    throw Error("unavailable", "p outside the stored quantile range");
  }
  double best_gap = std::numeric_limits<double>::infinity();
  double best_value = 0.0;
  for (const auto& [stored_p, kbps] : report.quantiles) {
    const double gap = std::fabs(stored_p - p);
    if (gap < best_gap) {
      best_gap = gap;
      best_value = kbps;
    }
  }
  return best_value;
}

}  // namespace muxstat
