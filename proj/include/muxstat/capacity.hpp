#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muxstat/distributions.hpp"
#include "muxstat/rng.hpp"

namespace muxstat {

struct AudienceGroup {
  std::string channel_id;
  double lambda = 0.0;  // expected concurrent viewers
  DistributionSpec pid_dist;  // continuous family, Kbps
};

// Total demand = sum over groups of (Poisson viewer count) x (PID draw).
// shared_pid_per_channel: one PID draw serves every viewer of a channel;
// otherwise each viewer draws independently.
struct AudienceModel {
  std::vector<AudienceGroup> groups;
  bool shared_pid_per_channel = true;
};

void validate(const AudienceModel& model);

struct CapacityReport {
  std::size_t trials = 0;
  double mean_kbps = 0.0;
  double std_kbps = 0.0;
  std::vector<std::pair<double, double>> quantiles;  // (p, Kbps), ascending p
  std::uint64_t seed = 0;
  double truncated_fraction = 0.0;  // share of PID draws clipped to 0
  std::vector<std::string> warnings;
  std::vector<double> trial_totals;  // sorted; empty when not retained
};

// Sampler seam: lets tests and custom models plug in any per-viewer PID
// source while keeping the trial/substream structure identical to
// simulate_demand.
struct GroupSampler {
  double lambda = 0.0;
  std::function<double(SplitRng&)> draw_pid;
};

CapacityReport simulate_groups(const std::vector<GroupSampler>& groups, bool shared_pid,
                               std::size_t trials, std::uint64_t seed,
                               const std::vector<double>& quantile_ps);

// Trial i draws from substream(seed, i), so reports are bit-identical
// under any execution order. Negative PID draws are truncated to 0 and
// counted; a fraction above 5% adds a warning.
CapacityReport simulate_demand(const AudienceModel& model, std::size_t trials, std::uint64_t seed,
                               const std::vector<double>& quantile_ps);

// Sum of lambda * analytic mean over groups, mode-independent; nullopt when
// any group's distribution mean is undefined. Ignores the >=0 truncation.
std::optional<double> expected_demand(const AudienceModel& model);

// Type-7 interpolation on retained trial totals; otherwise the nearest
// stored quantile (error when p falls outside the stored range).
double capacity_quantile(const CapacityReport& report, double p);

}  // namespace muxstat
