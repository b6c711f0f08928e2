#pragma once

#include <Eigen/Core>
#include <string>

namespace muxstat {

enum class Persistence { kMeanReverting, kRandomWalk, kTrending };

struct HurstEstimate {
  double h = 0.0;
  double q = 1.0;       // moment order
  int tau_min = 1;      // lag bounds, in samples
  int tau_max = 19;
  double slope_r2 = 0.0;
};

// Structure-function estimate: K_q(tau) = mean_t |x(t+tau) - x(t)|^q is
// regressed as ln K_q = q*H*ln(tau) + c over tau_min..tau_max.
HurstEstimate estimate_hurst(const Eigen::Ref<const Eigen::ArrayXd>& samples, double q = 1.0,
                             int tau_min = 1, int tau_max = 19);

// Band of half-width 0.05 around 0.5 counts as a random walk.
Persistence classify_persistence(double h);

std::string persistence_tag(Persistence p);

}  // namespace muxstat
