#include "muxstat/hurst.hpp"

#include <cmath>
#include <string>

#include "muxstat/common.hpp"

namespace muxstat {

namespace {
constexpr double kRandomWalkBand = 0.05;
}

HurstEstimate estimate_hurst(const Eigen::Ref<const Eigen::ArrayXd>& samples, double q,
                             int tau_min, int tau_max) {
  if (!(q > 0.0)) throw Error("domain", "q must be > 0");
  if (tau_min < 1) throw Error("domain", "tau_min must be >= 1");
  if (tau_max < tau_min + 3) throw Error("domain", "need at least 4 lags");
  const Eigen::Index n = samples.size();
  if (n < 100) throw Error("size", "need at least 100 samples, got " + std::to_string(n));
  if (static_cast<Eigen::Index>(tau_max) > n / 4) {
    throw Error("size", "tau_max exceeds length/4");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(samples[i])) throw Error("domain", "samples must be finite");
  }

  const int lags = tau_max - tau_min + 1;
  Eigen::ArrayXd log_tau(lags), log_k(lags);
  for (int t = 0; t < lags; ++t) {
    const Eigen::Index tau = tau_min + t;
    const Eigen::ArrayXd diff = samples.tail(n - tau) - samples.head(n - tau);
    const double k_q = diff.abs().pow(q).mean();
    if (!(k_q > 0.0)) {
      throw Error("degenerate-sample", "structure function vanishes at lag " + std::to_string(tau));
    }
    log_tau[t] = std::log(static_cast<double>(tau));
    log_k[t] = std::log(k_q);
  }

  const double u_mean = log_tau.mean();
  const double y_mean = log_k.mean();
  const Eigen::ArrayXd du = log_tau - u_mean;
  const Eigen::ArrayXd dy = log_k - y_mean;
  const double slope = (du * dy).sum() / du.square().sum();
  const double ss_tot = dy.square().sum();
  const double ss_res = (dy - slope * du).square().sum();

  HurstEstimate est;
  est.h = slope / q;
  est.q = q;
  est.tau_min = tau_min;
  est.tau_max = tau_max;
  est.slope_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return est;
}

Persistence classify_persistence(double h) {
  if (!std::isfinite(h)) throw Error("domain", "h must be finite");
  if (h < 0.5 - kRandomWalkBand) return Persistence::kMeanReverting;
  if (h > 0.5 + kRandomWalkBand) return Persistence::kTrending;
  return Persistence::kRandomWalk;
}

std::string persistence_tag(Persistence p) {
  switch (p) {
    case Persistence::kMeanReverting:
      return "mean_reverting";
    case Persistence::kRandomWalk:
      return "random_walk";
    case Persistence::kTrending:
      return "trending";
  }
  throw Error("domain", "unknown persistence class");
}

}  // namespace muxstat
