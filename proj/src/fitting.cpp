#include "muxstat/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "muxstat/common.hpp"
#include "muxstat/rng.hpp"
#include "muxstat/special_functions.hpp"

namespace muxstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMinSamples = 8;
constexpr int kMaxIterations = 500;
constexpr double kRelTol = 1e-10;

double population_std(const Eigen::ArrayXd& x) {
  const double m = x.mean();
  return std::sqrt((x - m).square().mean());
}

double median_of(const Eigen::ArrayXd& x) {
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------
// Derivative-free simplex minimization. Rejected parameter vectors are
// signalled by +inf objective values; NaN is mapped to +inf so vertex
// ordering stays total.

struct SimplexOutcome {
  Eigen::VectorXd x;
  double f = kInf;
  bool converged = false;
  int iterations = 0;
};

template <typename Fn>
double eval_clean(const Fn& fn, const Eigen::VectorXd& v) {
  const double f = fn(v);
  return std::isnan(f) ? kInf : f;
}

template <typename Fn>
SimplexOutcome nelder_mead(const Fn& fn, const Eigen::VectorXd& x0) {
  const int d = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> xs(d + 1, x0);
  std::vector<double> fs(d + 1);
  for (int i = 1; i <= d; ++i) xs[i][i - 1] += 0.05 * std::max(1.0, std::fabs(x0[i - 1]));
  for (int i = 0; i <= d; ++i) fs[i] = eval_clean(fn, xs[i]);

  std::vector<int> order(d + 1);
  SimplexOutcome out;
  for (int it = 0; it < kMaxIterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order.front(), worst = order.back(), second = order[d - 1];
    out.iterations = it;
    if (fs[worst] - fs[best] <= kRelTol * (1.0 + std::fabs(fs[best]))) {
      out.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i <= d; ++i) {
      if (i != worst) centroid += xs[i];
    }
    centroid /= d;

    const Eigen::VectorXd xr = centroid + (centroid - xs[worst]);
    const double fr = eval_clean(fn, xr);
    if (fr < fs[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = eval_clean(fn, xe);
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second]) {
      xs[worst] = xr;
      fs[worst] = fr;
      continue;
    }
    Eigen::VectorXd xc;
    if (fr < fs[worst]) {
      xc = centroid + 0.5 * (xr - centroid);
    } else {
      xc = centroid + 0.5 * (xs[worst] - centroid);
    }
    const double fc = eval_clean(fn, xc);
    if (fc < std::min(fr, fs[worst])) {
      xs[worst] = xc;
      fs[worst] = fc;
      continue;
    }
    for (int i = 0; i <= d; ++i) {
      if (i == best) continue;
      xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
      fs[i] = eval_clean(fn, xs[i]);
    }
  }

  const auto it_best = std::min_element(fs.begin(), fs.end());
  out.f = *it_best;
  out.x = xs[static_cast<std::size_t>(it_best - fs.begin())];
  return out;
}

// Runs the simplex from x0 and, if that fails to converge, once more from a
// deterministically jittered point; keeps the better of the two minima.
template <typename Fn>
SimplexOutcome minimize_with_restart(const Fn& fn, const Eigen::VectorXd& x0,
                                     DistributionFamily family) {
  SimplexOutcome first = nelder_mead(fn, x0);
  if (first.converged) return first;

  SplitRng rng(0x5eedf17dull ^ static_cast<std::uint64_t>(family));
  Eigen::VectorXd xj = first.x;
  for (int i = 0; i < xj.size(); ++i) {
    xj[i] += (rng.next_uniform() - 0.5) * 0.2 * std::max(1.0, std::fabs(xj[i]));
  }
  if (!std::isfinite(eval_clean(fn, xj))) xj = first.x;
  SimplexOutcome second = nelder_mead(fn, xj);
  second.iterations += first.iterations;
  if (first.f < second.f) {
    second.x = first.x;
    second.f = first.f;
    second.converged = false;
  }
  return second;
}

// ---------------------------------------------------------------------------
// Negative log-likelihood objectives in standardized coordinates.

double nll_logistic(const Eigen::ArrayXd& w, double mu, double log_sigma) {
  const double sigma = std::exp(log_sigma);
  const Eigen::ArrayXd a = ((w - mu) / sigma).abs();
  return a.sum() + 2.0 * (-a).exp().log1p().sum() + static_cast<double>(w.size()) * log_sigma;
}

double nll_t(const Eigen::ArrayXd& w, double mu, double log_sigma, double log_nu) {
  const double sigma = std::exp(log_sigma);
  const double nu = std::exp(log_nu);
  if (!std::isfinite(nu) || nu <= 0.0) return kInf;
  const double n = static_cast<double>(w.size());
  const Eigen::ArrayXd z2 = ((w - mu) / sigma).square() / nu;
  const double shape_terms = special::log_gamma(0.5 * nu) - special::log_gamma(0.5 * (nu + 1.0)) +
                             0.5 * std::log(nu * M_PI) + log_sigma;
  return n * shape_terms + 0.5 * (nu + 1.0) * z2.log1p().sum();
}

double nll_gev(const Eigen::ArrayXd& w, double k, double log_sigma, double mu) {
  if (k <= -1.0) return kInf;  // likelihood unbounded past the Weibull corner
  const double sigma = std::exp(log_sigma);
  const double n = static_cast<double>(w.size());
  const Eigen::ArrayXd z = (w - mu) / sigma;
  if (std::fabs(k) < 1e-12) {
    return n * log_sigma + (z + (-z).exp()).sum();
  }
  if (((1.0 + k * z) <= 0.0).any()) return kInf;
  const Eigen::ArrayXd ls = (k * z).log1p();
  return n * log_sigma + ((1.0 + 1.0 / k) * ls + (-ls / k).exp()).sum();
}

double nll_gpd(const Eigen::ArrayXd& y, double k, double log_sigma) {
  if (k <= -1.0) return kInf;
  const double sigma = std::exp(log_sigma);
  const double n = static_cast<double>(y.size());
  if (std::fabs(k) < 1e-12) {
    return n * log_sigma + (y / sigma).sum();
  }
  if (((1.0 + (k / sigma) * y) <= 0.0).any()) return kInf;
  return n * log_sigma + (1.0 + 1.0 / k) * ((k / sigma) * y).log1p().sum();
}

double nll_gumbel_min(const Eigen::ArrayXd& w, double mu, double log_sigma) {
  const double sigma = std::exp(log_sigma);
  const Eigen::ArrayXd z = (w - mu) / sigma;
  return static_cast<double>(w.size()) * log_sigma - z.sum() + z.exp().sum();
}

// ---------------------------------------------------------------------------
// Initializers.

// Probability-weighted-moments start for GEV (Hosking's L-moment form).
Eigen::Vector3d gev_pwm_init(const Eigen::ArrayXd& w) {
  std::vector<double> v(w.data(), w.data() + w.size());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = static_cast<double>(i + 1);
    b0 += v[i];
    b1 += (r - 1.0) / (n - 1.0) * v[i];
    b2 += (r - 1.0) * (r - 2.0) / ((n - 1.0) * (n - 2.0)) * v[i];
  }
  b0 /= n;
  b1 /= n;
  b2 /= n;
  const double l1 = b0;
  const double l2 = 2.0 * b1 - b0;
  const double l3 = 6.0 * b2 - 6.0 * b1 + b0;
  const double t3 = l3 / l2;
  const double c = 2.0 / (3.0 + t3) - std::log(2.0) / std::log(3.0);
  const double kappa = 7.8590 * c + 2.9554 * c * c;
  double k0 = -kappa, sigma0 = 0.0, mu0 = 0.0;
  if (std::fabs(kappa) > 1e-8) {
    const double g = std::tgamma(1.0 + kappa);
    sigma0 = l2 * kappa / ((1.0 - std::pow(2.0, -kappa)) * g);
    mu0 = l1 + sigma0 * (g - 1.0) / kappa;
  } else {
    sigma0 = l2 / std::log(2.0);
    mu0 = l1 - sigma0 * special::kEulerGamma;
    k0 = 0.0;
  }
  if (!std::isfinite(k0) || !std::isfinite(sigma0) || sigma0 <= 0.0 || !std::isfinite(mu0)) {
    sigma0 = std::sqrt(6.0) / M_PI * population_std(w);
    mu0 = w.mean() - special::kEulerGamma * sigma0;
    k0 = 0.0;
  }
  return {k0, sigma0, mu0};
}

}  // namespace

double bic_score(double log_likelihood, int param_count, std::size_t n) {
  if (n < 1) throw Error("domain", "n must be >= 1");
  if (param_count < 0) throw Error("domain", "param_count must be >= 0");
  return static_cast<double>(param_count) * std::log(static_cast<double>(n)) -
         2.0 * log_likelihood;
}

double log_likelihood(const DistributionSpec& spec,
                      const Eigen::Ref<const Eigen::ArrayXd>& samples) {
  validate(spec);
  double total = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    total += log_pdf(spec, samples[i]);
    if (total == -kInf) return -kInf;
  }
  return total;
}

FitResult fit_mle(DistributionFamily family, const Eigen::Ref<const Eigen::ArrayXd>& samples) {
  const std::size_t n = static_cast<std::size_t>(samples.size());
  if (n < kMinSamples) {
    throw Error("sample-size", "need at least 8 samples, got " + std::to_string(n));
  }
  const Eigen::ArrayXd x = samples;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw Error("domain", "samples must be finite");
  }
  const double mean = x.mean();
  const double sdev = population_std(x);
  if (!(sdev > 0.0)) throw Error("degenerate-sample", "samples have zero variance");
  if (family == DistributionFamily::kExponential || family == DistributionFamily::kPoisson) {
    const char* tag = family == DistributionFamily::kExponential ? "exponential" : "poisson";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < 0.0) {
        throw Error("support", std::string(tag) + " requires non-negative samples");
      }
      if (family == DistributionFamily::kPoisson && x[i] != std::floor(x[i])) {
        throw Error("support", "poisson requires integer samples");
      }
    }
  }

  FitResult result;
  result.n = n;
  result.param_count = param_count(family);
  result.converged = true;
  result.iterations = 0;

  // Location-scale families are fitted on standardized data; estimates map
  // back exactly, which also makes the optimizer path scale-invariant.
  const Eigen::ArrayXd w = (x - mean) / sdev;

  switch (family) {
    case DistributionFamily::kNormal:
      result.spec = normal_spec(mean, sdev);
      break;
    case DistributionFamily::kExponential:
      result.spec = exponential_spec(mean);
      break;
    case DistributionFamily::kPoisson:
      result.spec = poisson_spec(mean);
      break;
    case DistributionFamily::kLogistic: {
      Eigen::VectorXd x0(2);
      x0 << median_of(w), std::log(std::sqrt(3.0) / M_PI);
      auto fn = [&](const Eigen::VectorXd& v) { return nll_logistic(w, v[0], v[1]); };
      const SimplexOutcome s = minimize_with_restart(fn, x0, family);
      result.spec = logistic_spec(s.x[0] * sdev + mean, std::exp(s.x[1]) * sdev);
      result.converged = s.converged;
      result.iterations = s.iterations;
      break;
    }
    case DistributionFamily::kTLocationScale: {
      const double excess = w.pow(4).mean() - 3.0;
      double nu0 = excess > 0.05 ? 4.0 + 6.0 / excess : 20.0;
      nu0 = std::clamp(nu0, 2.1, 100.0);
      Eigen::VectorXd x0(3);
      x0 << median_of(w), 0.5 * std::log((nu0 - 2.0) / nu0), std::log(nu0);
      auto fn = [&](const Eigen::VectorXd& v) { return nll_t(w, v[0], v[1], v[2]); };
      const SimplexOutcome s = minimize_with_restart(fn, x0, family);
      result.spec =
          t_location_scale_spec(s.x[0] * sdev + mean, std::exp(s.x[1]) * sdev, std::exp(s.x[2]));
      result.converged = s.converged;
      result.iterations = s.iterations;
      break;
    }
    case DistributionFamily::kGeneralizedExtremeValue: {
      Eigen::Vector3d init = gev_pwm_init(w);
      auto fn = [&](const Eigen::VectorXd& v) { return nll_gev(w, v[0], v[1], v[2]); };
      Eigen::VectorXd x0(3);
      x0 << init[0], std::log(init[1]), init[2];
      for (int tries = 0; tries < 64 && !std::isfinite(eval_clean(fn, x0)); ++tries) {
        x0[0] *= 0.5;  // shrink the shape toward the always-feasible Gumbel limit
        if (std::fabs(x0[0]) < 1e-12) x0[0] = 0.0;
      }
      const SimplexOutcome s = minimize_with_restart(fn, x0, family);
      result.spec = gev_spec(s.x[0], std::exp(s.x[1]) * sdev, s.x[2] * sdev + mean);
      result.converged = s.converged;
      result.iterations = s.iterations;
      break;
    }
    case DistributionFamily::kGeneralizedPareto: {
      const double lo = x.minCoeff();
      const double range = x.maxCoeff() - lo;
      const double theta = lo - 1e-9 * range;
      const Eigen::ArrayXd y = (x - theta) / sdev;
      const double my = y.mean();
      const double vy = (y - my).square().mean();
      double k0 = std::clamp(0.5 * (1.0 - my * my / vy), -0.9, 0.9);
      double sigma0 = my * (1.0 - k0);
      if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
        k0 = 0.0;
        sigma0 = my;
      }
      auto fn = [&](const Eigen::VectorXd& v) { return nll_gpd(y, v[0], v[1]); };
      Eigen::VectorXd x0(2);
      x0 << k0, std::log(sigma0);
      for (int tries = 0; tries < 64 && !std::isfinite(eval_clean(fn, x0)); ++tries) {
        x0[0] *= 0.5;
        if (std::fabs(x0[0]) < 1e-12) x0[0] = 0.0;
      }
      const SimplexOutcome s = minimize_with_restart(fn, x0, family);
      result.spec = gen_pareto_spec(s.x[0], std::exp(s.x[1]) * sdev, theta);
      result.converged = s.converged;
      result.iterations = s.iterations;
      break;
    }
    case DistributionFamily::kExtremeValue: {
      const double sigma0 = std::sqrt(6.0) / M_PI;
      Eigen::VectorXd x0(2);
      x0 << special::kEulerGamma * sigma0, std::log(sigma0);
      auto fn = [&](const Eigen::VectorXd& v) { return nll_gumbel_min(w, v[0], v[1]); };
      const SimplexOutcome s = minimize_with_restart(fn, x0, family);
      result.spec = extreme_value_spec(s.x[0] * sdev + mean, std::exp(s.x[1]) * sdev);
      result.converged = s.converged;
      result.iterations = s.iterations;
      break;
    }
  }

  result.log_likelihood = log_likelihood(result.spec, x);
  result.bic = bic_score(result.log_likelihood, result.param_count, n);
  return result;
}

std::vector<DistributionFamily> full_catalog() {
  return {DistributionFamily::kNormal,
          DistributionFamily::kLogistic,
          DistributionFamily::kTLocationScale,
          DistributionFamily::kGeneralizedExtremeValue,
          DistributionFamily::kGeneralizedPareto,
          DistributionFamily::kExtremeValue,
          DistributionFamily::kExponential,
          DistributionFamily::kPoisson};
}

FitRanking rank_catalog(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                        const std::vector<DistributionFamily>& families, std::string label) {
  if (families.empty()) throw Error("domain", "families must be non-empty");
  FitRanking ranking;
  ranking.label = std::move(label);
  for (DistributionFamily family : families) {
    try {
      ranking.entries.push_back(fit_mle(family, samples));
    } catch (const Error& e) {
      ranking.skipped.push_back({family, e.category() + ": " + e.detail()});
    }
  }
  if (ranking.entries.empty()) {
    throw Error("empty-ranking", "every requested family was skipped");
  }
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const FitResult& a, const FitResult& b) {
                     if (a.bic != b.bic) return a.bic < b.bic;
                     if (a.param_count != b.param_count) return a.param_count < b.param_count;
                     return family_tag(a.spec.family) < family_tag(b.spec.family);
                   });
  return ranking;
}

FitRanking rank_catalog(const Eigen::Ref<const Eigen::ArrayXd>& samples, std::string label) {
  return rank_catalog(samples, full_catalog(), std::move(label));
}

}  // namespace muxstat
