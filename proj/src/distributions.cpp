#include "muxstat/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "muxstat/common.hpp"
#include "muxstat/special_functions.hpp"

namespace muxstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double req(const std::optional<double>& v, const char* name) {
  if (!v) throw Error("parameter-domain", std::string("missing parameter ") + name);
  if (!std::isfinite(*v)) throw Error("parameter-domain", std::string(name) + " must be finite");
  return *v;
}

void forbid(const std::optional<double>& v, const char* name, const char* family) {
  if (v) {
    throw Error("parameter-domain",
                std::string(family) + " does not take parameter " + name);
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw Error("parameter-domain", std::string(name) + " must be > 0");
}

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error("domain", "probability must lie strictly inside (0, 1)");
  }
}

void check_finite_x(double x) {
  if (!std::isfinite(x)) throw Error("domain", "x must be finite");
}

// ---------------------------------------------------------------------------
// log-density kernels; spec already validated, x already finite

double normal_log_pdf(double mu, double sigma, double x) {
  const double z = (x - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - special::kLnSqrt2Pi;
}

double logistic_log_pdf(double mu, double sigma, double x) {
  const double z = std::fabs((x - mu) / sigma);
  return -z - 2.0 * std::log1p(std::exp(-z)) - std::log(sigma);
}

double t_log_pdf(double mu, double sigma, double nu, double x) {
  const double z = (x - mu) / sigma;
  return special::log_gamma(0.5 * (nu + 1.0)) - special::log_gamma(0.5 * nu) -
         0.5 * std::log(nu * M_PI) - std::log(sigma) -
         0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

// GEV and GenPareto use log1p so small shapes stay accurate down to the
// Gumbel/exponential limits.
double gev_log_pdf(double k, double sigma, double mu, double x) {
  const double z = (x - mu) / sigma;
  if (k == 0.0) {
    return -z - std::exp(-z) - std::log(sigma);
  }
  const double s = 1.0 + k * z;
  if (s <= 0.0) return -kInf;
  const double ln_s = std::log1p(k * z);
  return -(1.0 + 1.0 / k) * ln_s - std::exp(-ln_s / k) - std::log(sigma);
}

double gpd_log_pdf(double k, double sigma, double theta, double x) {
  const double y = x - theta;
  if (y < 0.0) return -kInf;
  if (k == 0.0) return -y / sigma - std::log(sigma);
  const double s = 1.0 + k * y / sigma;
  if (s <= 0.0) return -kInf;
  return -(1.0 + 1.0 / k) * std::log1p(k * y / sigma) - std::log(sigma);
}

double gumbel_log_pdf(double mu, double sigma, GumbelOrientation o, double x) {
  const double z = (x - mu) / sigma;
  if (o == GumbelOrientation::kMin) return z - std::exp(z) - std::log(sigma);
  return -z - std::exp(-z) - std::log(sigma);
}

double exponential_log_pdf(double sigma, double x) {
  if (x < 0.0) return -kInf;
  return -x / sigma - std::log(sigma);
}

double poisson_log_pmf(double lambda, double x) {
  if (x < 0.0) return -kInf;
  return -lambda + x * std::log(lambda) - special::log_gamma(x + 1.0);
}

// ---------------------------------------------------------------------------
// CDF kernels

double logistic_cdf(double mu, double sigma, double x) {
  return 1.0 / (1.0 + std::exp(-(x - mu) / sigma));
}

double t_cdf(double mu, double sigma, double nu, double x) {
  const double z = (x - mu) / sigma;
  const double z2 = z * z;
  // The beta argument is formed on whichever side keeps full relative
  // precision: nu/(nu+z^2) rounds to 1 for |z| < sqrt(nu*eps), flattening
  // the CDF around the median.
  const double lower =
      z2 < nu ? 0.5 * (1.0 - special::reg_beta_inc(0.5, 0.5 * nu, z2 / (nu + z2)))
              : 0.5 * special::reg_beta_inc(0.5 * nu, 0.5, nu / (nu + z2));
  return z >= 0.0 ? 1.0 - lower : lower;
}

double gev_cdf(double k, double sigma, double mu, double x) {
  const double z = (x - mu) / sigma;
  if (k == 0.0) return std::exp(-std::exp(-z));
  const double s = 1.0 + k * z;
  if (s <= 0.0) return k > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-std::log1p(k * z) / k));
}

double gpd_cdf(double k, double sigma, double theta, double x) {
  const double y = x - theta;
  if (y < 0.0) return 0.0;
  if (k == 0.0) return -std::expm1(-y / sigma);
  const double s = 1.0 + k * y / sigma;
  if (s <= 0.0) return 1.0;  // above the bounded upper endpoint (k < 0)
  return -std::expm1(-std::log1p(k * y / sigma) / k);
}

double gumbel_cdf(double mu, double sigma, GumbelOrientation o, double x) {
  const double z = (x - mu) / sigma;
  if (o == GumbelOrientation::kMin) return -std::expm1(-std::exp(z));
  return std::exp(-std::exp(-z));
}

double poisson_cdf(double lambda, double x) {
  if (x < 0.0) return 0.0;
  return special::reg_gamma_q(std::floor(x) + 1.0, lambda);
}

// ---------------------------------------------------------------------------
// Quantiles

// Safeguarded Newton inside a verified bracket: cdf(lo) < p <= cdf(hi).
// Falls back to bisection whenever the Newton step leaves the bracket.
template <typename CdfFn, typename PdfFn>
double invert_cdf(const CdfFn& cdf_fn, const PdfFn& pdf_fn, double p, double lo, double hi) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = cdf_fn(x) - p;
    if (f >= 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double d = pdf_fn(x);
    double next;
    if (d > 0.0 && std::isfinite(d)) {
      next = x - f / d;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    } else {
      next = 0.5 * (lo + hi);
    }
    const double tol = 1e-10 * std::max(1.0, std::fabs(next));
    if (hi - lo <= tol || next == x) return next;
    x = next;
  }
  return x;
}

// Expands [mu - sigma, mu + sigma] geometrically until it brackets p.
template <typename CdfFn>
void expand_bracket(const CdfFn& cdf_fn, double p, double mu, double sigma, double& lo,
                    double& hi) {
  lo = mu - sigma;
  hi = mu + sigma;
  double step = sigma;
  while (cdf_fn(lo) >= p && std::isfinite(lo)) {
    step *= 2.0;
    lo -= step;
  }
  step = sigma;
  while (cdf_fn(hi) < p && std::isfinite(hi)) {
    step *= 2.0;
    hi += step;
  }
}

double poisson_quantile(double lambda, double p) {
  // Exact CDF inversion throughout. Small rates walk the probability
  // table; larger ones bisect on the incomplete-gamma CDF so e^-lambda
  // underflow never corrupts the walk.
  if (lambda <= 30.0) {
    const double cap = std::ceil(lambda + 40.0 * std::sqrt(lambda) + 60.0);
    double pmf = std::exp(-lambda);
    double cum = pmf;
    double k = 0.0;
    while (cum < p && k < cap) {
      k += 1.0;
      pmf *= lambda / k;
      cum += pmf;
    }
    return k;
  }
  double hi = std::ceil(lambda);
  while (poisson_cdf(lambda, hi) < p) hi = std::ceil(hi * 2.0 + 10.0);
  double lo = -1.0;  // cdf(-1) = 0 < p
  while (hi - lo > 1.0) {
    const double mid = std::floor(0.5 * (lo + hi));
    if (poisson_cdf(lambda, mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double quantile_unchecked(const DistributionSpec& spec, double p) {
  switch (spec.family) {
    case DistributionFamily::kNormal: {
      const double mu = *spec.mu, sigma = *spec.sigma;
      auto c = [&](double x) { return special::std_normal_cdf((x - mu) / sigma); };
      auto d = [&](double x) { return std::exp(normal_log_pdf(mu, sigma, x)); };
      double lo, hi;
      expand_bracket(c, p, mu, sigma, lo, hi);
      return invert_cdf(c, d, p, lo, hi);
    }
    case DistributionFamily::kLogistic:
      return *spec.mu + *spec.sigma * (std::log(p) - std::log1p(-p));
    case DistributionFamily::kTLocationScale: {
      const double mu = *spec.mu, sigma = *spec.sigma, nu = *spec.nu;
      auto c = [&](double x) { return t_cdf(mu, sigma, nu, x); };
      auto d = [&](double x) { return std::exp(t_log_pdf(mu, sigma, nu, x)); };
      double lo, hi;
      expand_bracket(c, p, mu, sigma, lo, hi);
      return invert_cdf(c, d, p, lo, hi);
    }
    case DistributionFamily::kGeneralizedExtremeValue: {
      const double k = *spec.k, sigma = *spec.sigma, mu = *spec.mu;
      if (k == 0.0) return mu - sigma * std::log(-std::log(p));
      return mu + sigma * std::expm1(-k * std::log(-std::log(p))) / k;
    }
    case DistributionFamily::kGeneralizedPareto: {
      const double k = *spec.k, sigma = *spec.sigma, theta = *spec.mu;
      if (k == 0.0) return theta - sigma * std::log1p(-p);
      return theta + sigma * std::expm1(-k * std::log1p(-p)) / k;
    }
    case DistributionFamily::kExtremeValue: {
      const double mu = *spec.mu, sigma = *spec.sigma;
      if (spec.orientation == GumbelOrientation::kMin) {
        return mu + sigma * std::log(-std::log1p(-p));
      }
      return mu - sigma * std::log(-std::log(p));
    }
    case DistributionFamily::kExponential:
      return -*spec.sigma * std::log1p(-p);
    case DistributionFamily::kPoisson:
      return poisson_quantile(*spec.lambda, p);
  }
  throw Error("parameter-domain", "unknown family");
}

}  // namespace

// ---------------------------------------------------------------------------

DistributionSpec normal_spec(double mu, double sigma) {
  DistributionSpec s;
  s.family = DistributionFamily::kNormal;
  s.mu = mu;
  s.sigma = sigma;
  validate(s);
  return s;
}

DistributionSpec logistic_spec(double mu, double sigma) {
  DistributionSpec s;
  s.family = DistributionFamily::kLogistic;
  s.mu = mu;
  s.sigma = sigma;
  validate(s);
  return s;
}

DistributionSpec t_location_scale_spec(double mu, double sigma, double nu) {
  DistributionSpec s;
  s.family = DistributionFamily::kTLocationScale;
  s.mu = mu;
  s.sigma = sigma;
  s.nu = nu;
  validate(s);
  return s;
}

DistributionSpec gev_spec(double k, double sigma, double mu) {
  DistributionSpec s;
  s.family = DistributionFamily::kGeneralizedExtremeValue;
  s.k = k;
  s.sigma = sigma;
  s.mu = mu;
  validate(s);
  return s;
}

DistributionSpec gen_pareto_spec(double k, double sigma, double theta) {
  DistributionSpec s;
  s.family = DistributionFamily::kGeneralizedPareto;
  s.k = k;
  s.sigma = sigma;
  s.mu = theta;
  validate(s);
  return s;
}

DistributionSpec extreme_value_spec(double mu, double sigma, GumbelOrientation orientation) {
  DistributionSpec s;
  s.family = DistributionFamily::kExtremeValue;
  s.mu = mu;
  s.sigma = sigma;
  s.orientation = orientation;
  validate(s);
  return s;
}

DistributionSpec exponential_spec(double sigma) {
  DistributionSpec s;
  s.family = DistributionFamily::kExponential;
  s.sigma = sigma;
  validate(s);
  return s;
}

DistributionSpec poisson_spec(double lambda) {
  DistributionSpec s;
  s.family = DistributionFamily::kPoisson;
  s.lambda = lambda;
  validate(s);
  return s;
}

void validate(const DistributionSpec& spec) {
  const char* fam = nullptr;
  switch (spec.family) {
    case DistributionFamily::kNormal:
    case DistributionFamily::kLogistic:
    case DistributionFamily::kExtremeValue:
      fam = spec.family == DistributionFamily::kNormal     ? "normal"
            : spec.family == DistributionFamily::kLogistic ? "logistic"
                                                           : "extremevalue";
      forbid(spec.k, "k", fam);
      forbid(spec.nu, "nu", fam);
      forbid(spec.lambda, "lambda", fam);
      req(spec.mu, "mu");
      require_positive(req(spec.sigma, "sigma"), "sigma");
      return;
    case DistributionFamily::kTLocationScale:
      forbid(spec.k, "k", "tlocationscale");
      forbid(spec.lambda, "lambda", "tlocationscale");
      req(spec.mu, "mu");
      require_positive(req(spec.sigma, "sigma"), "sigma");
      require_positive(req(spec.nu, "nu"), "nu");
      return;
    case DistributionFamily::kGeneralizedExtremeValue:
    case DistributionFamily::kGeneralizedPareto:
      fam = spec.family == DistributionFamily::kGeneralizedExtremeValue ? "gev" : "genpareto";
      forbid(spec.nu, "nu", fam);
      forbid(spec.lambda, "lambda", fam);
      req(spec.k, "k");
      req(spec.mu, "mu");
      require_positive(req(spec.sigma, "sigma"), "sigma");
      return;
    case DistributionFamily::kExponential:
      forbid(spec.k, "k", "exponential");
      forbid(spec.mu, "mu", "exponential");
      forbid(spec.nu, "nu", "exponential");
      forbid(spec.lambda, "lambda", "exponential");
      require_positive(req(spec.sigma, "sigma"), "sigma");
      return;
    case DistributionFamily::kPoisson:
      forbid(spec.k, "k", "poisson");
      forbid(spec.sigma, "sigma", "poisson");
      forbid(spec.mu, "mu", "poisson");
      forbid(spec.nu, "nu", "poisson");
      require_positive(req(spec.lambda, "lambda"), "lambda");
      return;
  }
  throw Error("parameter-domain", "unknown family");
}

SupportInterval support(const DistributionSpec& spec) {
  validate(spec);
  switch (spec.family) {
    case DistributionFamily::kNormal:
    case DistributionFamily::kLogistic:
    case DistributionFamily::kTLocationScale:
    case DistributionFamily::kExtremeValue:
      return {-kInf, kInf, false, false};
    case DistributionFamily::kExponential:
      return {0.0, kInf, true, false};
    case DistributionFamily::kGeneralizedExtremeValue: {
      const double k = *spec.k;
      if (k > 0.0) return {*spec.mu - *spec.sigma / k, kInf, true, false};
      if (k < 0.0) return {-kInf, *spec.mu - *spec.sigma / k, false, true};
      return {-kInf, kInf, false, false};
    }
    case DistributionFamily::kGeneralizedPareto: {
      const double k = *spec.k, theta = *spec.mu;
      if (k < 0.0) return {theta, theta - *spec.sigma / k, true, true};
      return {theta, kInf, true, false};
    }
    case DistributionFamily::kPoisson:
      return {0.0, kInf, true, false};
  }
  throw Error("parameter-domain", "unknown family");
}

bool in_support(const DistributionSpec& spec, double x) {
  if (spec.family == DistributionFamily::kPoisson && x != std::floor(x)) return false;
  return support(spec).contains(x);
}

double log_pdf(const DistributionSpec& spec, double x) {
  validate(spec);
  check_finite_x(x);
  switch (spec.family) {
    case DistributionFamily::kNormal:
      return normal_log_pdf(*spec.mu, *spec.sigma, x);
    case DistributionFamily::kLogistic:
      return logistic_log_pdf(*spec.mu, *spec.sigma, x);
    case DistributionFamily::kTLocationScale:
      return t_log_pdf(*spec.mu, *spec.sigma, *spec.nu, x);
    case DistributionFamily::kGeneralizedExtremeValue:
      return gev_log_pdf(*spec.k, *spec.sigma, *spec.mu, x);
    case DistributionFamily::kGeneralizedPareto:
      return gpd_log_pdf(*spec.k, *spec.sigma, *spec.mu, x);
    case DistributionFamily::kExtremeValue:
      return gumbel_log_pdf(*spec.mu, *spec.sigma, spec.orientation, x);
    case DistributionFamily::kExponential:
      return exponential_log_pdf(*spec.sigma, x);
    case DistributionFamily::kPoisson:
      if (x != std::floor(x)) throw Error("domain", "Poisson requires integer x");
      return poisson_log_pmf(*spec.lambda, x);
  }
  throw Error("parameter-domain", "unknown family");
}

Eigen::ArrayXd log_pdf(const DistributionSpec& spec, const Eigen::Ref<const Eigen::ArrayXd>& xs) {
  Eigen::ArrayXd out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = log_pdf(spec, xs[i]);
  return out;
}

double pdf(const DistributionSpec& spec, double x) { return std::exp(log_pdf(spec, x)); }

double cdf(const DistributionSpec& spec, double x) {
  validate(spec);
  if (std::isnan(x)) throw Error("domain", "x must not be NaN");
  if (x == kInf) return 1.0;
  if (x == -kInf) return 0.0;
  switch (spec.family) {
    case DistributionFamily::kNormal:
      return special::std_normal_cdf((x - *spec.mu) / *spec.sigma);
    case DistributionFamily::kLogistic:
      return logistic_cdf(*spec.mu, *spec.sigma, x);
    case DistributionFamily::kTLocationScale:
      return t_cdf(*spec.mu, *spec.sigma, *spec.nu, x);
    case DistributionFamily::kGeneralizedExtremeValue:
      return gev_cdf(*spec.k, *spec.sigma, *spec.mu, x);
    case DistributionFamily::kGeneralizedPareto:
      return gpd_cdf(*spec.k, *spec.sigma, *spec.mu, x);
    case DistributionFamily::kExtremeValue:
      return gumbel_cdf(*spec.mu, *spec.sigma, spec.orientation, x);
    case DistributionFamily::kExponential:
      return x < 0.0 ? 0.0 : -std::expm1(-x / *spec.sigma);
    case DistributionFamily::kPoisson:
      return poisson_cdf(*spec.lambda, x);
  }
  throw Error("parameter-domain", "unknown family");
}

double quantile(const DistributionSpec& spec, double p) {
  validate(spec);
  check_probability(p);
  return quantile_unchecked(spec, p);
}

double sample_one(const DistributionSpec& spec, SplitRng& rng) {
  validate(spec);
  return quantile_unchecked(spec, rng.next_uniform());
}

Eigen::ArrayXd sample_n(const DistributionSpec& spec, std::uint64_t seed, std::size_t n) {
  validate(spec);
  SplitRng rng(seed);
  Eigen::ArrayXd out(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = quantile_unchecked(spec, rng.next_uniform());
  return out;
}

std::optional<double> analytic_mean(const DistributionSpec& spec) {
  validate(spec);
  switch (spec.family) {
    case DistributionFamily::kNormal:
    case DistributionFamily::kLogistic:
      return *spec.mu;
    case DistributionFamily::kTLocationScale:
      if (*spec.nu > 1.0) return *spec.mu;
      return std::nullopt;
    case DistributionFamily::kGeneralizedExtremeValue: {
      const double k = *spec.k;
      if (k >= 1.0) return std::nullopt;
      if (k == 0.0) return *spec.mu + *spec.sigma * special::kEulerGamma;
      // (Gamma(1-k) - 1)/k via expm1(lgamma) keeps small shapes accurate.
      return *spec.mu + *spec.sigma * std::expm1(special::log_gamma(1.0 - k)) / k;
    }
    case DistributionFamily::kGeneralizedPareto: {
      const double k = *spec.k;
      if (k >= 1.0) return std::nullopt;
      return *spec.mu + *spec.sigma / (1.0 - k);
    }
    case DistributionFamily::kExtremeValue:
      return spec.orientation == GumbelOrientation::kMin
                 ? *spec.mu - *spec.sigma * special::kEulerGamma
                 : *spec.mu + *spec.sigma * special::kEulerGamma;
    case DistributionFamily::kExponential:
      return *spec.sigma;
    case DistributionFamily::kPoisson:
      return *spec.lambda;
  }
  throw Error("parameter-domain", "unknown family");
}

int param_count(DistributionFamily family) {
  switch (family) {
    case DistributionFamily::kNormal:
    case DistributionFamily::kLogistic:
    case DistributionFamily::kExtremeValue:
    case DistributionFamily::kGeneralizedPareto:  // threshold held fixed
      return 2;
    case DistributionFamily::kTLocationScale:
    case DistributionFamily::kGeneralizedExtremeValue:
      return 3;
    case DistributionFamily::kExponential:
    case DistributionFamily::kPoisson:
      return 1;
  }
  throw Error("parameter-domain", "unknown family");
}

bool is_continuous(DistributionFamily family) {
  return family != DistributionFamily::kPoisson;
}

std::string family_tag(DistributionFamily family) {
  switch (family) {
    case DistributionFamily::kNormal:
      return "normal";
    case DistributionFamily::kLogistic:
      return "logistic";
    case DistributionFamily::kTLocationScale:
      return "tlocationscale";
    case DistributionFamily::kGeneralizedExtremeValue:
      return "gev";
    case DistributionFamily::kGeneralizedPareto:
      return "genpareto";
    case DistributionFamily::kExtremeValue:
      return "extremevalue";
    case DistributionFamily::kExponential:
      return "exponential";
    case DistributionFamily::kPoisson:
      return "poisson";
  }
  throw Error("parameter-domain", "unknown family");
}

DistributionFamily family_from_tag(const std::string& tag) {
  if (tag == "normal") return DistributionFamily::kNormal;
  if (tag == "logistic") return DistributionFamily::kLogistic;
  if (tag == "tlocationscale") return DistributionFamily::kTLocationScale;
  if (tag == "gev") return DistributionFamily::kGeneralizedExtremeValue;
  if (tag == "genpareto") return DistributionFamily::kGeneralizedPareto;
  if (tag == "extremevalue") return DistributionFamily::kExtremeValue;
  if (tag == "exponential") return DistributionFamily::kExponential;
  if (tag == "poisson") return DistributionFamily::kPoisson;
  throw Error("parse", "unknown family tag \"" + tag + "\"");
}

}  // namespace muxstat
