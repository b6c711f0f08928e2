#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>

#include "muxstat/rng.hpp"

namespace muxstat {

/// The eight catalog families. Tags map 1:1 onto the lowercase JSON
/// strings ("normal", ..., "poisson"); anything else is rejected at
/// parse time.
enum class DistributionFamily {
  kNormal,
  kLogistic,
  kTLocationScale,
  kGeneralizedExtremeValue,
  kGeneralizedPareto,
  kExtremeValue,
  kExponential,
  kPoisson,
};

/// Gumbel orientation for the extreme value family. Minimum is the
/// default and the only orientation that participates in fitting,
/// ranking, and the JSON form.
enum class GumbelOrientation { kMin, kMax };

/// A family tag plus exactly the parameters that family uses. Unused
/// parameters stay unset; validation rejects any mismatch.
///   k      shape (GEV, GenPareto), dimensionless
///   sigma  scale > 0, Kbps for traffic series
///   mu     location, Kbps (the GenPareto threshold)
///   nu     degrees of freedom > 0 (t location-scale)
///   lambda rate > 0 (Poisson)
struct DistributionSpec {
  DistributionFamily family = DistributionFamily::kNormal;
  std::optional<double> k;
  std::optional<double> sigma;
  std::optional<double> mu;
  std::optional<double> nu;
  std::optional<double> lambda;
  GumbelOrientation orientation = GumbelOrientation::kMin;
};

/// Validated constructors for each family.
DistributionSpec normal_spec(double mu, double sigma);
DistributionSpec logistic_spec(double mu, double sigma);
DistributionSpec t_location_scale_spec(double mu, double sigma, double nu);
DistributionSpec gev_spec(double k, double sigma, double mu);
DistributionSpec gen_pareto_spec(double k, double sigma, double theta);
DistributionSpec extreme_value_spec(double mu, double sigma,
                                    GumbelOrientation orientation = GumbelOrientation::kMin);
DistributionSpec exponential_spec(double sigma);
DistributionSpec poisson_spec(double lambda);

/// Throws Error("parameter-domain", ...) unless the spec satisfies the
/// family's parameter-set and positivity invariants.
void validate(const DistributionSpec& spec);

/// Extended-real support interval. Infinite endpoints are always open.
struct SupportInterval {
  double lower;
  double upper;
  bool lower_closed;
  bool upper_closed;

  bool contains(double x) const {
    if (x < lower || x > upper) return false;
    if (x == lower && !lower_closed) return false;
    if (x == upper && !upper_closed) return false;
    return true;
  }
};

SupportInterval support(const DistributionSpec& spec);

/// True when x belongs to the support, including the integrality
/// restriction for Poisson.
bool in_support(const DistributionSpec& spec, double x);

/// Density in 1/Kbps (probability mass for Poisson). Zero outside the
/// support. Poisson rejects non-integer x with a domain error.
double pdf(const DistributionSpec& spec, double x);

/// ln pdf; -inf outside the support, finite and correct where the
/// density underflows to zero in double precision.
double log_pdf(const DistributionSpec& spec, double x);

Eigen::ArrayXd log_pdf(const DistributionSpec& spec,
                       const Eigen::Ref<const Eigen::ArrayXd>& xs);

double cdf(const DistributionSpec& spec, double x);

/// Inverse CDF for p in (0, 1). Closed form where one exists; bracketed
/// root-finding at 1e-10 relative tolerance for normal and t
/// location-scale; smallest integer with cdf >= p for Poisson.
double quantile(const DistributionSpec& spec, double p);

/// n inverse-transform samples over a SplitRng(seed) stream. Identical
/// (spec, seed, n) gives identical output.
Eigen::ArrayXd sample_n(const DistributionSpec& spec, std::uint64_t seed, std::size_t n);

/// One inverse-transform draw from `rng`.
double sample_one(const DistributionSpec& spec, SplitRng& rng);

/// Analytic mean in Kbps, or nullopt where the mean does not exist
/// (GEV/GenPareto k >= 1, t location-scale nu <= 1).
std::optional<double> analytic_mean(const DistributionSpec& spec);

/// Number of free parameters the MLE fits (GenPareto counts 2; its
/// threshold is held fixed).
int param_count(DistributionFamily family);

bool is_continuous(DistributionFamily family);

/// Lowercase JSON tag, e.g. "tlocationscale".
std::string family_tag(DistributionFamily family);

/// Inverse of family_tag; throws Error("parse", ...) on unknown tags.
DistributionFamily family_from_tag(const std::string& tag);

}  // namespace muxstat
