#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "muxstat/common.hpp"
#include "muxstat/distributions.hpp"
#include "oracles.hpp"

using namespace muxstat;

namespace {

void check_rel(double got, double want, double tol = 1e-12) {
  CHECK(std::fabs(got - want) <= tol * std::max(1.0, std::fabs(want)));
}

// Fitted parameter sets exercised throughout: a heavy-tailed channel-level
// set and a pooled-data set for each family that has one.
DistributionSpec channel_t() { return t_location_scale_spec(1644.76, 454.92, 4.137); }
DistributionSpec channel_logistic() { return logistic_spec(1660.73, 325.24); }
DistributionSpec channel_normal() { return normal_spec(1696.09, 607.21); }
DistributionSpec channel_gev() { return gev_spec(-0.19, 587.27, 1460.07); }
DistributionSpec pooled_gev() { return gev_spec(0.06, 1167.89, 1965.89); }
DistributionSpec pooled_gpd() { return gen_pareto_spec(-0.47, 3820.24, -2.22e-15); }

std::vector<DistributionSpec> representative_specs() {
  return {channel_normal(),
          channel_logistic(),
          channel_t(),
          channel_gev(),
          pooled_gev(),
          pooled_gpd(),
          extreme_value_spec(2000.0, 500.0),
          extreme_value_spec(2000.0, 500.0, GumbelOrientation::kMax),
          exponential_spec(2000.0)};
}

}  // namespace

TEST_CASE("factory validation rejects bad parameters") {
  CHECK_THROWS_AS(normal_spec(0.0, 0.0), Error);
  CHECK_THROWS_AS(normal_spec(0.0, -1.0), Error);
  CHECK_THROWS_AS(t_location_scale_spec(0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(exponential_spec(-2.0), Error);
  CHECK_THROWS_AS(poisson_spec(0.0), Error);
  CHECK_THROWS_AS(gev_spec(std::nan(""), 1.0, 0.0), Error);

  DistributionSpec s;
  s.family = DistributionFamily::kNormal;
  s.sigma = 1.0;
  CHECK_THROWS_AS(validate(s), Error);  // missing mu
  s.mu = 0.0;
  s.lambda = 3.0;  // normal takes no lambda
  CHECK_THROWS_AS(validate(s), Error);
}

TEST_CASE("density spot values") {
  check_rel(pdf(normal_spec(0.0, 1.0), 0.0), 0.39894228040143268);
  check_rel(pdf(channel_t(), 1644.76), 0.00082598206829747822);
  check_rel(pdf(t_location_scale_spec(0.0, 1.0, 4.137), 0.0), 0.37575576250988879);
  check_rel(pdf(channel_logistic(), 1660.73 + 325.24), 0.00060451338470508502);
  check_rel(pdf(pooled_gev(), 1965.89), 3.1499494059495528e-4);  // e^-1 / sigma
  check_rel(log_pdf(pooled_gev(), 1965.89 + 50.0 * 1167.89), -31.55415436074808);
  check_rel(pdf(extreme_value_spec(2000.0, 500.0), 2300.0), 0.00058921059070775884);
}

TEST_CASE("cdf spot values") {
  check_rel(cdf(t_location_scale_spec(0.0, 1.0, 4.137), 1.0), 0.81392298401841214);
  check_rel(cdf(t_location_scale_spec(0.0, 1.0, 4.137), -2.5), 0.032356326543639746);
  check_rel(cdf(t_location_scale_spec(0.0, 1.0, 121.73), 0.7), 0.75736853453835543);
  check_rel(cdf(extreme_value_spec(2000.0, 500.0), 2300.0), 0.83831718585487355);
  check_rel(cdf(poisson_spec(2.5), 3.0), 0.75757613313306596);
  check_rel(cdf(poisson_spec(100.0), 100.0), 0.52656219852999847);
  CHECK(cdf(pooled_gpd(), 8128.17) >= 0.9999999999999999);
  CHECK(cdf(pooled_gpd(), -1.0) == 0.0);
}

TEST_CASE("poisson pmf and integrality") {
  check_rel(pdf(poisson_spec(2.5), 4.0), 0.13360188578108528);
  CHECK(pdf(poisson_spec(2.5), -3.0) == 0.0);
  CHECK_THROWS_AS(pdf(poisson_spec(2.5), 1.5), Error);
  CHECK(in_support(poisson_spec(2.5), 4.0));
  CHECK_FALSE(in_support(poisson_spec(2.5), 4.5));
  CHECK_FALSE(in_support(poisson_spec(2.5), -1.0));
}

TEST_CASE("quantile spot values") {
  check_rel(quantile(normal_spec(0.0, 1.0), 0.975), 1.9599639845400542, 1e-9);
  check_rel(quantile(extreme_value_spec(2000.0, 500.0), 0.25), 1377.0503381463809);
  check_rel(quantile(logistic_spec(0.0, 1.0), 0.5), 0.0, 1e-12);
  CHECK(quantile(poisson_spec(2.5), 0.75757613313306596) == 3.0);
}

TEST_CASE("support intervals") {
  const SupportInterval gev_pos = support(pooled_gev());
  check_rel(gev_pos.lower, -17498.943333333333, 1e-12);
  CHECK(gev_pos.lower_closed);
  CHECK(std::isinf(gev_pos.upper));

  const SupportInterval gev_neg = support(channel_gev());
  CHECK(std::isinf(gev_neg.lower));
  check_rel(gev_neg.upper, 1460.07 + 587.27 / 0.19, 1e-12);
  CHECK(gev_neg.upper_closed);

  const SupportInterval gpd = support(pooled_gpd());
  check_rel(gpd.upper, 8128.1702127659574, 1e-12);
  CHECK(gpd.lower_closed);
  CHECK(gpd.upper_closed);
  CHECK(in_support(pooled_gpd(), gpd.upper));
  CHECK_FALSE(in_support(pooled_gpd(), gpd.upper + 1.0));

  CHECK(support(exponential_spec(1.0)).lower == 0.0);
  CHECK(std::isinf(support(normal_spec(0.0, 1.0)).lower));
}

TEST_CASE("analytic means") {
  check_rel(*analytic_mean(channel_normal()), 1696.09);
  check_rel(*analytic_mean(channel_logistic()), 1660.73);
  check_rel(*analytic_mean(channel_t()), 1644.76);
  check_rel(*analytic_mean(pooled_gev()), 2713.3998058188287);
  check_rel(*analytic_mean(pooled_gpd()), -2.22e-15 + 3820.24 / 1.47);
  check_rel(*analytic_mean(exponential_spec(2000.0)), 2000.0);
  check_rel(*analytic_mean(poisson_spec(7.5)), 7.5);
  check_rel(*analytic_mean(extreme_value_spec(2000.0, 500.0)), 1711.3921675492336);
  check_rel(*analytic_mean(extreme_value_spec(2000.0, 500.0, GumbelOrientation::kMax)),
            2000.0 + 500.0 * 0.57721566490153286);

  CHECK_FALSE(analytic_mean(t_location_scale_spec(0.0, 1.0, 0.9)).has_value());
  CHECK_FALSE(analytic_mean(t_location_scale_spec(0.0, 1.0, 1.0)).has_value());
  CHECK_FALSE(analytic_mean(gev_spec(1.0, 1.0, 0.0)).has_value());
  CHECK_FALSE(analytic_mean(gen_pareto_spec(1.2, 1.0, 0.0)).has_value());
}

TEST_CASE("analytic means match quadrature") {
  for (const DistributionSpec& spec : representative_specs()) {
    const std::optional<double> mean = analytic_mean(spec);
    REQUIRE(mean.has_value());
    const SupportInterval sup = support(spec);
    double lo = quantile(spec, 1e-9);
    double hi = quantile(spec, 1.0 - 1e-9);
    if (std::isfinite(sup.lower)) lo = std::max(lo, sup.lower);
    if (std::isfinite(sup.upper)) hi = std::min(hi, sup.upper);
    const double got = oracles::integrate([&](double x) { return x * pdf(spec, x); }, lo, hi,
                                          1e-10 * std::fabs(*mean));
    CHECK(std::fabs(got - *mean) <= 1e-4 * std::fabs(*mean));
  }
}

TEST_CASE("densities integrate to one") {
  for (const DistributionSpec& spec :
       {channel_t(), pooled_gev(), pooled_gpd(), extreme_value_spec(2000.0, 500.0)}) {
    const SupportInterval sup = support(spec);
    double lo = quantile(spec, 1e-9);
    double hi = quantile(spec, 1.0 - 1e-9);
    if (std::isfinite(sup.lower)) lo = std::max(lo, sup.lower);
    if (std::isfinite(sup.upper)) hi = std::min(hi, sup.upper);
    const double mass = oracles::integrate([&](double x) { return pdf(spec, x); }, lo, hi, 1e-10);
    CHECK(std::fabs(mass - 1.0) <= 1e-6);
  }
}

TEST_CASE("cdf differentiates to pdf") {
  for (const DistributionSpec& spec : representative_specs()) {
    const double scale = *spec.sigma;
    const double h = 1e-5 * scale;
    for (int i = 1; i <= 19; ++i) {
      const double p = 0.05 * i;
      const double x = quantile(spec, p);
      const double d = (cdf(spec, x + h) - cdf(spec, x - h)) / (2.0 * h);
      const double f = pdf(spec, x);
      if (f > 1e-300) CHECK(std::fabs(d - f) <= 1e-4 * f);
    }
  }
}

TEST_CASE("quantile and cdf are inverse") {
  for (const DistributionSpec& spec : representative_specs()) {
    for (double p : {0.001, 0.05, 0.25, 0.5, 0.75, 0.95, 0.999}) {
      const double x = quantile(spec, p);
      check_rel(cdf(spec, x), p, 1e-8);
      const double x2 = quantile(spec, cdf(spec, x));
      CHECK(std::fabs(x2 - x) <= 1e-8 * std::max(1.0, std::fabs(x)));
    }
  }
}

TEST_CASE("gev at k=0 equals the max-oriented gumbel") {
  const DistributionSpec gev0 = gev_spec(0.0, 500.0, 2000.0);
  const DistributionSpec gum = extreme_value_spec(2000.0, 500.0, GumbelOrientation::kMax);
  for (double x : {500.0, 1500.0, 2000.0, 2500.0, 4000.0}) {
    CHECK(pdf(gev0, x) == pdf(gum, x));
    CHECK(cdf(gev0, x) == cdf(gum, x));
  }
}

TEST_CASE("small-shape limits approach the nested families") {
  const DistributionSpec gev_eps = gev_spec(1e-9, 500.0, 2000.0);
  const DistributionSpec gum = extreme_value_spec(2000.0, 500.0, GumbelOrientation::kMax);
  const DistributionSpec gpd_eps = gen_pareto_spec(1e-9, 800.0, 0.0);
  const DistributionSpec expo = exponential_spec(800.0);
  for (double p : {0.05, 0.3, 0.5, 0.8, 0.99}) {
    const double xg = quantile(gum, p);
    CHECK(std::fabs(cdf(gev_eps, xg) - p) <= 1e-6);
    const double xe = quantile(expo, p);
    CHECK(std::fabs(cdf(gpd_eps, xe) - p) <= 1e-6);
  }
}

TEST_CASE("gumbel orientations mirror each other") {
  const DistributionSpec mn = extreme_value_spec(2000.0, 500.0);
  const DistributionSpec mx = extreme_value_spec(2000.0, 500.0, GumbelOrientation::kMax);
  for (double d : {-900.0, -250.0, 0.0, 250.0, 900.0}) {
    CHECK(std::fabs(pdf(mn, 2000.0 + d) - pdf(mx, 2000.0 - d)) <= 1e-15);
    CHECK(std::fabs(cdf(mn, 2000.0 + d) - (1.0 - cdf(mx, 2000.0 - d))) <= 1e-12);
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  const DistributionSpec spec = pooled_gev();
  const Eigen::ArrayXd a = sample_n(spec, 7, 256);
  const Eigen::ArrayXd b = sample_n(spec, 7, 256);
  const Eigen::ArrayXd c = sample_n(spec, 8, 256);
  CHECK((a == b).all());
  CHECK(!(a == c).all());
}

TEST_CASE("samples stay inside the support") {
  for (const DistributionSpec& spec : {pooled_gev(), pooled_gpd(), exponential_spec(100.0)}) {
    const Eigen::ArrayXd xs = sample_n(spec, 3, 4000);
    for (Eigen::Index i = 0; i < xs.size(); ++i) CHECK(in_support(spec, xs[i]));
  }
}

TEST_CASE("sampler matches the analytic cdf") {
  const std::size_t n = 20000;
  const double bound = 1.63 / std::sqrt(static_cast<double>(n));
  for (const DistributionSpec& spec :
       {channel_normal(), channel_t(), pooled_gev(), exponential_spec(2000.0)}) {
    const Eigen::ArrayXd xs = sample_n(spec, 11, n);
    std::vector<double> v(xs.data(), xs.data() + xs.size());
    const double d = oracles::ks_continuous(v, [&](double x) { return cdf(spec, x); });
    CHECK(d < bound);
  }
  const DistributionSpec pois = poisson_spec(6.5);
  const Eigen::ArrayXd xs = sample_n(pois, 11, n);
  std::vector<double> v(xs.data(), xs.data() + xs.size());
  CHECK(oracles::ks_discrete(v, [&](double x) { return cdf(pois, x); }) < bound);
}

TEST_CASE("poisson quantile matches brute-force summation") {
  for (double lambda : {0.5, 2.5, 29.5, 30.5, 45.0, 100.0}) {
    const DistributionSpec spec = poisson_spec(lambda);
    for (double p : {0.001, 0.1, 0.5, 0.9, 0.999}) {
      CHECK(quantile(spec, p) == oracles::poisson_quantile_brute(lambda, p));
    }
  }
}

TEST_CASE("probability arguments are validated") {
  const DistributionSpec spec = normal_spec(0.0, 1.0);
  CHECK_THROWS_AS(quantile(spec, 0.0), Error);
  CHECK_THROWS_AS(quantile(spec, 1.0), Error);
  CHECK_THROWS_AS(quantile(spec, -0.5), Error);
  CHECK_THROWS_AS(quantile(spec, std::nan("")), Error);
  CHECK_THROWS_AS(pdf(spec, std::numeric_limits<double>::infinity()), Error);
  CHECK(cdf(spec, std::numeric_limits<double>::infinity()) == 1.0);
  CHECK(cdf(spec, -std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("array log_pdf agrees with scalar") {
  const DistributionSpec spec = channel_t();
  Eigen::ArrayXd xs(5);
  xs << 100.0, 1000.0, 1644.76, 2500.0, 9000.0;
  const Eigen::ArrayXd lp = log_pdf(spec, xs);
  for (Eigen::Index i = 0; i < xs.size(); ++i) CHECK(lp[i] == log_pdf(spec, xs[i]));
}

TEST_CASE("family tags round-trip") {
  for (DistributionFamily f :
       {DistributionFamily::kNormal, DistributionFamily::kLogistic,
        DistributionFamily::kTLocationScale, DistributionFamily::kGeneralizedExtremeValue,
        DistributionFamily::kGeneralizedPareto, DistributionFamily::kExtremeValue,
        DistributionFamily::kExponential, DistributionFamily::kPoisson}) {
    CHECK(family_from_tag(family_tag(f)) == f);
  }
  CHECK_THROWS_AS(family_from_tag("cauchy"), Error);
}

TEST_CASE("parameter counts") {
  CHECK(param_count(DistributionFamily::kNormal) == 2);
  CHECK(param_count(DistributionFamily::kLogistic) == 2);
  CHECK(param_count(DistributionFamily::kTLocationScale) == 3);
  CHECK(param_count(DistributionFamily::kGeneralizedExtremeValue) == 3);
  CHECK(param_count(DistributionFamily::kGeneralizedPareto) == 2);
  CHECK(param_count(DistributionFamily::kExtremeValue) == 2);
  CHECK(param_count(DistributionFamily::kExponential) == 1);
  CHECK(param_count(DistributionFamily::kPoisson) == 1);
  CHECK(is_continuous(DistributionFamily::kNormal));
  CHECK_FALSE(is_continuous(DistributionFamily::kPoisson));
}
