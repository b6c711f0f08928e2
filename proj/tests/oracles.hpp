#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <vector>

// Independent reference implementations used to cross-check the library:
// deliberately written with different algorithms than the code under test.
namespace oracles {

// Recursive adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

// sup |F_n - F| against a continuous CDF.
double ks_continuous(std::vector<double> samples, const std::function<double(double)>& cdf);

// sup over integer points of |F_n - F| for non-negative integer data.
double ks_discrete(const std::vector<double>& samples, const std::function<double(double)>& cdf);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

// Brute-force structure-function Hurst estimate (nested loops, no Eigen).
double hurst_brute(const std::vector<double>& x, double q, int tau_min, int tau_max);

// Smallest k with sum_{j<=k} pmf(j; lambda) >= p, summed in long double.
double poisson_quantile_brute(double lambda, double p);

struct TwoPointPid {
  double value_a = 0.0;
  double prob_a = 0.5;
  double value_b = 0.0;  // drawn with probability 1 - prob_a
};

// Exact demand distribution for Poisson-count groups with two-point PIDs
// (Poisson tails truncated below 1e-12). Returns value -> probability.
std::map<double, double> enumerate_demand(const std::vector<std::pair<double, TwoPointPid>>& groups,
                                          bool shared_pid);

// sup over the oracle's support of |empirical CDF - exact CDF|.
double ks_against_enumeration(const std::vector<double>& totals,
                              const std::map<double, double>& dist);

}  // namespace oracles
