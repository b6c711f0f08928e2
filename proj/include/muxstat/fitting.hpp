#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <vector>

#include "muxstat/distributions.hpp"

namespace muxstat {

struct FitResult {
  DistributionSpec spec;
  double log_likelihood = 0.0;
  double bic = 0.0;
  std::size_t n = 0;
  int param_count = 0;
  bool converged = true;
  int iterations = 0;
};

struct SkippedFit {
  DistributionFamily family = DistributionFamily::kNormal;
  std::string reason;
};

// Entries sorted by bic ascending; ties broken by smaller param_count,
// then family tag.
struct FitRanking {
  std::string label;
  std::vector<FitResult> entries;
  std::vector<SkippedFit> skipped;
};

// param_count * ln(n) - 2 * log_likelihood; smaller is better.
double bic_score(double log_likelihood, int param_count, std::size_t n);

// Sum of log_pdf over samples; -inf if any sample leaves the support.
double log_likelihood(const DistributionSpec& spec, const Eigen::Ref<const Eigen::ArrayXd>& samples);

FitResult fit_mle(DistributionFamily family, const Eigen::Ref<const Eigen::ArrayXd>& samples);

FitRanking rank_catalog(const Eigen::Ref<const Eigen::ArrayXd>& samples,
                        const std::vector<DistributionFamily>& families, std::string label);

// All eight families.
FitRanking rank_catalog(const Eigen::Ref<const Eigen::ArrayXd>& samples, std::string label);

std::vector<DistributionFamily> full_catalog();

}  // namespace muxstat
