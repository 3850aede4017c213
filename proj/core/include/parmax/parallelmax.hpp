#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "parmax/tiers.hpp"

namespace parmax {

// Discrete PMF over an ascending support. Probabilities must be positive and
// sum to 1 within 1e-12.
struct DiscretePmf {
  std::vector<double> values;
  std::vector<double> probs;

  void validate() const;  // throws ValidationError
  double cdf(double x) const;
  double mean() const;

  static DiscretePmf fair_die(int sides);
};

using Component = std::variant<DiscretePmf, LogNormalParams>;

// Max of k independent, identically distributed components: the fan-out
// phase of the pipeline in miniature.
struct MaxOfK {
  Component component;
  int k = 1;
};

// CDF of the max: F(x)^k.
double cdf_max(const MaxOfK& m, double x);

// Exact expectation for discrete components: sum of x * (F(x)^k - F(x-)^k).
double expected_max_discrete(const MaxOfK& m);

// Same expectation in exact rational arithmetic for a fair s-sided die:
// sum of v * (v^k - (v-1)^k) / s^k.
boost::rational<std::int64_t> expected_max_fair_die(int sides, int k);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

MonteCarloEstimate expected_max_mc(const MaxOfK& m, std::size_t samples, std::uint64_t seed);

// Median of the max of k iid log-normals: F(x)^k = 1/2 at the component's
// 2^(-1/k) quantile.
double median_max_lognormal(const LogNormalParams& p, int k);

// Predicted parallel-phase inflation for k iid log-normal components:
// median(max) / median(component) - 1 = exp(sigma * probit(2^(-1/k))) - 1.
// Zero when sigma is zero; strictly increasing in sigma.
double predict_inflation(const LogNormalParams& p, int k);

// Kolmogorov-Smirnov distance between an empirical sample and the analytic
// max-of-k CDF. Small (< ~1.4/sqrt(n)) when the identity F_max = F^k holds.
double ks_distance_max(const MaxOfK& m, std::vector<double> samples);

}  // namespace parmax
