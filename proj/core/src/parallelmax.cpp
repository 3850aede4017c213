#include "parmax/parallelmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parmax/errors.hpp"
#include "parmax/mathutil.hpp"
#include "parmax/rng.hpp"

namespace parmax {

void DiscretePmf::validate() const {
  if (values.empty()) throw ValidationError("pmf: empty support");
  if (values.size() != probs.size()) throw ValidationError("pmf: values/probs size mismatch");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw ValidationError("pmf: support must be strictly ascending");
  }
  double total = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) throw ValidationError("pmf: probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("pmf: probabilities must sum to 1");
}

double DiscretePmf::cdf(double x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= x) total += probs[i];
  }
  return std::min(total, 1.0);
}

double DiscretePmf::mean() const {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) total += values[i] * probs[i];
  return total;
}

DiscretePmf DiscretePmf::fair_die(int sides) {
  if (sides < 1) throw ValidationError("fair_die: sides must be positive");
  DiscretePmf pmf;
  pmf.values.resize(static_cast<std::size_t>(sides));
  pmf.probs.assign(static_cast<std::size_t>(sides), 1.0 / sides);
  std::iota(pmf.values.begin(), pmf.values.end(), 1.0);
  return pmf;
}

namespace {

void check_k(int k) {
  if (k < 1) throw ValidationError("max-of-k: k must be at least 1");
}

double component_cdf(const Component& component, double x) {
  if (const auto* pmf = std::get_if<DiscretePmf>(&component)) return pmf->cdf(x);
  const auto& ln = std::get<LogNormalParams>(component);
  if (x <= 0.0) return 0.0;
  return normal_cdf((std::log(x) - ln.mu) / ln.sigma);
}

}  // namespace

double cdf_max(const MaxOfK& m, double x) {
  check_k(m.k);
  return std::pow(component_cdf(m.component, x), m.k);
}

double expected_max_discrete(const MaxOfK& m) {
  check_k(m.k);
  const auto* pmf = std::get_if<DiscretePmf>(&m.component);
  if (pmf == nullptr) throw ValidationError("expected_max_discrete: component is not discrete");
  pmf->validate();
  double mean = 0.0;
  double prev_cdf_pow = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < pmf->values.size(); ++i) {
    cum += pmf->probs[i];
    const double cdf_pow = std::pow(std::min(cum, 1.0), m.k);
    mean += pmf->values[i] * (cdf_pow - prev_cdf_pow);
    prev_cdf_pow = cdf_pow;
  }
  return mean;
}

namespace {

std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::int64_t>::max() / base)
      throw ValidationError("expected_max_fair_die: sides^k overflows 64-bit arithmetic");
    out *= base;
  }
  return out;
}

}  // namespace

boost::rational<std::int64_t> expected_max_fair_die(int sides, int k) {
  if (sides < 1) throw ValidationError("expected_max_fair_die: sides must be positive");
  check_k(k);
  const std::int64_t denom = checked_pow(sides, k);
  boost::rational<std::int64_t> mean(0);
  for (std::int64_t v = 1; v <= sides; ++v) {
    const std::int64_t weight = checked_pow(v, k) - checked_pow(v - 1, k);
    mean += boost::rational<std::int64_t>(v * weight, denom);
  }
  return mean;
}

MonteCarloEstimate expected_max_mc(const MaxOfK& m, std::size_t samples, std::uint64_t seed) {
  check_k(m.k);
  if (samples < 2) throw ValidationError("expected_max_mc: need at least 2 samples");
  if (const auto* pmf = std::get_if<DiscretePmf>(&m.component)) pmf->validate();

  Rng rng(seed);
  auto draw_component = [&]() {
    if (const auto* pmf = std::get_if<DiscretePmf>(&m.component)) {
      const double u = rng.uniform01();
      double cum = 0.0;
      for (std::size_t i = 0; i < pmf->values.size(); ++i) {
        cum += pmf->probs[i];
        if (u <= cum) return pmf->values[i];
      }
      return pmf->values.back();
    }
    const auto& ln = std::get<LogNormalParams>(m.component);
    return rng.lognormal(ln.mu, ln.sigma);
  };

  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double top = draw_component();
    for (int j = 1; j < m.k; ++j) top = std::max(top, draw_component());
    sum += top;
    sum_sq += top * top;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

double median_max_lognormal(const LogNormalParams& p, int k) {
  check_k(k);
  if (!(p.sigma >= 0.0)) throw ValidationError("median_max_lognormal: sigma must be non-negative");
  const double q = std::pow(2.0, -1.0 / k);
  return std::exp(p.mu + p.sigma * probit(q));
}

double predict_inflation(const LogNormalParams& p, int k) {
  check_k(k);
  if (!(p.sigma >= 0.0)) throw ValidationError("predict_inflation: sigma must be non-negative");
  const double q = std::pow(2.0, -1.0 / k);
  return std::exp(p.sigma * probit(q)) - 1.0;
}

double ks_distance_max(const MaxOfK& m, std::vector<double> samples) {
  check_k(m.k);
  if (samples.empty()) throw ValidationError("ks_distance_max: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf_max(m, samples[i]);
    const double above = (static_cast<double>(i) + 1.0) / n - f;
    const double below = f - static_cast<double>(i) / n;
    dist = std::max({dist, above, below});
  }
  return dist;
}

}  // namespace parmax
