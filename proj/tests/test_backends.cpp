#include "parmax/backend.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "parmax/errors.hpp"
#include "parmax/mathutil.hpp"
#include "parmax/rng.hpp"
#include "parmax/tiers.hpp"
#include "parmax/token_bucket.hpp"
#include "test_util.hpp"

using namespace parmax;

namespace {

double median_of_draws(std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  return draws[draws.size() / 2];
}

AgentCall call_for(AgentRole role, int in_flight, double start = 0.0, std::int64_t tokens = 100) {
  AgentCall c;
  c.role = role;
  c.query_id = "q";
  c.tokens_in = tokens;
  c.tokens_out = tokens / 10;
  c.in_flight = in_flight;
  c.start_time_s = start;
  return c;
}

}  // namespace

TEST_SUITE("backends") {

TEST_CASE("probit inverts the normal CDF") {
  CHECK(probit(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(probit(normal_cdf(1.96)) == doctest::Approx(1.96).epsilon(1e-9));
  CHECK(probit(normal_cdf(-2.5)) == doctest::Approx(-2.5).epsilon(1e-9));
  CHECK(probit(0.95) == doctest::Approx(kZ95).epsilon(1e-4));
  CHECK_THROWS_AS(probit(0.0), ValidationError);
  CHECK_THROWS_AS(probit(1.0), ValidationError);
}

TEST_CASE("random streams are reproducible and well-ranged") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform01();
    CHECK(u == b.uniform01());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != c.next_u64());
  for (int i = 0; i < 100; ++i) CHECK(a.below(7) < 7);
  CHECK_THROWS_AS(a.below(0), ValidationError);

  std::vector<int> items{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> copy = items;
  Rng s1(9), s2(9);
  s1.shuffle(items);
  s2.shuffle(copy);
  CHECK(items == copy);
  std::sort(items.begin(), items.end());
  CHECK(items == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("seed derivation separates labels and roots") {
  CHECK(derive_seed(42, "standard:c1") == derive_seed(42, "standard:c1"));
  CHECK(derive_seed(42, "standard:c1") != derive_seed(42, "standard:c5"));
  CHECK(derive_seed(42, "standard:c1") != derive_seed(43, "standard:c1"));
  CHECK(derive_seed(42, "priority:c1") != derive_seed(42, "standard:c1"));
}

TEST_CASE("quantile fit reproduces the given median and P95 analytically") {
  const LogNormalParams p = calibrate_lognormal(3.7, 5.5);
  CHECK(p.mu == doctest::Approx(std::log(3.7)).epsilon(1e-12));
  CHECK(p.sigma == doctest::Approx(0.2410).epsilon(1e-3));
  CHECK(p.median() == doctest::Approx(3.7).epsilon(1e-12));
  CHECK(p.p95() == doctest::Approx(5.5).epsilon(1e-9));
}

TEST_CASE("degenerate fit has zero spread; inverted quantiles are rejected") {
  CHECK(calibrate_lognormal(2.0, 2.0).sigma == 0.0);
  CHECK_THROWS_AS(calibrate_lognormal(3.0, 2.9), ValidationError);
  CHECK_THROWS_AS(calibrate_lognormal(0.0, 2.9), ValidationError);
}

TEST_CASE("sampled draws from a fitted distribution reproduce both quantiles") {
  const LogNormalParams p = calibrate_lognormal(2.8, 4.7);
  Rng rng(123);
  std::vector<double> draws(200'000);
  for (double& d : draws) d = rng.lognormal(p.mu, p.sigma);
  std::sort(draws.begin(), draws.end());
  const double med = draws[draws.size() / 2];
  const double p95 = draws[static_cast<std::size_t>(std::ceil(0.95 * draws.size())) - 1];
  CHECK(std::fabs(med - 2.8) <= 0.02 * 2.8);
  CHECK(std::fabs(p95 - 4.7) <= 0.03 * 4.7);
}

TEST_CASE("token bucket grants from burst then delays at the refill rate") {
  TokenBucket bucket(5.0, 10.0);
  CHECK(bucket.acquire(10.0, 0.0) == doctest::Approx(0.0));  // burst covers it
  CHECK(bucket.acquire(5.0, 0.0) == doctest::Approx(1.0));   // 5 tokens at 5/s
  CHECK(bucket.acquire(5.0, 0.0) == doctest::Approx(2.0));   // queued FIFO behind the last
  CHECK(bucket.available(2.0) == doctest::Approx(0.0));
  CHECK(bucket.available(4.0) == doctest::Approx(10.0));     // refilled, capped at burst
}

TEST_CASE("token bucket with idle time refills before granting") {
  TokenBucket bucket(10.0, 20.0);
  CHECK(bucket.acquire(20.0, 0.0) == doctest::Approx(0.0));
  CHECK(bucket.acquire(10.0, 1.0) == doctest::Approx(0.0));  // 1 s idle refilled 10
  CHECK(bucket.acquire(1.0, 1.0) == doctest::Approx(0.1));
}

TEST_CASE("token bucket never serves faster than rate plus burst over any window") {
  TokenBucket bucket(100.0, 50.0);
  Rng rng(5);
  double now = 0.0;
  double granted_since_zero = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double tokens = 1.0 + 30.0 * rng.uniform01();
    const double delay = bucket.acquire(tokens, now);
    CHECK(delay >= 0.0);
    granted_since_zero += tokens;
    // Tokens granted for service by time now+delay can never exceed the
    // refill budget plus the initial burst.
    CHECK(granted_since_zero <= 100.0 * (now + delay) + 50.0 + 1e-9);
    now += 0.005 * rng.uniform01();
  }
  CHECK_THROWS_AS(bucket.acquire(-1.0, now), ValidationError);
  CHECK_THROWS_AS(TokenBucket(0.0, 1.0), ValidationError);
}

TEST_CASE("token bucket delays are FIFO under simultaneous arrivals") {
  TokenBucket bucket(10.0, 0.0);
  double last_finish = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double delay = bucket.acquire(5.0, 0.0);
    const double finish = 0.0 + delay;
    CHECK(finish >= last_finish);  // grants never reorder
    last_finish = finish;
  }
  CHECK(last_finish == doctest::Approx(10.0));  // 100 tokens at 10/s
}

TEST_CASE("priority-tier medians stay nearly flat from 1 to 50 in flight") {
  const TierModel pri = default_tier_models().priority;
  for (AgentRole role : kAllRoles) {
    Rng r1(7), r50(7);
    std::vector<double> at1(10'000), at50(10'000);
    for (std::size_t i = 0; i < at1.size(); ++i) at1[i] = sample_service_time(pri, role, 1, r1);
    for (std::size_t i = 0; i < at50.size(); ++i) at50[i] = sample_service_time(pri, role, 50, r50);
    CHECK(median_of_draws(at50) / median_of_draws(at1) <= 1.25);
  }
}

TEST_CASE("standard-tier contention roughly doubles the median by 50 in flight") {
  const TierModel std_tier = default_tier_models().standard;
  Rng r1(7), r50(7);
  std::vector<double> at1(20'000), at50(20'000);
  for (std::size_t i = 0; i < at1.size(); ++i)
    at1[i] = sample_service_time(std_tier, AgentRole::Video, 1, r1);
  for (std::size_t i = 0; i < at50.size(); ++i)
    at50[i] = sample_service_time(std_tier, AgentRole::Video, 50, r50);
  const double ratio = median_of_draws(at50) / median_of_draws(at1);
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.4);
}

TEST_CASE("standard-tier spread widens under load") {
  const TierModel std_tier = default_tier_models().standard;
  auto cv_at = [&](int in_flight) {
    Rng rng(11);
    double sum = 0, sum_sq = 0;
    const int n = 20'000;
    for (int i = 0; i < n; ++i) {
      const double d = sample_service_time(std_tier, AgentRole::Video, in_flight, rng);
      sum += d;
      sum_sq += d * d;
    }
    const double mean = sum / n;
    return std::sqrt(sum_sq / n - mean * mean) / mean;
  };
  CHECK(cv_at(40) > cv_at(1));
}

TEST_CASE("reserved capacity adds no delay while the offered rate is under capacity") {
  TierModel prov = default_tier_models().provisioned;
  prov.sigma = 0.0;  // make the base draw exactly the median
  SimulatedBackend backend(prov, 99);
  // Single sparse calls: the bucket never empties, so latency is the pure draw.
  const AgentCallResult first = backend.call(call_for(AgentRole::Video, 1, 0.0, 1000));
  CHECK(first.latency_s == doctest::Approx(prov.base_median_s[AgentRole::Video]));
  const AgentCallResult later = backend.call(call_for(AgentRole::Code, 1, 100.0, 1000));
  CHECK(later.latency_s == doctest::Approx(prov.base_median_s[AgentRole::Code]));
}

TEST_CASE("reserved capacity queues when the offered token rate exceeds the pool") {
  TierModel prov = default_tier_models().provisioned;
  prov.sigma = 0.0;
  SimulatedBackend backend(prov, 99);
  const double pool = prov.effective_capacity_tokens_per_sec();
  // Demand three bursts of a full second of capacity at the same instant:
  // the first drains the burst allowance, the rest must wait in line.
  const auto tokens = static_cast<std::int64_t>(pool);
  double prev_latency = 0.0;
  for (int i = 0; i < 3; ++i) {
    AgentCall c = call_for(AgentRole::Video, 10, 0.0);
    c.tokens_in = tokens;
    c.tokens_out = 0;
    const AgentCallResult r = backend.call(c);
    CHECK(r.latency_s >= prev_latency);
    prev_latency = r.latency_s;
  }
  CHECK(prev_latency >= prov.base_median_s[AgentRole::Video] + 1.0);
}

TEST_CASE("error injection matches the configured rate above its load floor") {
  TierModel std_tier = default_tier_models().standard;
  SimulatedBackend quiet(std_tier, 1);
  for (int i = 0; i < 2'000; ++i) {
    CHECK(quiet.call(call_for(AgentRole::Video, std_tier.error_min_inflight - 1)).success);
  }
  SimulatedBackend loaded(std_tier, 1);
  int failures = 0;
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const AgentCallResult r = loaded.call(call_for(AgentRole::Video, 20));
    if (!r.success) {
      ++failures;
      CHECK(r.error == ErrorKind::Http500);
    }
  }
  const double expected = std_tier.error_rate * n;
  CHECK(failures > expected - 4 * std::sqrt(expected));
  CHECK(failures < expected + 4 * std::sqrt(expected));
}

TEST_CASE("simulated backends are bit-identical for identical seeds and call order") {
  const TierModel model = default_tier_models().standard;
  SimulatedBackend a(model, 1234), b(model, 1234);
  for (int i = 0; i < 200; ++i) {
    const AgentRole role = kAllRoles[static_cast<std::size_t>(i) % 4];
    const AgentCallResult ra = a.call(call_for(role, 1 + i % 30));
    const AgentCallResult rb = b.call(call_for(role, 1 + i % 30));
    CHECK(ra.latency_s == rb.latency_s);
    CHECK(ra.success == rb.success);
  }
}

AgentCall call_for_query(const char* id, AgentRole role) {
  AgentCall c = call_for(role, 1);
  c.query_id = id;
  return c;
}

TEST_CASE("replay backend serves each recorded latency once, in order") {
  ReplayBackend replay;
  replay.add("q1", AgentRole::Video, 1.5);
  replay.add("q1", AgentRole::Video, 2.5);
  replay.add("q1", AgentRole::Code, 0.5);
  CHECK(replay.remaining() == 3);
  CHECK(replay.call(call_for_query("q1", AgentRole::Video)).latency_s == 1.5);
  CHECK(replay.call(call_for_query("q1", AgentRole::Video)).latency_s == 2.5);
  CHECK(replay.call(call_for_query("q1", AgentRole::Code)).latency_s == 0.5);
  CHECK(replay.remaining() == 0);
}

TEST_CASE("replay exhaustion and unknown queries raise errors naming the id") {
  ReplayBackend replay;
  replay.add("q1", AgentRole::Video, 1.5);
  CHECK_THROWS_WITH_AS(replay.call(call_for_query("missing", AgentRole::Video)),
                       doctest::Contains("missing"), RuntimeFailure);
  CHECK(replay.call(call_for_query("q1", AgentRole::Video)).latency_s == 1.5);
  CHECK_THROWS_WITH_AS(replay.call(call_for_query("q1", AgentRole::Video)),
                       doctest::Contains("q1"), RuntimeFailure);
}

TEST_CASE("error kind names round-trip") {
  CHECK(error_kind_name(ErrorKind::Http500) == "http_500");
  CHECK(error_kind_name(ErrorKind::Timeout) == "timeout");
  CHECK(error_kind_from_name("http_500") == ErrorKind::Http500);
  CHECK(error_kind_from_name("timeout") == ErrorKind::Timeout);
  CHECK_THROWS_AS(error_kind_from_name("bogus"), ValidationError);
}

TEST_CASE("tier names round-trip and reject unknowns") {
  for (TierKind tier : kAllTiers) CHECK(tier_from_name(tier_name(tier)) == tier);
  CHECK(tier_name(TierKind::StandardShared) == "standard");
  CHECK(tier_name(TierKind::PriorityQueue) == "priority");
  CHECK(tier_name(TierKind::ReservedCapacity) == "provisioned");
  CHECK_THROWS_AS(tier_from_name("premium"), ValidationError);
  for (AgentRole role : kAllRoles) CHECK(role_from_name(role_name(role)) == role);
  CHECK_THROWS_AS(role_from_name("narrator"), ValidationError);
}

TEST_CASE("tier model validation rejects inconsistent reserved pools") {
  TierModel prov = default_tier_models().provisioned;
  CHECK_NOTHROW(prov.validate());
  prov.capacity_tokens_per_sec = prov.tokens_per_gsu * prov.gsu_count + 10.0;
  CHECK_THROWS_AS(prov.validate(), ValidationError);
  TierModel std_tier = default_tier_models().standard;
  std_tier.base_median_s[AgentRole::Code] = 0.0;
  CHECK_THROWS_AS(std_tier.validate(), ValidationError);
  TierModel pri = default_tier_models().priority;
  pri.sigma = -0.1;
  CHECK_THROWS_AS(pri.validate(), ValidationError);
}

TEST_CASE("tier set JSON round-trips through disk") {
  testutil::TempDir dir;
  TierSet tiers = default_tier_models();
  tiers.priority.base_median_s[AgentRole::Video] = 2.22;
  const auto file = dir.file("tiers.json");
  write_tier_set(tiers, file);
  const TierSet loaded = load_tier_set(file);
  for (TierKind kind : kAllTiers) {
    const TierModel& a = tiers.by_kind(kind);
    const TierModel& b = loaded.by_kind(kind);
    CHECK(a.kind == b.kind);
    for (AgentRole role : kAllRoles)
      CHECK(a.base_median_s[role] == doctest::Approx(b.base_median_s[role]).epsilon(1e-12));
    CHECK(a.sigma == doctest::Approx(b.sigma).epsilon(1e-12));
    CHECK(a.latency_slope == doctest::Approx(b.latency_slope).epsilon(1e-12));
    CHECK(a.error_rate == doctest::Approx(b.error_rate).epsilon(1e-12));
  }
  CHECK(loaded.provisioned.gsu_count == tiers.provisioned.gsu_count);
}

}  // TEST_SUITE
