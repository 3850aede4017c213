#include "parmax/cost.hpp"

#include <doctest.h>

#include "parmax/errors.hpp"
#include "test_util.hpp"

using namespace parmax;

TEST_SUITE("cost") {

TEST_CASE("money is exact nano-dollar arithmetic") {
  CHECK(Money::from_usd_int(1).nanos() == 1'000'000'000);
  CHECK(Money::from_usd(0.0039188).nanos() == 3'918'800);
  CHECK(Money::from_usd(-0.0000000005).nanos() == -1);  // half away from zero
  CHECK(Money::from_usd(0.0000000005).nanos() == 1);
  CHECK(Money::from_nanos(3'918'800).usd() == doctest::Approx(0.0039188).epsilon(1e-12));
  CHECK(Money::from_nanos(3'918'800).cents() == doctest::Approx(0.39188).epsilon(1e-12));

  const Money a = Money::from_usd_int(10);
  CHECK((a + a).nanos() == 20'000'000'000);
  CHECK((a - Money::from_nanos(1)).nanos() == 9'999'999'999);
  CHECK((a * 3).nanos() == 30'000'000'000);
  CHECK(a.divided_by(4).nanos() == 2'500'000'000);
  CHECK(Money::from_nanos(5).divided_by(2).nanos() == 3);    // round half away
  CHECK(Money::from_nanos(-5).divided_by(2).nanos() == -3);  // symmetric
  CHECK_THROWS_AS(a.divided_by(0), ValidationError);
  CHECK(Money::from_nanos(1) < Money::from_nanos(2));
}

TEST_CASE("money displays as dollars with sensible precision") {
  CHECK(Money::from_usd_int(1890).display() == "$1890.00");
  CHECK(Money::from_usd(472.50).display() == "$472.50");
  CHECK(Money::from_usd(0.0039188).display() == "$0.0039188");
  CHECK(Money::from_usd(39.188).display() == "$39.188");
  CHECK(Money::from_nanos(0).display() == "$0.00");
  CHECK(Money::from_usd(-236.25).display() == "-$236.25");
}

TEST_CASE("per-request pricing is exact at the corpus means") {
  const PricingTable pricing;
  const Money standard = per_request_cost(TierKind::StandardShared, pricing, 6671, 767);
  CHECK(standard.nanos() == 3'918'800);  // 6671*300 + 767*2500
  CHECK(standard.display() == "$0.0039188");

  const Money priority = per_request_cost(TierKind::PriorityQueue, pricing, 6671, 767);
  CHECK(priority.nanos() == 7'053'840);  // exactly 1.8x the standard price
  CHECK(priority.nanos() == standard.nanos() * 9 / 5);

  CHECK(per_request_cost(TierKind::StandardShared, pricing, 0, 0).nanos() == 0);
  CHECK_THROWS_AS(per_request_cost(TierKind::ReservedCapacity, pricing, 6671, 767),
                  ValidationError);
  CHECK_THROWS_AS(per_request_cost(TierKind::StandardShared, pricing, -1, 0), ValidationError);

  // Linear in both token counts.
  const Money doubled = per_request_cost(TierKind::StandardShared, pricing, 13342, 1534);
  CHECK(doubled.nanos() == 2 * standard.nanos());
}

TEST_CASE("reserved capacity burns a fixed 43.75 cents per minute") {
  const PricingTable pricing;
  // 7 GSUs x $2700 / month over 43200 minutes.
  CHECK(reserved_cents_per_min(pricing) == doctest::Approx(43.75).epsilon(1e-12));
  PricingTable annual = pricing;
  annual.commitment_months = 12;
  CHECK(annual.gsu_monthly_rate() == Money::from_usd_int(2000));
  CHECK(pricing.gsu_monthly_rate() == Money::from_usd_int(2700));
  CHECK(reserved_cents_per_min(annual) ==
        doctest::Approx(43.75 * 2000.0 / 2700.0).epsilon(1e-12));
}

TEST_CASE("concurrency per cent matches the benchmarked efficiency table") {
  const PricingTable pricing;
  const Money standard = per_request_cost(TierKind::StandardShared, pricing, 6671, 767);
  const Money priority = per_request_cost(TierKind::PriorityQueue, pricing, 6671, 767);

  // Reserved: concurrency over the flat burn rate, traffic-independent.
  CHECK(conc_per_cent(TierKind::ReservedCapacity, pricing, 50.0, 364.0, Money{}) ==
        doctest::Approx(50.0 / 43.75).epsilon(1e-12));
  CHECK(conc_per_cent(TierKind::ReservedCapacity, pricing, 1.0, 22.0, Money{}) ==
        doctest::Approx(1.0 / 43.75).epsilon(1e-12));

  // Pay-per-token: concurrency over (req/min x request price in cents).
  CHECK(conc_per_cent(TierKind::StandardShared, pricing, 1.0, 15.0, standard) ==
        doctest::Approx(0.17).epsilon(0.01));
  CHECK(conc_per_cent(TierKind::StandardShared, pricing, 50.0, 367.0, standard) ==
        doctest::Approx(0.35).epsilon(0.015));
  CHECK(conc_per_cent(TierKind::PriorityQueue, pricing, 50.0, 748.0, priority) ==
        doctest::Approx(0.09).epsilon(0.06));

  // Priority's flat latency makes its efficiency concurrency-independent:
  // rpm proportional to c leaves the ratio unchanged.
  const double lo = conc_per_cent(TierKind::PriorityQueue, pricing, 10.0, 160.0, priority);
  const double hi = conc_per_cent(TierKind::PriorityQueue, pricing, 40.0, 640.0, priority);
  CHECK(lo == doctest::Approx(hi).epsilon(1e-12));

  CHECK_THROWS_AS(conc_per_cent(TierKind::StandardShared, pricing, 1.0, 0.0, standard),
                  ValidationError);
  CHECK_THROWS_AS(conc_per_cent(TierKind::StandardShared, pricing, 1.0, 15.0, Money{}),
                  ValidationError);
}

TEST_CASE("per-student semester costs hit the published price points") {
  const PricingTable pricing;
  const GsuScalingProfile profile;
  // 10k queries a semester on pay-per-token tiers.
  CHECK(per_student_semester_cost(TierKind::StandardShared, pricing, 10'000, 6671, 767, 40)
            .display() == "$39.188");
  CHECK(per_student_semester_cost(TierKind::PriorityQueue, pricing, 10'000, 6671, 767, 40)
            .display() == "$70.5384");
  // Pay-per-token pricing does not depend on enrollment.
  CHECK(per_student_semester_cost(TierKind::StandardShared, pricing, 10'000, 6671, 767, 16'000) ==
        per_student_semester_cost(TierKind::StandardShared, pricing, 10'000, 6671, 767, 40));

  // A lighter load: 675 queries on priority is under five dollars.
  const Money light = per_student_semester_cost(TierKind::PriorityQueue, pricing, 675, 6671, 767, 40);
  CHECK(light.nanos() == std::int64_t{675} * 7'053'840);
  CHECK(light.usd() == doctest::Approx(4.761342).epsilon(1e-12));
  CHECK(light.usd() == doctest::Approx(4.79).epsilon(0.01));

  // Reserved capacity amortizes the GSU block over the class and semester.
  const std::int64_t enrollments[] = {40, 400, 4000, 16'000};
  const char* expected[] = {"$1890.00", "$945.00", "$472.50", "$236.25"};
  for (int i = 0; i < 4; ++i) {
    const Money m = per_student_semester_cost(TierKind::ReservedCapacity, pricing, 10'000, 6671,
                                              767, enrollments[i], profile);
    CHECK(m.display() == expected[i]);
  }
  // 40 students: 7 GSUs x $2700 x 4 months / 40 = $1890 exactly.
  CHECK(per_student_semester_cost(TierKind::ReservedCapacity, pricing, 10'000, 6671, 767, 40,
                                  profile) == Money::from_usd_int(1890));

  CHECK_THROWS_AS(per_student_semester_cost(TierKind::ReservedCapacity, pricing, 10'000, 6671,
                                            767, 123, profile),
                  ValidationError);
  CHECK_THROWS_AS(per_student_semester_cost(TierKind::StandardShared, pricing, -1, 6671, 767, 40),
                  ValidationError);
}

TEST_CASE("gsu scaling profile is exact-match lookup") {
  const GsuScalingProfile profile;
  CHECK(profile.gsus_for(40) == 7);
  CHECK(profile.gsus_for(400) == 35);
  CHECK(profile.gsus_for(4000) == 175);
  CHECK(profile.gsus_for(16'000) == 350);
  CHECK_THROWS_AS(profile.gsus_for(41), ValidationError);
  CHECK_THROWS_AS(profile.gsus_for(0), ValidationError);

  GsuScalingProfile custom;
  custom.gsus_by_enrollment = {{100, 10}};
  CHECK(custom.gsus_for(100) == 10);
}

TEST_CASE("utilization scales committed cost by active hours") {
  const Money full = Money::from_usd_int(18'900);  // a 7-GSU month
  const Money adjusted = utilization_adjusted(full, 90.0, 720.0);
  CHECK(adjusted == Money::from_usd(2362.50));
  CHECK(adjusted.usd() / full.usd() == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(utilization_adjusted(full, 720.0, 720.0) == full);
  CHECK_THROWS_AS(utilization_adjusted(full, 0.0, 720.0), ValidationError);
  CHECK_THROWS_AS(utilization_adjusted(full, -1.0, 720.0), ValidationError);
  CHECK_THROWS_AS(utilization_adjusted(full, 10.0, 0.0), ValidationError);
  CHECK_THROWS_AS(utilization_adjusted(full, 721.0, 720.0), ValidationError);
}

TEST_CASE("tier recommendations follow the operating regimes") {
  const TierRecommendation seminar = recommend_tier(15, 8, false);
  CHECK(seminar.tier == TierKind::StandardShared);
  CHECK(seminar.regime == "seminar");
  CHECK_FALSE(seminar.consider_reserved);

  const TierRecommendation classroom = recommend_tier(40, 20, true);
  CHECK(classroom.tier == TierKind::PriorityQueue);
  CHECK(classroom.regime == "classroom");
  CHECK(classroom.consider_reserved);
  CHECK_FALSE(classroom.rationale.empty());

  const TierRecommendation department = recommend_tier(900, 120, false);
  CHECK(department.tier == TierKind::PriorityQueue);
  CHECK(department.regime == "department");
  CHECK_FALSE(department.consider_reserved);

  const TierRecommendation university = recommend_tier(16'000, 800, true);
  CHECK(university.tier == TierKind::PriorityQueue);
  CHECK(university.regime == "university");
  CHECK(university.consider_reserved);

  // Regime boundaries.
  CHECK(recommend_tier(20, 5, false).regime == "seminar");
  CHECK(recommend_tier(21, 5, false).regime == "classroom");
  CHECK(recommend_tier(150, 5, false).regime == "classroom");
  CHECK(recommend_tier(151, 5, false).regime == "department");
  CHECK(recommend_tier(1500, 5, false).regime == "department");
  CHECK(recommend_tier(1501, 5, false).regime == "university");
  // Peak concurrency boundary between standard and priority.
  CHECK(recommend_tier(40, 10, false).tier == TierKind::StandardShared);
  CHECK(recommend_tier(40, 11, false).tier == TierKind::PriorityQueue);

  CHECK_THROWS_AS(recommend_tier(0, 5, false), ValidationError);
  CHECK_THROWS_AS(recommend_tier(40, 0, false), ValidationError);
}

TEST_CASE("pricing tables validate and round-trip through json") {
  PricingTable pricing;
  CHECK_NOTHROW(pricing.validate());
  pricing.priority_input_nanos_per_token = 541;  // breaks the 1.8x ratio
  CHECK_THROWS_AS(pricing.validate(), ValidationError);
  pricing = PricingTable{};
  pricing.gsu_count = 0;
  CHECK_THROWS_AS(pricing.validate(), ValidationError);
  pricing = PricingTable{};
  pricing.commitment_months = 7;
  CHECK_THROWS_AS(pricing.validate(), ValidationError);
  pricing = PricingTable{};
  pricing.minutes_per_month = 0;
  CHECK_THROWS_AS(pricing.validate(), ValidationError);

  testutil::TempDir dir;
  PricingTable custom;
  custom.commitment_months = 12;
  custom.gsu_count = 35;
  custom.semester_months = 5;
  const auto file = dir.file("pricing.json");
  write_pricing(custom, file);
  const PricingTable loaded = load_pricing(file);
  CHECK(loaded.standard_input_nanos_per_token == custom.standard_input_nanos_per_token);
  CHECK(loaded.standard_output_nanos_per_token == custom.standard_output_nanos_per_token);
  CHECK(loaded.priority_input_nanos_per_token == custom.priority_input_nanos_per_token);
  CHECK(loaded.priority_output_nanos_per_token == custom.priority_output_nanos_per_token);
  CHECK(loaded.gsu_monthly_1mo == custom.gsu_monthly_1mo);
  CHECK(loaded.gsu_monthly_12mo == custom.gsu_monthly_12mo);
  CHECK(loaded.commitment_months == 12);
  CHECK(loaded.gsu_count == 35);
  CHECK(loaded.semester_months == 5);
  CHECK(loaded.minutes_per_month == custom.minutes_per_month);

  // Partial files override only the keys they carry.
  const auto partial = dir.file("partial.json");
  testutil::spit(partial, R"({"commitment_months": 12})");
  const PricingTable merged = load_pricing(partial);
  CHECK(merged.commitment_months == 12);
  CHECK(merged.gsu_count == PricingTable{}.gsu_count);

  const auto garbled = dir.file("garbled.json");
  testutil::spit(garbled, "not json");
  CHECK_THROWS_AS(load_pricing(garbled), ParseError);
}

}  // TEST_SUITE
