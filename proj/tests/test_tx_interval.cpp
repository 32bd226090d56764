#include <doctest.h>

#include <algorithm>

#include "aisdet/tx_interval.hpp"
#include "oracles.hpp"

using namespace aisdet;

namespace {

Track track_with_intervals(const std::vector<double>& intervals_s, double sog) {
  Track t;
  t.mmsi = 5;
  EpochMs now = 0;
  AisRecord r;
  r.mmsi = 5;
  r.t = now;
  r.lat = 33.0;
  r.lon = 126.0;
  r.sog = sog;
  r.cog = 90.0;
  t.records.push_back(r);
  for (const double iv : intervals_s) {
    now += static_cast<EpochMs>(iv * 1000.0);
    r.t = now;
    r.lon += 1e-4;
    t.records.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("median reporting interval") {
  SUBCASE("median of a small interval multiset") {
    const Track t = track_with_intervals({10, 10, 10, 12, 10}, 5.0);
    const auto med = median_reporting_interval(t, 1.0);
    REQUIRE(med.has_value());
    CHECK(*med == doctest::Approx(10.0));
  }
  SUBCASE("slow vessels have no qualifying intervals") {
    const Track t = track_with_intervals({10, 10, 10, 10, 10}, 0.2);
    CHECK_FALSE(median_reporting_interval(t, 1.0).has_value());
  }
  SUBCASE("fewer than four qualifying intervals yields none") {
    const Track t = track_with_intervals({10, 10, 10}, 5.0);
    CHECK_FALSE(median_reporting_interval(t, 1.0).has_value());
  }
  SUBCASE("matches a sort-and-pick oracle on random multisets") {
    oracle::Rng rng(81);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> intervals;
      const int n = 4 + static_cast<int>(rng.integer(40));
      for (int i = 0; i < n; ++i) intervals.push_back(1.0 + std::floor(rng.uniform(0, 60)));
      const Track t = track_with_intervals(intervals, 5.0);
      const auto med = median_reporting_interval(t, 1.0);
      REQUIRE(med.has_value());

      std::vector<double> sorted = intervals;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t m = sorted.size();
      const double want =
          m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
      CHECK(*med == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("jamming threshold truth table") {
  CHECK(jamming_threshold(10.0, 3.0, 60.0) == 60.0);
  CHECK(jamming_threshold(30.0, 3.0, 60.0) == 90.0);
  CHECK(jamming_threshold(20.0, 3.0, 60.0) == 60.0);  // boundary: 3*20 == floor
}

TEST_CASE("threshold is monotone in the median and floored") {
  oracle::Rng rng(83);
  double prev = 0.0;
  for (double med = 1.0; med <= 120.0; med += 1.0) {
    const double th = jamming_threshold(med, 3.0, 60.0);
    CHECK(th >= 60.0);
    CHECK(th >= prev);
    prev = th;
  }
  (void)rng;
}

TEST_CASE("gap cue extraction") {
  PipelineConfig cfg;

  SUBCASE("one 300 s hole on a 10 s cadence yields exactly one cue") {
    std::vector<double> intervals(30, 10.0);
    intervals[15] = 300.0;
    const Track t = track_with_intervals(intervals, 5.0);
    const auto profile = tx_profile(t, cfg);
    REQUIRE(profile.has_value());
    CHECK(profile->threshold_s == 60.0);
    const auto cues = extract_gap_cues(t, *profile);
    REQUIRE(cues.size() == 1);
    CHECK(cues[0].gap_s == doctest::Approx(300.0));
    CHECK(cues[0].gap_end - cues[0].gap_start == 300'000);
    CHECK(cues[0].midpoint == cues[0].gap_start + 150'000);
    CHECK(cues[0].pos.lon == t.records[15].lon);  // last fix before the gap
  }

  SUBCASE("a 45 s worst gap stays silent") {
    std::vector<double> intervals(30, 10.0);
    intervals[10] = 45.0;
    const Track t = track_with_intervals(intervals, 5.0);
    const auto profile = tx_profile(t, cfg);
    REQUIRE(profile.has_value());
    CHECK(extract_gap_cues(t, *profile).empty());
  }

  SUBCASE("a double-pulse outage yields exactly two cues") {
    // ~198 s and ~187 s holes separated by ~10 minutes of normal cadence
    std::vector<double> intervals;
    for (int i = 0; i < 30; ++i) intervals.push_back(10.0);
    intervals.push_back(198.0);
    for (int i = 0; i < 42; ++i) intervals.push_back(10.0);
    intervals.push_back(187.0);
    for (int i = 0; i < 30; ++i) intervals.push_back(10.0);
    const Track t = track_with_intervals(intervals, 5.0);
    const auto profile = tx_profile(t, cfg);
    REQUIRE(profile.has_value());
    const auto cues = extract_gap_cues(t, *profile);
    REQUIRE(cues.size() == 2);
    CHECK(cues[0].gap_s == doctest::Approx(198.0));
    CHECK(cues[1].gap_s == doctest::Approx(187.0));
  }
}

TEST_CASE("gap cue properties") {
  PipelineConfig cfg;
  oracle::Rng rng(87);

  SUBCASE("cue count is invariant under uniform time translation") {
    std::vector<double> intervals;
    for (int i = 0; i < 60; ++i) {
      intervals.push_back(rng.uniform() < 0.1 ? rng.uniform(70, 400) : 10.0);
    }
    Track t = track_with_intervals(intervals, 5.0);
    const auto profile = tx_profile(t, cfg);
    REQUIRE(profile.has_value());
    const std::size_t base_count = extract_gap_cues(t, *profile).size();

    for (AisRecord& r : t.records) r.t += 9'876'543;
    const auto shifted_profile = tx_profile(t, cfg);
    REQUIRE(shifted_profile.has_value());
    CHECK(extract_gap_cues(t, *shifted_profile).size() == base_count);
  }

  SUBCASE("inserting a record inside a flagged gap never increases flagged duration") {
    std::vector<double> intervals(30, 10.0);
    intervals[15] = 300.0;
    Track t = track_with_intervals(intervals, 5.0);
    const auto profile = tx_profile(t, cfg);
    REQUIRE(profile.has_value());
    const auto before = extract_gap_cues(t, *profile);
    double flagged_before = 0.0;
    for (const auto& c : before) flagged_before += c.gap_s;

    // split the hole 40 s after its start
    AisRecord mid = t.records[16];
    mid.t = before[0].gap_start + 40'000;
    mid.lon += 1e-5;
    t.records.push_back(mid);
    std::sort(t.records.begin(), t.records.end(), track_order_less);
    const auto after = extract_gap_cues(t, *profile);
    double flagged_after = 0.0;
    for (const auto& c : after) flagged_after += c.gap_s;
    CHECK(flagged_after <= flagged_before);
    CHECK(after.size() == 1);  // 40 s below threshold, 260 s still flagged
  }
}
