#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "aisdet/st_cluster.hpp"
#include "oracles.hpp"

using namespace aisdet;

namespace {

AnomalyCue cue(std::uint32_t mmsi, EpochMs t, double lat, double lon,
               CueKind kind = CueKind::kinematic) {
  return AnomalyCue{kind, mmsi, t, GeoPos{lat, lon}};
}

std::vector<AnomalyCue> sorted(std::vector<AnomalyCue> cues) {
  std::sort(cues.begin(), cues.end(), cue_less);
  return cues;
}

std::vector<int> oracle_labels(const std::vector<AnomalyCue>& cues, double eps_s, double eps_t,
                               int min_pts) {
  const std::size_t n = cues.size();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dt = std::fabs(static_cast<double>(cues[i].t - cues[j].t)) / 1000.0;
      adj[i][j] = dt < eps_t &&
                  oracle::haversine_m(cues[i].pos.lat, cues[i].pos.lon, cues[j].pos.lat,
                                      cues[j].pos.lon) < eps_s;
    }
  }
  return oracle::brute_dbscan(adj, min_pts);
}

AisRecord traffic_record(std::uint32_t mmsi, EpochMs t, double lat, double lon) {
  AisRecord r;
  r.mmsi = mmsi;
  r.t = t;
  r.lat = lat;
  r.lon = lon;
  r.sog = 5.0;
  r.cog = 90.0;
  return r;
}

}  // namespace

TEST_CASE("st neighborhood rules are strict") {
  const auto a = cue(1, 0, 33.0, 126.0);
  SUBCASE("co-located cues 60 s apart are neighbors") {
    const auto b = cue(2, 60'000, 33.0, 126.0);
    CHECK(st_neighbor_pair(a, b, 10'000.0, 1800.0));
  }
  SUBCASE("simultaneous cues 11 km apart are not") {
    const auto b = cue(2, 0, 33.0990, 126.0);  // ~11 km north
    CHECK(geodesic_distance(a.pos, b.pos) > 10'000.0);
    CHECK_FALSE(st_neighbor_pair(a, b, 10'000.0, 1800.0));
  }
  SUBCASE("exactly eps_t apart fails the strict comparison") {
    const auto b = cue(2, 1'800'000, 33.0, 126.0);
    CHECK_FALSE(st_neighbor_pair(a, b, 10'000.0, 1800.0));
  }
}

TEST_CASE("st-dbscan on tiny instances") {
  SUBCASE("six co-located cues within ten minutes form one cluster") {
    std::vector<AnomalyCue> cues;
    for (int i = 0; i < 6; ++i) cues.push_back(cue(static_cast<std::uint32_t>(i + 1),
                                                   i * 60'000, 33.0, 126.0));
    const auto labels = st_dbscan(sorted(cues), 10'000.0, 1800.0, 5);
    for (const int l : labels) CHECK(l == 0);
  }
  SUBCASE("four co-located cues stay noise at minPts 5") {
    std::vector<AnomalyCue> cues;
    for (int i = 0; i < 4; ++i) cues.push_back(cue(static_cast<std::uint32_t>(i + 1),
                                                   i * 60'000, 33.0, 126.0));
    const auto labels = st_dbscan(sorted(cues), 10'000.0, 1800.0, 5);
    for (const int l : labels) CHECK(l == -1);
  }
}

TEST_CASE("st-dbscan matches the brute-force oracle on random instances") {
  oracle::Rng rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<AnomalyCue> cues;
    const int n = 50 + static_cast<int>(rng.integer(450));
    for (int i = 0; i < n; ++i) {
      cues.push_back(cue(static_cast<std::uint32_t>(1 + rng.integer(40)),
                         static_cast<EpochMs>(rng.integer(6 * 3600)) * 1000,
                         rng.uniform(32.5, 33.5), rng.uniform(125.5, 127.0)));
    }
    cues = sorted(cues);
    const double eps_s = rng.uniform(2000, 20'000);
    const double eps_t = rng.uniform(300, 3600);
    const int min_pts = 2 + static_cast<int>(rng.integer(7));
    const auto mine = st_dbscan(cues, eps_s, eps_t, min_pts);
    const auto ref = oracle_labels(cues, eps_s, eps_t, min_pts);
    CHECK(oracle::same_partition(mine, ref));
  }
}

TEST_CASE("grid index equals the linear-scan neighborhood") {
  oracle::Rng rng(93);
  std::vector<AnomalyCue> cues;
  for (int i = 0; i < 400; ++i) {
    cues.push_back(cue(static_cast<std::uint32_t>(1 + rng.integer(40)),
                       static_cast<EpochMs>(rng.integer(4 * 3600)) * 1000,
                       rng.uniform(32.0, 37.0), rng.uniform(123.0, 133.0)));
  }
  cues = sorted(cues);
  const StGridIndex index(cues, 10'000.0, 1800.0);
  std::vector<std::size_t> got;
  for (std::size_t i = 0; i < cues.size(); ++i) {
    index.neighbors(i, got);
    CHECK(got == st_neighbors(i, cues, 10'000.0, 1800.0));
  }
}

TEST_CASE("partition is independent of input permutation") {
  oracle::Rng rng(97);
  std::vector<AnomalyCue> cues;
  for (int i = 0; i < 200; ++i) {
    cues.push_back(cue(static_cast<std::uint32_t>(1 + rng.integer(30)),
                       static_cast<EpochMs>(rng.integer(3600)) * 1000,
                       rng.uniform(32.8, 33.3), rng.uniform(125.8, 126.4)));
  }
  auto shuffled = cues;
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.integer(i)]);
  }
  const auto a = st_dbscan(sorted(cues), 8000.0, 1200.0, 4);
  const auto b = st_dbscan(sorted(shuffled), 8000.0, 1200.0, 4);
  CHECK(a == b);  // canonical order makes labels identical, not merely isomorphic
}

TEST_CASE("doubling eps_t only merges clusters") {
  oracle::Rng rng(101);
  std::vector<AnomalyCue> cues;
  for (int i = 0; i < 300; ++i) {
    cues.push_back(cue(static_cast<std::uint32_t>(1 + rng.integer(30)),
                       static_cast<EpochMs>(rng.integer(4 * 3600)) * 1000,
                       rng.uniform(32.8, 33.2), rng.uniform(125.8, 126.2)));
  }
  cues = sorted(cues);
  const auto narrow = st_dbscan(cues, 8000.0, 900.0, 4);
  const auto wide = st_dbscan(cues, 8000.0, 1800.0, 4);
  // every narrow cluster maps into exactly one wide cluster
  std::map<int, int> mapping;
  for (std::size_t i = 0; i < cues.size(); ++i) {
    if (narrow[i] < 0) continue;
    CHECK(wide[i] >= 0);  // clustered points cannot become noise
    const auto [it, inserted] = mapping.emplace(narrow[i], wide[i]);
    if (!inserted) CHECK(it->second == wide[i]);
  }
}

TEST_CASE("traffic index matches a linear scan") {
  oracle::Rng rng(103);
  std::vector<AisRecord> records;
  for (int i = 0; i < 3000; ++i) {
    records.push_back(traffic_record(static_cast<std::uint32_t>(1 + rng.integer(50)),
                                     static_cast<EpochMs>(rng.integer(6 * 3600)) * 1000,
                                     rng.uniform(32.0, 37.0), rng.uniform(123.0, 133.0)));
  }
  const TrafficIndex index(records, 10'000.0, 1800.0);
  for (int q = 0; q < 30; ++q) {
    const double lat0 = rng.uniform(32.0, 36.0);
    const double lon0 = rng.uniform(123.0, 132.0);
    const BoundingBox box{lat0, lat0 + rng.uniform(0.05, 1.0), lon0, lon0 + rng.uniform(0.05, 1.0)};
    const EpochMs t0 = static_cast<EpochMs>(rng.integer(5 * 3600)) * 1000;
    const EpochMs t1 = t0 + static_cast<EpochMs>(rng.integer(3600)) * 1000;
    std::set<std::uint32_t> want;
    for (const AisRecord& r : records) {
      if (r.t >= t0 && r.t <= t1 && box.contains(r.pos())) want.insert(r.mmsi);
    }
    const auto got = index.distinct_mmsis_in(box, t0, t1);
    CHECK(std::set<std::uint32_t>(got.begin(), got.end()) == want);
  }
}

namespace {

// One compact fixture: traffic of `n_present` vessels reporting in a small
// box over a window; cue sets built per test on top of it.
struct Fixture {
  std::vector<AisRecord> records;
  PipelineConfig cfg;
  Coastline no_coastline;

  Fixture(int n_present, int days = 1) {
    for (int v = 0; v < n_present; ++v) {
      for (int day = 0; day < days; ++day) {
        for (int k = 0; k < 360; ++k) {
          records.push_back(traffic_record(
              static_cast<std::uint32_t>(100 + v),
              static_cast<EpochMs>(day) * 86'400'000 + static_cast<EpochMs>(k) * 10'000,
              33.0 + 0.002 * v, 126.0 + 1e-5 * k));
        }
      }
    }
  }

  std::pair<std::vector<StEvent>, Stage3Report> run(const std::vector<AnomalyCue>& kin,
                                                    const std::vector<AnomalyCue>& gap,
                                                    bool baseline = false) {
    const TrafficIndex traffic(records, cfg.eps_s, cfg.eps_t);
    CategorizeOptions opt;
    opt.baseline = baseline;
    return categorize_all(kin, gap, traffic, cfg, no_coastline, opt);
  }
};

}  // namespace

TEST_CASE("multi-vessel clusters classify by coherence") {
  SUBCASE("11 of 11 anomalous vessels on kinematic cues is spoofing") {
    Fixture fx(11);
    std::vector<AnomalyCue> kin;
    for (int v = 0; v < 11; ++v) {
      kin.push_back(cue(static_cast<std::uint32_t>(100 + v), 600'000 + v * 1000,
                        33.0 + 0.002 * v, 126.0));
    }
    const auto [events, report] = fx.run(kin, {});
    REQUIRE(events.size() == 1);
    CHECK(events[0].category == EventCategory::spoofing);
    CHECK(events[0].mmsis.size() == 11);
    CHECK(events[0].anomalous_ratio == doctest::Approx(1.0));
    CHECK(report.kinematic.final_clusters == 1);
  }

  SUBCASE("the same cues as gap cues become jamming") {
    Fixture fx(11);
    std::vector<AnomalyCue> gap;
    for (int v = 0; v < 11; ++v) {
      gap.push_back(cue(static_cast<std::uint32_t>(100 + v), 600'000 + v * 1000,
                        33.0 + 0.002 * v, 126.0, CueKind::tx_gap));
    }
    const auto [events, report] = fx.run({}, gap);
    REQUIRE(events.size() == 1);
    CHECK(events[0].category == EventCategory::jamming);
    CHECK(report.tx_gap.final_clusters == 1);
  }

  SUBCASE("three anomalous vessels are noise regardless of density") {
    Fixture fx(11);
    std::vector<AnomalyCue> kin;
    for (int v = 0; v < 3; ++v) {
      for (int j = 0; j < 3; ++j) {
        kin.push_back(cue(static_cast<std::uint32_t>(100 + v), 600'000 + j * 20'000,
                          33.0 + 0.002 * v, 126.0));
      }
    }
    const auto [events, report] = fx.run(kin, {});
    REQUIRE(events.size() == 1);
    CHECK(events[0].category == EventCategory::noise);
    CHECK(report.kinematic.final_clusters == 0);
  }

  SUBCASE("five anomalous among twenty present fails the 60% gate") {
    Fixture fx(20);
    std::vector<AnomalyCue> kin;
    for (int v = 0; v < 5; ++v) {
      kin.push_back(cue(static_cast<std::uint32_t>(100 + v), 600'000 + v * 1000,
                        33.0 + 0.002 * v, 126.0));
    }
    const auto [events, report] = fx.run(kin, {});
    REQUIRE(events.size() == 1);
    CHECK(events[0].anomalous_ratio < 0.60);
    CHECK(events[0].category == EventCategory::noise);
  }
}

TEST_CASE("single-vessel clusters classify by duration and persistence") {
  SUBCASE("short single-vessel cluster is noise under the coastal minimum") {
    Fixture fx(3);
    std::vector<AnomalyCue> kin;
    for (int j = 0; j < 6; ++j) {
      kin.push_back(cue(100, 600'000 + j * 10'000, 33.0, 126.0));  // 50 s span < 120 s
    }
    const auto [events, report] = fx.run(kin, {});
    REQUIRE(events.size() == 1);
    CHECK(events[0].category == EventCategory::noise);
  }

  SUBCASE("recurring on every operational day makes it persistent") {
    Fixture fx(3, 5);
    std::vector<AnomalyCue> kin;
    for (int day = 0; day < 5; ++day) {
      for (int j = 0; j < 6; ++j) {
        kin.push_back(cue(100, static_cast<EpochMs>(day) * 86'400'000 + 600'000 + j * 60'000,
                          33.0, 126.0));  // 300 s span >= 120 s
      }
    }
    const auto [events, report] = fx.run(kin, {});
    REQUIRE(events.size() == 5);
    for (const auto& e : events) CHECK(e.category == EventCategory::persistent_sensor);
    CHECK(report.kinematic.persistent.points == 30);
    CHECK(report.kinematic.persistent.mmsis == 1);
  }

  SUBCASE("recurring on 6 of 17 operational days is transient") {
    Fixture fx(3, 17);
    std::vector<AnomalyCue> kin;
    for (const int day : {1, 3, 6, 9, 12, 15}) {
      for (int j = 0; j < 6; ++j) {
        kin.push_back(cue(100, static_cast<EpochMs>(day) * 86'400'000 + 600'000 + j * 60'000,
                          33.0, 126.0));
      }
    }
    const auto [events, report] = fx.run(kin, {});
    REQUIRE(events.size() == 6);
    for (const auto& e : events) CHECK(e.category == EventCategory::transient_sensor);
  }

  SUBCASE("recurring on 1 of 5 operational days is transient") {
    Fixture fx(3, 5);
    std::vector<AnomalyCue> kin;
    for (int j = 0; j < 6; ++j) {
      kin.push_back(cue(100, 600'000 + j * 60'000, 33.0, 126.0));
    }
    const auto [events, report] = fx.run(kin, {});
    REQUIRE(events.size() == 1);
    CHECK(events[0].category == EventCategory::transient_sensor);
  }

  SUBCASE("the offshore minimum applies when a coastline is supplied far away") {
    Fixture fx(3);
    // coast polygon ~200 km north of the cues
    fx.cfg.coastal_distance_m = 10'000.0;
    const Coastline coast = Coastline::from_geojson_text(R"({
      "type": "Polygon",
      "coordinates": [[[125.0, 35.0], [127.0, 35.0], [127.0, 35.5], [125.0, 35.5], [125.0, 35.0]]]
    })");
    std::vector<AnomalyCue> kin;
    for (int j = 0; j < 30; ++j) {
      kin.push_back(cue(100, 600'000 + j * 10'000, 33.0, 126.0));  // 290 s: > coastal, < offshore
    }
    const TrafficIndex traffic(fx.records, fx.cfg.eps_s, fx.cfg.eps_t);
    const auto [events, report] =
        categorize_all(kin, {}, traffic, fx.cfg, coast, CategorizeOptions{});
    REQUIRE(events.size() == 1);
    CHECK(events[0].category == EventCategory::noise);  // 290 s < 900 s offshore minimum
  }
}

TEST_CASE("category counts partition the cue set") {
  oracle::Rng rng(107);
  Fixture fx(8, 2);
  std::vector<AnomalyCue> kin, gap;
  for (int i = 0; i < 200; ++i) {
    kin.push_back(cue(static_cast<std::uint32_t>(100 + rng.integer(8)),
                      static_cast<EpochMs>(rng.integer(2 * 86'400)) * 1000,
                      rng.uniform(32.9, 33.1), rng.uniform(125.9, 126.1)));
    gap.push_back(cue(static_cast<std::uint32_t>(100 + rng.integer(8)),
                      static_cast<EpochMs>(rng.integer(2 * 86'400)) * 1000,
                      rng.uniform(32.9, 33.1), rng.uniform(125.9, 126.1), CueKind::tx_gap));
  }
  const auto [events, report] = fx.run(kin, gap);
  CHECK(report.kinematic.noise.points + report.kinematic.persistent.points +
            report.kinematic.transient.points + report.kinematic.interference.points ==
        kin.size());
  CHECK(report.tx_gap.noise.points + report.tx_gap.persistent.points +
            report.tx_gap.transient.points + report.tx_gap.interference.points == gap.size());

  for (const StEvent& e : events) {
    if (e.category == EventCategory::spoofing || e.category == EventCategory::jamming) {
      CHECK(e.mmsis.size() >= 5);
      CHECK(e.anomalous_ratio >= 0.60);
    }
    if (e.category == EventCategory::spoofing) CHECK(e.kind == CueKind::kinematic);
    if (e.category == EventCategory::jamming) CHECK(e.kind == CueKind::tx_gap);
  }
}

TEST_CASE("baseline mode labels every cluster an event") {
  Fixture fx(3);
  std::vector<AnomalyCue> kin;
  for (int j = 0; j < 6; ++j) kin.push_back(cue(100, 600'000 + j * 10'000, 33.0, 126.0));
  const auto [events, report] = fx.run(kin, {}, /*baseline=*/true);
  REQUIRE(events.size() == 1);
  CHECK(events[0].category == EventCategory::spoofing);  // one vessel, no gates
}
