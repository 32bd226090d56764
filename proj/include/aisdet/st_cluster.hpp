#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "aisdet/coastline.hpp"
#include "aisdet/config.hpp"
#include "aisdet/imm.hpp"
#include "aisdet/records.hpp"
#include "aisdet/tx_interval.hpp"

namespace aisdet {

enum class CueKind : std::uint8_t { kinematic, tx_gap };

// A preserved, unclassified anomaly observation forwarded to clustering.
struct AnomalyCue {
  CueKind kind = CueKind::kinematic;
  std::uint32_t mmsi = 0;
  EpochMs t = 0;
  GeoPos pos{};

  static AnomalyCue from(const KinematicCue& c) {
    return AnomalyCue{CueKind::kinematic, c.mmsi, c.t, c.pos};
  }
  static AnomalyCue from(const GapCue& c) {
    return AnomalyCue{CueKind::tx_gap, c.mmsi, c.midpoint, c.pos};
  }
};

// Canonical processing order for cues: (t, mmsi, lat, lon).
bool cue_less(const AnomalyCue& a, const AnomalyCue& b);

// Strict neighborhood test: dist < eps_s AND |dt| < eps_t.
bool st_neighbor_pair(const AnomalyCue& a, const AnomalyCue& b, double eps_s_m, double eps_t_s);

// Linear-scan neighborhood of cue i, excluding i. Reference semantics for the
// grid index.
std::vector<std::size_t> st_neighbors(std::size_t i, std::span<const AnomalyCue> universe,
                                      double eps_s_m, double eps_t_s);

// Grid hash over (time bucket, lat cell, lon cell); candidate superset is
// exact-checked so results match the linear scan.
class StGridIndex {
 public:
  StGridIndex(std::span<const AnomalyCue> cues, double eps_s_m, double eps_t_s);
  void neighbors(std::size_t i, std::vector<std::size_t>& out) const;

 private:
  struct CellKey {
    std::int64_t t, lat, lon;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const;
  };
  CellKey cell_of(const AnomalyCue& c) const;

  std::span<const AnomalyCue> cues_;
  double eps_s_m_, eps_t_s_;
  double lat_cell_deg_, lon_cell_deg_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
};

// Classic density clustering over the Eq.-style neighborhood; returns a
// cluster id per cue (-1 = noise). Core iff |N(i)| + 1 >= min_pts. Cues must
// be in canonical order; labels are then permutation-independent.
std::vector<int> st_dbscan(std::span<const AnomalyCue> cues, double eps_s_m, double eps_t_s,
                           int min_pts);

enum class EventCategory : std::uint8_t {
  noise,
  persistent_sensor,
  transient_sensor,
  spoofing,
  jamming,
};

const char* to_string(EventCategory c);
const char* to_string(CueKind k);

struct StEvent {
  int cluster_id = -1;
  CueKind kind = CueKind::kinematic;
  std::vector<std::size_t> members;  // indices into the per-kind cue array
  std::vector<std::uint32_t> mmsis;  // distinct, sorted
  EpochMs t_start = 0;
  EpochMs t_end = 0;
  GeoPos centroid{};
  double radius_m = 0.0;
  double anomalous_ratio = 0.0;
  EventCategory category = EventCategory::noise;
};

// Spatiotemporal presence index over all post-Stage-1 records; the
// denominator of the 60% coherence rule.
class TrafficIndex {
 public:
  TrafficIndex(const std::vector<AisRecord>& records, double eps_s_m, double eps_t_s);

  // Distinct MMSIs with at least one report inside box x [t0, t1].
  std::vector<std::uint32_t> distinct_mmsis_in(const BoundingBox& box, EpochMs t0, EpochMs t1) const;

  // Calendar UTC days with at least one report, per vessel.
  const std::set<std::int64_t>* operational_days(std::uint32_t mmsi) const;

  std::size_t record_count() const { return records_->size(); }

 private:
  struct CellKey {
    std::int64_t t, lat, lon;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const;
  };

  const std::vector<AisRecord>* records_;
  double t_bucket_ms_, lat_cell_deg_, lon_cell_deg_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> cells_;
  std::map<std::uint32_t, std::set<std::int64_t>> days_;
};

struct CategoryCount {
  std::size_t points = 0;
  std::size_t mmsis = 0;
};

struct Stage3KindReport {
  std::size_t total_cues = 0;
  std::size_t total_mmsis = 0;
  CategoryCount noise;  // unclustered cues plus demoted clusters
  CategoryCount persistent;
  CategoryCount transient;
  CategoryCount interference;  // spoofing for kinematic cues, jamming for tx gaps
  std::size_t final_clusters = 0;
};

struct Stage3Report {
  Stage3KindReport kinematic;
  Stage3KindReport tx_gap;
};

struct CategorizeOptions {
  bool baseline = false;  // skip every coherence criterion, any cluster is an event
};

// Runs ST-DBSCAN separately per cue kind and classifies every cluster.
// Returned events include demoted (noise-category) clusters; callers filter.
std::pair<std::vector<StEvent>, Stage3Report> categorize_all(
    const std::vector<AnomalyCue>& kinematic_cues, const std::vector<AnomalyCue>& gap_cues,
    const TrafficIndex& traffic, const PipelineConfig& cfg, const Coastline& coastline,
    const CategorizeOptions& options = {});

}  // namespace aisdet
