#include "aisdet/st_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace aisdet {

namespace {

// Meters per degree of latitude on the working sphere.
constexpr double kMetersPerDegLat = kEarthRadiusM * std::numbers::pi / 180.0;

double lon_cell_width_deg(double eps_s_m, double max_abs_lat_deg) {
  const double lat = std::min(std::fabs(max_abs_lat_deg), 89.5);
  // 1% slack keeps the +/-1-cell ring a superset of the true neighborhood.
  return eps_s_m * 1.01 / (kMetersPerDegLat * std::cos(deg2rad(lat)));
}

std::uint64_t mix_hash(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

std::int64_t lat_cell(double lat, double width) {
  return static_cast<std::int64_t>(std::floor(lat / width));
}

}  // namespace

bool cue_less(const AnomalyCue& a, const AnomalyCue& b) {
  return std::tie(a.t, a.mmsi, a.pos.lat, a.pos.lon) <
         std::tie(b.t, b.mmsi, b.pos.lat, b.pos.lon);
}

bool st_neighbor_pair(const AnomalyCue& a, const AnomalyCue& b, double eps_s_m, double eps_t_s) {
  const std::int64_t dt_ms = a.t >= b.t ? a.t - b.t : b.t - a.t;
  if (static_cast<double>(dt_ms) >= eps_t_s * 1000.0) return false;
  return geodesic_distance(a.pos, b.pos) < eps_s_m;
}

std::vector<std::size_t> st_neighbors(std::size_t i, std::span<const AnomalyCue> universe,
                                      double eps_s_m, double eps_t_s) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < universe.size(); ++j) {
    if (j != i && st_neighbor_pair(universe[i], universe[j], eps_s_m, eps_t_s)) out.push_back(j);
  }
  return out;
}

std::size_t StGridIndex::CellHash::operator()(const CellKey& k) const {
  std::uint64_t h = 0;
  h = mix_hash(h, static_cast<std::uint64_t>(k.t));
  h = mix_hash(h, static_cast<std::uint64_t>(k.lat));
  h = mix_hash(h, static_cast<std::uint64_t>(k.lon));
  return static_cast<std::size_t>(h);
}

StGridIndex::StGridIndex(std::span<const AnomalyCue> cues, double eps_s_m, double eps_t_s)
    : cues_(cues), eps_s_m_(eps_s_m), eps_t_s_(eps_t_s) {
  double max_abs_lat = 0.0;
  for (const AnomalyCue& c : cues_) max_abs_lat = std::max(max_abs_lat, std::fabs(c.pos.lat));
  lat_cell_deg_ = eps_s_m * 1.01 / kMetersPerDegLat;
  // Longitude cells form a ring so the neighborhood wraps across +/-180.
  const double want = lon_cell_width_deg(eps_s_m, max_abs_lat);
  const std::int64_t n_lon = std::max<std::int64_t>(1, static_cast<std::int64_t>(360.0 / want));
  lon_cell_deg_ = 360.0 / static_cast<double>(n_lon);

  cells_.reserve(cues_.size());
  for (std::size_t i = 0; i < cues_.size(); ++i) {
    cells_[cell_of(cues_[i])].push_back(static_cast<std::uint32_t>(i));
  }
}

StGridIndex::CellKey StGridIndex::cell_of(const AnomalyCue& c) const {
  const std::int64_t n_lon = static_cast<std::int64_t>(std::llround(360.0 / lon_cell_deg_));
  double lon = c.pos.lon;
  if (lon >= 180.0) lon -= 360.0;
  std::int64_t lc = static_cast<std::int64_t>(std::floor((lon + 180.0) / lon_cell_deg_));
  lc = ((lc % n_lon) + n_lon) % n_lon;
  return CellKey{floor_div(c.t, static_cast<std::int64_t>(eps_t_s_ * 1000.0)),
                 lat_cell(c.pos.lat, lat_cell_deg_), lc};
}

void StGridIndex::neighbors(std::size_t i, std::vector<std::size_t>& out) const {
  out.clear();
  const AnomalyCue& c = cues_[i];
  const CellKey home = cell_of(c);
  const std::int64_t n_lon = static_cast<std::int64_t>(std::llround(360.0 / lon_cell_deg_));
  for (std::int64_t dt = -1; dt <= 1; ++dt) {
    for (std::int64_t dlat = -1; dlat <= 1; ++dlat) {
      for (std::int64_t dlon = -1; dlon <= 1; ++dlon) {
        CellKey key{home.t + dt, home.lat + dlat, ((home.lon + dlon) % n_lon + n_lon) % n_lon};
        const auto it = cells_.find(key);
        if (it == cells_.end()) continue;
        for (const std::uint32_t j : it->second) {
          if (j != i && st_neighbor_pair(c, cues_[j], eps_s_m_, eps_t_s_)) {
            out.push_back(j);
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
}

std::vector<int> st_dbscan(std::span<const AnomalyCue> cues, double eps_s_m, double eps_t_s,
                           int min_pts) {
  constexpr int kUnvisited = -2;
  constexpr int kNoise = -1;
  const std::size_t n = cues.size();
  std::vector<int> labels(n, kUnvisited);
  if (n == 0) return labels;

  const StGridIndex index(cues, eps_s_m, eps_t_s);
  std::vector<std::size_t> nbrs, expand;
  int next_id = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kUnvisited) continue;
    index.neighbors(i, nbrs);
    if (nbrs.size() + 1 < static_cast<std::size_t>(min_pts)) {
      labels[i] = kNoise;
      continue;
    }
    const int id = next_id++;
    labels[i] = id;
    std::deque<std::size_t> queue(nbrs.begin(), nbrs.end());
    while (!queue.empty()) {
      const std::size_t q = queue.front();
      queue.pop_front();
      if (labels[q] == kNoise) labels[q] = id;  // border point, first cluster wins
      if (labels[q] != kUnvisited) continue;
      labels[q] = id;
      index.neighbors(q, expand);
      if (expand.size() + 1 >= static_cast<std::size_t>(min_pts)) {
        for (const std::size_t nb : expand) {
          if (labels[nb] == kUnvisited || labels[nb] == kNoise) queue.push_back(nb);
        }
      }
    }
  }
  return labels;
}

const char* to_string(EventCategory c) {
  switch (c) {
    case EventCategory::noise: return "noise";
    case EventCategory::persistent_sensor: return "persistent_sensor";
    case EventCategory::transient_sensor: return "transient_sensor";
    case EventCategory::spoofing: return "spoofing";
    case EventCategory::jamming: return "jamming";
  }
  return "unknown";
}

const char* to_string(CueKind k) {
  return k == CueKind::kinematic ? "kinematic" : "tx_gap";
}

std::size_t TrafficIndex::CellHash::operator()(const CellKey& k) const {
  std::uint64_t h = 0;
  h = mix_hash(h, static_cast<std::uint64_t>(k.t));
  h = mix_hash(h, static_cast<std::uint64_t>(k.lat));
  h = mix_hash(h, static_cast<std::uint64_t>(k.lon));
  return static_cast<std::size_t>(h);
}

TrafficIndex::TrafficIndex(const std::vector<AisRecord>& records, double eps_s_m, double eps_t_s)
    : records_(&records) {
  t_bucket_ms_ = std::max(1.0, eps_t_s * 1000.0);
  lat_cell_deg_ = std::max(1e-6, eps_s_m / kMetersPerDegLat);
  lon_cell_deg_ = lat_cell_deg_;  // exact filtering below, cells only prune
  cells_.reserve(records.size() / 4 + 1);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const AisRecord& r = records[i];
    const CellKey key{floor_div(r.t, static_cast<std::int64_t>(t_bucket_ms_)),
                      lat_cell(r.lat, lat_cell_deg_), lat_cell(r.lon, lon_cell_deg_)};
    cells_[key].push_back(static_cast<std::uint32_t>(i));
    days_[r.mmsi].insert(utc_day(r.t));
  }
}

std::vector<std::uint32_t> TrafficIndex::distinct_mmsis_in(const BoundingBox& box, EpochMs t0,
                                                           EpochMs t1) const {
  std::set<std::uint32_t> found;
  if (t1 < t0) return {};
  const std::int64_t b0 = floor_div(t0, static_cast<std::int64_t>(t_bucket_ms_));
  const std::int64_t b1 = floor_div(t1, static_cast<std::int64_t>(t_bucket_ms_));
  const std::int64_t la0 = lat_cell(box.lat_min, lat_cell_deg_);
  const std::int64_t la1 = lat_cell(box.lat_max, lat_cell_deg_);
  const std::int64_t lo0 = lat_cell(box.lon_min, lon_cell_deg_);
  const std::int64_t lo1 = lat_cell(box.lon_max, lon_cell_deg_);
  for (std::int64_t tb = b0; tb <= b1; ++tb) {
    for (std::int64_t la = la0; la <= la1; ++la) {
      for (std::int64_t lo = lo0; lo <= lo1; ++lo) {
        const auto it = cells_.find(CellKey{tb, la, lo});
        if (it == cells_.end()) continue;
        for (const std::uint32_t idx : it->second) {
          const AisRecord& r = (*records_)[idx];
          if (r.t >= t0 && r.t <= t1 && box.contains(r.pos())) found.insert(r.mmsi);
        }
      }
    }
  }
  return {found.begin(), found.end()};
}

const std::set<std::int64_t>* TrafficIndex::operational_days(std::uint32_t mmsi) const {
  const auto it = days_.find(mmsi);
  return it == days_.end() ? nullptr : &it->second;
}

namespace {

struct KindPass {
  CueKind kind;
  std::vector<AnomalyCue> cues;  // canonical order
};

StEvent build_event(int cluster_id, CueKind kind, std::vector<std::size_t> members,
                    const std::vector<AnomalyCue>& cues) {
  StEvent e;
  e.cluster_id = cluster_id;
  e.kind = kind;
  e.members = std::move(members);
  std::set<std::uint32_t> mmsis;
  EpochMs t0 = cues[e.members.front()].t;
  EpochMs t1 = t0;
  double lat = 0.0, lon = 0.0;
  for (const std::size_t m : e.members) {
    const AnomalyCue& c = cues[m];
    mmsis.insert(c.mmsi);
    t0 = std::min(t0, c.t);
    t1 = std::max(t1, c.t);
    lat += c.pos.lat;
    lon += c.pos.lon;
  }
  e.mmsis.assign(mmsis.begin(), mmsis.end());
  e.t_start = t0;
  e.t_end = t1;
  e.centroid = GeoPos{lat / static_cast<double>(e.members.size()),
                      lon / static_cast<double>(e.members.size())};
  for (const std::size_t m : e.members) {
    e.radius_m = std::max(e.radius_m, geodesic_distance(e.centroid, cues[m].pos));
  }
  return e;
}

// Distinct vessels present in the event's bounding box expanded by eps_s and
// eps_t, unioned with the contributors themselves (a vessel silenced for
// longer than eps_t is still part of the event).
double anomalous_ratio(const StEvent& e, const std::vector<AnomalyCue>& cues,
                       const TrafficIndex& traffic, const PipelineConfig& cfg) {
  BoundingBox box{90.0, -90.0, 180.0, -180.0};
  for (const std::size_t m : e.members) {
    box.lat_min = std::min(box.lat_min, cues[m].pos.lat);
    box.lat_max = std::max(box.lat_max, cues[m].pos.lat);
    box.lon_min = std::min(box.lon_min, cues[m].pos.lon);
    box.lon_max = std::max(box.lon_max, cues[m].pos.lon);
  }
  const double dlat = cfg.eps_s / kMetersPerDegLat;
  const double max_abs_lat =
      std::min(89.5, std::max(std::fabs(box.lat_min), std::fabs(box.lat_max)) + dlat);
  const double dlon = cfg.eps_s / (kMetersPerDegLat * std::cos(deg2rad(max_abs_lat)));
  box.lat_min = std::max(-90.0, box.lat_min - dlat);
  box.lat_max = std::min(90.0, box.lat_max + dlat);
  box.lon_min -= dlon;
  box.lon_max += dlon;

  const EpochMs pad = static_cast<EpochMs>(cfg.eps_t * 1000.0);
  const std::vector<std::uint32_t> present =
      traffic.distinct_mmsis_in(box, e.t_start - pad, e.t_end + pad);

  std::set<std::uint32_t> denom(present.begin(), present.end());
  denom.insert(e.mmsis.begin(), e.mmsis.end());
  return static_cast<double>(e.mmsis.size()) / static_cast<double>(denom.size());
}

void count_category(CategoryCount& slot, const StEvent& e) {
  slot.points += e.members.size();
}

}  // namespace

std::pair<std::vector<StEvent>, Stage3Report> categorize_all(
    const std::vector<AnomalyCue>& kinematic_cues, const std::vector<AnomalyCue>& gap_cues,
    const TrafficIndex& traffic, const PipelineConfig& cfg, const Coastline& coastline,
    const CategorizeOptions& options) {
  std::vector<StEvent> events;
  Stage3Report report;
  int next_cluster_id = 0;

  KindPass passes[2] = {{CueKind::kinematic, kinematic_cues}, {CueKind::tx_gap, gap_cues}};
  for (KindPass& pass : passes) {
    std::sort(pass.cues.begin(), pass.cues.end(), cue_less);
    Stage3KindReport& kr = pass.kind == CueKind::kinematic ? report.kinematic : report.tx_gap;
    kr.total_cues = pass.cues.size();
    {
      std::set<std::uint32_t> all;
      for (const AnomalyCue& c : pass.cues) all.insert(c.mmsi);
      kr.total_mmsis = all.size();
    }

    const std::vector<int> labels = st_dbscan(pass.cues, cfg.eps_s, cfg.eps_t, cfg.min_pts);
    int max_label = -1;
    for (const int l : labels) max_label = std::max(max_label, l);

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(max_label + 1));
    std::set<std::uint32_t> noise_mmsis;
    std::size_t noise_points = 0;
    for (std::size_t i = 0; i < pass.cues.size(); ++i) {
      if (labels[i] < 0) {
        ++noise_points;
        noise_mmsis.insert(pass.cues[i].mmsi);
      } else {
        members[static_cast<std::size_t>(labels[i])].push_back(i);
      }
    }

    std::vector<StEvent> kind_events;
    kind_events.reserve(members.size());
    for (auto& m : members) {
      kind_events.push_back(build_event(next_cluster_id++, pass.kind, std::move(m), pass.cues));
    }

    // Classification. Single-vessel clusters need a two-pass treatment: the
    // persistence decision depends on how many operational days carry a
    // qualifying cluster.
    std::map<std::uint32_t, std::set<std::int64_t>> qualify_days;
    std::vector<char> qualifying(kind_events.size(), 0);
    for (std::size_t ei = 0; ei < kind_events.size(); ++ei) {
      StEvent& e = kind_events[ei];
      e.anomalous_ratio = anomalous_ratio(e, pass.cues, traffic, cfg);

      if (options.baseline) {
        e.category = pass.kind == CueKind::kinematic ? EventCategory::spoofing
                                                     : EventCategory::jamming;
        continue;
      }

      if (e.mmsis.size() >= 2) {
        const bool coherent = e.mmsis.size() >= static_cast<std::size_t>(cfg.min_event_mmsis) &&
                              e.anomalous_ratio >= cfg.th_group;
        e.category = !coherent ? EventCategory::noise
                     : pass.kind == CueKind::kinematic ? EventCategory::spoofing
                                                       : EventCategory::jamming;
        continue;
      }

      const double duration_s = static_cast<double>(e.t_end - e.t_start) / 1000.0;
      const bool coastal =
          coastline.empty() || coastline.distance_to(e.centroid) <= cfg.coastal_distance_m;
      const double min_duration = coastal ? cfg.t_single_coastal : cfg.t_single_offshore;
      if (duration_s < min_duration) {
        e.category = EventCategory::noise;
        continue;
      }
      qualifying[ei] = 1;
      auto& days = qualify_days[e.mmsis.front()];
      for (std::int64_t d = utc_day(e.t_start); d <= utc_day(e.t_end); ++d) days.insert(d);
    }

    if (!options.baseline) {
      for (std::size_t ei = 0; ei < kind_events.size(); ++ei) {
        if (!qualifying[ei]) continue;
        StEvent& e = kind_events[ei];
        const std::uint32_t mmsi = e.mmsis.front();
        const std::set<std::int64_t>* op = traffic.operational_days(mmsi);
        double fraction = 1.0;
        if (op && !op->empty()) {
          std::size_t overlap = 0;
          for (const std::int64_t d : qualify_days[mmsi]) overlap += op->count(d);
          fraction = static_cast<double>(overlap) / static_cast<double>(op->size());
        }
        e.category = fraction >= cfg.persistence_day_fraction ? EventCategory::persistent_sensor
                                                              : EventCategory::transient_sensor;
      }
    }

    // Tally and enforce the coherence gates on everything we emit.
    CategoryCount interference_count;
    std::set<std::uint32_t> persistent_mmsis, transient_mmsis, interference_mmsis;
    for (const StEvent& e : kind_events) {
      switch (e.category) {
        case EventCategory::noise:
          noise_points += e.members.size();
          noise_mmsis.insert(e.mmsis.begin(), e.mmsis.end());
          break;
        case EventCategory::persistent_sensor:
          count_category(kr.persistent, e);
          persistent_mmsis.insert(e.mmsis.begin(), e.mmsis.end());
          break;
        case EventCategory::transient_sensor:
          count_category(kr.transient, e);
          transient_mmsis.insert(e.mmsis.begin(), e.mmsis.end());
          break;
        case EventCategory::spoofing:
        case EventCategory::jamming:
          count_category(interference_count, e);
          interference_mmsis.insert(e.mmsis.begin(), e.mmsis.end());
          ++kr.final_clusters;
          if (!options.baseline) {
            if (e.mmsis.size() < static_cast<std::size_t>(cfg.min_event_mmsis) ||
                e.anomalous_ratio < cfg.th_group) {
              throw std::logic_error("interference event violates the coherence gates");
            }
          }
          break;
      }
    }
    kr.noise.points = noise_points;
    kr.noise.mmsis = noise_mmsis.size();
    kr.persistent.mmsis = persistent_mmsis.size();
    kr.transient.mmsis = transient_mmsis.size();
    kr.interference = interference_count;
    kr.interference.mmsis = interference_mmsis.size();

    for (StEvent& e : kind_events) events.push_back(std::move(e));
  }

  return {std::move(events), report};
}

}  // namespace aisdet
