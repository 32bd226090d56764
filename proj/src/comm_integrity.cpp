#include "aisdet/comm_integrity.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <unordered_map>

#include "aisdet/geo.hpp"
#include "aisdet/imm.hpp"
#include "aisdet/parallel.hpp"

namespace aisdet {

namespace {

// Rebroadcasts repeat the original payload byte-for-byte, so tuple keys
// compare exactly as parsed; no epsilon.
struct NavKey {
  double lat, lon, sog, cog;
  bool operator==(const NavKey&) const = default;
};

struct NavKeyHash {
  static std::uint64_t bits(double v) {
    if (v == 0.0) v = 0.0;  // collapse -0.0
    std::uint64_t u;
    std::memcpy(&u, &v, sizeof(u));
    return u;
  }
  std::size_t operator()(const NavKey& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (const std::uint64_t w : {bits(k.lat), bits(k.lon), bits(k.sog), bits(k.cog)}) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

bool subtrack_neighbors(const AisRecord& a, const AisRecord& b, const PipelineConfig& cfg) {
  const std::int64_t dt_ms = a.t >= b.t ? a.t - b.t : b.t - a.t;
  if (static_cast<double>(dt_ms) >= cfg.eps_time_dup * 1000.0) return false;
  if (std::fabs(a.sog - b.sog) >= cfg.eps_speed_dup) return false;
  if (angle_diff_deg(a.heading_or_cog(), b.heading_or_cog()) >= cfg.eps_heading_dup) return false;
  return geodesic_distance(a.pos(), b.pos()) < cfg.eps_space_dup;
}

// Indices of records within the eps_time window that satisfy all four gates,
// excluding i itself. Records are time-sorted, so the scan is a local window.
void region_query(const Track& track, std::size_t i, const PipelineConfig& cfg,
                  std::vector<std::size_t>& out) {
  out.clear();
  const auto& recs = track.records;
  const std::int64_t window = static_cast<std::int64_t>(cfg.eps_time_dup * 1000.0);
  const AisRecord& center = recs[i];
  for (std::size_t j = i; j-- > 0;) {
    if (center.t - recs[j].t >= window) break;
    if (subtrack_neighbors(center, recs[j], cfg)) out.push_back(j);
  }
  std::reverse(out.begin(), out.end());
  for (std::size_t j = i + 1; j < recs.size(); ++j) {
    if (recs[j].t - center.t >= window) break;
    if (subtrack_neighbors(center, recs[j], cfg)) out.push_back(j);
  }
}

// Sorted sub-tracks with a pairwise temporal overlap among them?
bool has_overlapping_pair(std::vector<const SubTrack*> subs) {
  if (subs.size() < 2) return false;
  std::sort(subs.begin(), subs.end(), [](const SubTrack* a, const SubTrack* b) {
    return a->t_first < b->t_first || (a->t_first == b->t_first && a->t_last < b->t_last);
  });
  EpochMs max_end = subs[0]->t_last;
  for (std::size_t i = 1; i < subs.size(); ++i) {
    if (subs[i]->t_first <= max_end) return true;  // closed intervals; touching counts
    max_end = std::max(max_end, subs[i]->t_last);
  }
  return false;
}

Track materialize(const Track& track, const SubTrack& sub) {
  Track out;
  out.mmsi = track.mmsi;
  out.records.reserve(sub.members.size());
  for (const std::size_t idx : sub.members) out.records.push_back(track.records[idx]);
  return out;
}

// Applies the group decision rule to one temporally-connected component and
// writes per-record labels.
void decide_component(const Track& track, const std::vector<const SubTrack*>& comp,
                      const PipelineConfig& cfg, std::vector<CommArtifact>& labels) {
  std::vector<const SubTrack*> normals;
  for (const SubTrack* s : comp) {
    if (s->normality == Normality::normal) normals.push_back(s);
  }

  auto label_members = [&](const SubTrack* s, CommArtifact a) {
    for (const std::size_t idx : s->members) labels[idx] = a;
  };

  if (normals.size() >= 2 && has_overlapping_pair(normals)) {
    for (const SubTrack* s : comp) label_members(s, CommArtifact::mmsi_duplication);
    return;
  }
  if (!normals.empty()) {
    for (const SubTrack* s : comp) {
      label_members(s, s->normality == Normality::normal ? CommArtifact::true_track
                                                         : CommArtifact::mmsi_duplication);
    }
    return;
  }
  // No normal sub-track: everything stays an anomaly candidate.

  // Intra-cluster revalidation: a lone sub-track may itself hide two
  // overlapping consistent emitters once re-examined in isolation.
  if (comp.size() == 1) {
    const Track inner = materialize(track, *comp[0]);
    std::vector<SubTrack> again = extract_subtracks(inner, cfg);
    std::vector<const SubTrack*> inner_normals;
    for (SubTrack& s : again) {
      s.normality = validate_subtrack_normal(inner, s, cfg) ? Normality::normal
                                                            : Normality::abnormal;
      if (s.normality == Normality::normal) inner_normals.push_back(&s);
    }
    if (inner_normals.size() >= 2 && has_overlapping_pair(inner_normals)) {
      label_members(comp[0], CommArtifact::mmsi_duplication);
    }
  }
}

std::vector<CommArtifact> label_track(const Track& track, const PipelineConfig& cfg) {
  std::vector<CommArtifact> labels(track.records.size(), CommArtifact::none);
  std::vector<SubTrack> subs = extract_subtracks(track, cfg);
  for (SubTrack& s : subs) {
    s.normality = validate_subtrack_normal(track, s, cfg) ? Normality::normal
                                                          : Normality::abnormal;
  }
  std::sort(subs.begin(), subs.end(), [](const SubTrack& a, const SubTrack& b) {
    return a.t_first < b.t_first || (a.t_first == b.t_first && a.t_last < b.t_last);
  });

  // Temporal-overlap connected components over closed intervals.
  std::size_t i = 0;
  while (i < subs.size()) {
    std::vector<const SubTrack*> comp{&subs[i]};
    EpochMs max_end = subs[i].t_last;
    std::size_t j = i + 1;
    while (j < subs.size() && subs[j].t_first <= max_end) {
      comp.push_back(&subs[j]);
      max_end = std::max(max_end, subs[j].t_last);
      ++j;
    }
    decide_component(track, comp, cfg, labels);
    i = j;
  }
  return labels;
}

}  // namespace

std::vector<std::size_t> detect_stale_retransmission(const Track& track) {
  std::vector<std::size_t> flagged;
  std::unordered_map<NavKey, EpochMs, NavKeyHash> last_seen;
  last_seen.reserve(track.records.size() * 2);
  for (std::size_t i = 0; i < track.records.size(); ++i) {
    const AisRecord& r = track.records[i];
    const NavKey key{r.lat, r.lon, r.sog, r.cog};
    auto [it, inserted] = last_seen.try_emplace(key, r.t);
    if (!inserted && it->second != r.t) {
      flagged.push_back(i);
      it->second = r.t;
    }
  }
  return flagged;
}

std::vector<SubTrack> extract_subtracks(const Track& track, const PipelineConfig& cfg) {
  const std::size_t n = track.records.size();
  constexpr int kUnvisited = -2;
  constexpr int kNoise = -1;
  std::vector<int> cluster(n, kUnvisited);
  std::vector<std::size_t> neighbors, expand_neighbors;

  int next_cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cluster[i] != kUnvisited) continue;
    region_query(track, i, cfg, neighbors);
    if (neighbors.size() + 1 < static_cast<std::size_t>(cfg.min_pts)) {
      cluster[i] = kNoise;
      continue;
    }
    const int id = next_cluster++;
    cluster[i] = id;
    std::deque<std::size_t> queue(neighbors.begin(), neighbors.end());
    while (!queue.empty()) {
      const std::size_t q = queue.front();
      queue.pop_front();
      if (cluster[q] == kNoise) cluster[q] = id;  // border point
      if (cluster[q] != kUnvisited) continue;
      cluster[q] = id;
      region_query(track, q, cfg, expand_neighbors);
      if (expand_neighbors.size() + 1 >= static_cast<std::size_t>(cfg.min_pts)) {
        for (const std::size_t nb : expand_neighbors) {
          if (cluster[nb] == kUnvisited || cluster[nb] == kNoise) queue.push_back(nb);
        }
      }
    }
  }

  std::vector<SubTrack> subs(static_cast<std::size_t>(next_cluster));
  for (std::size_t i = 0; i < n; ++i) {
    if (cluster[i] < 0) continue;
    subs[static_cast<std::size_t>(cluster[i])].members.push_back(i);
  }
  std::vector<SubTrack> kept;
  for (SubTrack& s : subs) {
    if (s.members.empty()) continue;
    s.mmsi = track.mmsi;
    s.t_first = track.records[s.members.front()].t;
    s.t_last = track.records[s.members.back()].t;
    if (s.duration_s() >= cfg.subtrack_min_duration) kept.push_back(std::move(s));
  }
  return kept;
}

bool validate_subtrack_normal(const Track& track, const SubTrack& sub, const PipelineConfig& cfg) {
  if (sub.members.size() < 3) return false;  // not evaluable
  const Track inner = materialize(track, sub);
  return extract_kinematic_cues(inner, cfg).empty();
}

TrackLabels detect_mmsi_duplication(const std::map<std::uint32_t, Track>& tracks,
                                    const PipelineConfig& cfg, unsigned workers) {
  std::vector<const Track*> order;
  order.reserve(tracks.size());
  for (const auto& [mmsi, track] : tracks) order.push_back(&track);

  std::vector<std::vector<CommArtifact>> results(order.size());
  parallel_for(order.size(), workers,
               [&](std::size_t i) { results[i] = label_track(*order[i], cfg); });

  TrackLabels labels;
  for (std::size_t i = 0; i < order.size(); ++i) {
    labels.emplace(order[i]->mmsi, std::move(results[i]));
  }
  return labels;
}

Stage1Report run_stage1(std::map<std::uint32_t, Track>& tracks, const PipelineConfig& cfg,
                        unsigned workers) {
  Stage1Report report;

  // Algorithm 2 first: stale repeats would corrupt sub-track extraction.
  std::vector<Track*> order;
  order.reserve(tracks.size());
  for (auto& [mmsi, track] : tracks) order.push_back(&track);

  std::vector<std::vector<std::size_t>> stale(order.size());
  parallel_for(order.size(), workers,
               [&](std::size_t i) { stale[i] = detect_stale_retransmission(*order[i]); });

  for (std::size_t i = 0; i < order.size(); ++i) {
    if (stale[i].empty()) continue;
    report.stale_points += stale[i].size();
    ++report.stale_mmsis;
    Track& track = *order[i];
    std::vector<AisRecord> kept;
    kept.reserve(track.records.size() - stale[i].size());
    std::size_t next = 0;
    for (std::size_t r = 0; r < track.records.size(); ++r) {
      if (next < stale[i].size() && stale[i][next] == r) {
        ++next;
        continue;
      }
      kept.push_back(track.records[r]);
    }
    track.records = std::move(kept);
  }

  // Algorithm 1.
  const TrackLabels labels = detect_mmsi_duplication(tracks, cfg, workers);
  for (auto& [mmsi, track] : tracks) {
    const auto& lab = labels.at(mmsi);
    std::size_t dup = 0;
    for (const CommArtifact a : lab) {
      if (a == CommArtifact::mmsi_duplication) ++dup;
    }
    if (dup == 0) continue;
    report.dup_points += dup;
    ++report.dup_mmsis;
    std::vector<AisRecord> kept;
    kept.reserve(track.records.size() - dup);
    for (std::size_t r = 0; r < track.records.size(); ++r) {
      if (lab[r] != CommArtifact::mmsi_duplication) kept.push_back(track.records[r]);
    }
    track.records = std::move(kept);
  }

  std::erase_if(tracks, [](const auto& kv) { return kv.second.records.empty(); });
  return report;
}

}  // namespace aisdet
