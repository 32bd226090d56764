#include "aisdet/tx_interval.hpp"

#include <algorithm>

namespace aisdet {

std::optional<double> median_reporting_interval(const Track& track, double sog_normal_min) {
  std::vector<std::int64_t> intervals_ms;
  const auto& recs = track.records;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i - 1].sog > sog_normal_min && recs[i].sog > sog_normal_min) {
      intervals_ms.push_back(recs[i].t - recs[i - 1].t);
    }
  }
  if (intervals_ms.size() < 4) return std::nullopt;
  std::sort(intervals_ms.begin(), intervals_ms.end());
  const std::size_t n = intervals_ms.size();
  double median_ms;
  if (n % 2 == 1) {
    median_ms = static_cast<double>(intervals_ms[n / 2]);
  } else {
    median_ms = 0.5 * (static_cast<double>(intervals_ms[n / 2 - 1]) +
                       static_cast<double>(intervals_ms[n / 2]));
  }
  return median_ms / 1000.0;
}

double jamming_threshold(double median_s, double kappa, double t_min_s) {
  return std::max(t_min_s, kappa * median_s);
}

std::optional<TxProfile> tx_profile(const Track& track, const PipelineConfig& cfg) {
  const auto median = median_reporting_interval(track, cfg.sog_normal_min);
  if (!median) return std::nullopt;
  TxProfile p;
  p.mmsi = track.mmsi;
  p.median_interval_s = *median;
  p.threshold_s = jamming_threshold(*median, cfg.kappa, cfg.t_min);
  std::size_t samples = 0;
  for (std::size_t i = 1; i < track.records.size(); ++i) {
    if (track.records[i - 1].sog > cfg.sog_normal_min && track.records[i].sog > cfg.sog_normal_min) {
      ++samples;
    }
  }
  p.n_samples = samples;
  return p;
}

std::vector<GapCue> extract_gap_cues(const Track& track, const TxProfile& profile) {
  std::vector<GapCue> cues;
  const auto& recs = track.records;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const double gap_s = static_cast<double>(recs[i].t - recs[i - 1].t) / 1000.0;
    if (gap_s > profile.threshold_s) {
      GapCue cue;
      cue.mmsi = track.mmsi;
      cue.gap_start = recs[i - 1].t;
      cue.gap_end = recs[i].t;
      cue.gap_s = gap_s;
      cue.pos = recs[i - 1].pos();  // the only defensible anchor while silent
      cue.midpoint = recs[i - 1].t + (recs[i].t - recs[i - 1].t) / 2;
      cues.push_back(cue);
    }
  }
  return cues;
}

}  // namespace aisdet
