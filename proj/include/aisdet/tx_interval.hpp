#pragma once

#include <optional>
#include <vector>

#include "aisdet/config.hpp"
#include "aisdet/records.hpp"

namespace aisdet {

struct TxProfile {
  std::uint32_t mmsi = 0;
  double median_interval_s = 0.0;
  double threshold_s = 0.0;  // max(t_min, kappa * median)
  std::size_t n_samples = 0;
};

struct GapCue {
  std::uint32_t mmsi = 0;
  EpochMs gap_start = 0;
  EpochMs gap_end = 0;
  double gap_s = 0.0;     // gap_end - gap_start, strictly above the threshold
  GeoPos pos{};           // last fix before the gap
  EpochMs midpoint = 0;   // temporal coordinate used for clustering
};

// Median inter-report interval over intervals whose bounding records both
// move (sog > sog_normal_min); nullopt when fewer than 4 qualify.
std::optional<double> median_reporting_interval(const Track& track, double sog_normal_min);

double jamming_threshold(double median_s, double kappa, double t_min_s);

std::optional<TxProfile> tx_profile(const Track& track, const PipelineConfig& cfg);

// One cue per consecutive-report interval strictly exceeding the profile
// threshold. Track-boundary silences are not gaps.
std::vector<GapCue> extract_gap_cues(const Track& track, const TxProfile& profile);

}  // namespace aisdet
