#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "aisdet/config.hpp"
#include "aisdet/records.hpp"

namespace aisdet {

enum class Normality : std::uint8_t { unknown, normal, abnormal };

// A density-extracted contiguous piece of one vessel's track.
struct SubTrack {
  std::uint32_t mmsi = 0;
  std::vector<std::size_t> members;  // indices into the owning track, time-sorted
  EpochMs t_first = 0;
  EpochMs t_last = 0;
  Normality normality = Normality::unknown;

  double duration_s() const { return static_cast<double>(t_last - t_first) / 1000.0; }
};

enum class CommArtifact : std::uint8_t {
  none,  // anomaly candidate, survives to later stages
  stale_retransmission,
  mmsi_duplication,
  true_track,
};

// Flags records whose (lat, lon, sog, cog) tuple was already seen at an
// earlier, distinct timestamp. First occurrences are never flagged; the
// lookup timestamp advances to the latest sighting.
std::vector<std::size_t> detect_stale_retransmission(const Track& track);

// Density clustering with spatial/temporal/speed/heading gates; clusters
// shorter than subtrack_min_duration are discarded.
std::vector<SubTrack> extract_subtracks(const Track& track, const PipelineConfig& cfg);

// True iff the IMM cue extractor stays silent over the sub-track. Fewer than
// 3 records is not evaluable and counts as not-normal.
bool validate_subtrack_normal(const Track& track, const SubTrack& sub, const PipelineConfig& cfg);

// Per-record artifact labels, parallel to each track's records.
using TrackLabels = std::map<std::uint32_t, std::vector<CommArtifact>>;

// MMSI-duplication decision over all tracks (stale records already removed):
// groups temporally-overlapping sub-tracks, validates them, and applies the
// group decision rule plus intra-cluster revalidation.
TrackLabels detect_mmsi_duplication(const std::map<std::uint32_t, Track>& tracks,
                                    const PipelineConfig& cfg, unsigned workers = 1);

struct Stage1Report {
  std::size_t stale_points = 0;
  std::size_t stale_mmsis = 0;
  std::size_t dup_points = 0;
  std::size_t dup_mmsis = 0;
};

// Algorithm 2 then Algorithm 1; removes labeled records from the tracks in
// place. Records without a communication label always survive.
Stage1Report run_stage1(std::map<std::uint32_t, Track>& tracks, const PipelineConfig& cfg,
                        unsigned workers = 1);

}  // namespace aisdet
