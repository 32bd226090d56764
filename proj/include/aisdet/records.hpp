#pragma once

#include <cstdint>
#include <vector>

#include "aisdet/geo.hpp"
#include "aisdet/time_util.hpp"

namespace aisdet {

// Sentinel for the optional heading field; valid headings are in [0, 360).
inline constexpr double kNoHeading = -1.0;

// One decoded AIS dynamic report. SOG is always stored in m/s.
struct AisRecord {
  std::uint32_t mmsi = 0;
  EpochMs t = 0;
  double lat = 0.0;
  double lon = 0.0;
  double sog = 0.0;
  double cog = 0.0;
  double heading = kNoHeading;

  bool has_heading() const { return heading >= 0.0; }
  double heading_or_cog() const { return has_heading() ? heading : cog; }
  GeoPos pos() const { return GeoPos{lat, lon}; }
};

// Canonical global ordering (t, mmsi, lat, lon, sog, cog): every downstream
// stage is deterministic regardless of input file order.
bool canonical_less(const AisRecord& a, const AisRecord& b);

// Within-track ordering (t, then lat, lon, sog, cog).
bool track_order_less(const AisRecord& a, const AisRecord& b);

// Equality on the identity tuple (mmsi, t, lat, lon, sog, cog); heading is
// not part of the identity.
bool same_nav_tuple(const AisRecord& a, const AisRecord& b);

void sort_canonical(std::vector<AisRecord>& records);

struct BoundingBox {
  double lat_min = 0.0;
  double lat_max = 0.0;
  double lon_min = 0.0;
  double lon_max = 0.0;

  bool valid() const { return lat_min < lat_max && lon_min < lon_max; }
  bool contains(const GeoPos& p) const {
    return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min && p.lon <= lon_max;
  }
};

struct Track {
  std::uint32_t mmsi = 0;
  std::vector<AisRecord> records;  // sorted by track_order_less

  EpochMs t_first() const { return records.empty() ? 0 : records.front().t; }
  EpochMs t_last() const { return records.empty() ? 0 : records.back().t; }
};

}  // namespace aisdet
