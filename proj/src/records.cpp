#include "aisdet/records.hpp"

#include <algorithm>
#include <tuple>

namespace aisdet {

bool canonical_less(const AisRecord& a, const AisRecord& b) {
  return std::tie(a.t, a.mmsi, a.lat, a.lon, a.sog, a.cog) <
         std::tie(b.t, b.mmsi, b.lat, b.lon, b.sog, b.cog);
}

bool track_order_less(const AisRecord& a, const AisRecord& b) {
  return std::tie(a.t, a.lat, a.lon, a.sog, a.cog) <
         std::tie(b.t, b.lat, b.lon, b.sog, b.cog);
}

bool same_nav_tuple(const AisRecord& a, const AisRecord& b) {
  return a.mmsi == b.mmsi && a.t == b.t && a.lat == b.lat && a.lon == b.lon &&
         a.sog == b.sog && a.cog == b.cog;
}

void sort_canonical(std::vector<AisRecord>& records) {
  std::stable_sort(records.begin(), records.end(), canonical_less);
}

}  // namespace aisdet
