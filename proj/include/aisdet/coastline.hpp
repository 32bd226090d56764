#pragma once

#include <string>
#include <vector>

#include "aisdet/geo.hpp"

namespace aisdet {

// Optional coastline geometry (GeoJSON Polygon / MultiPolygon features).
// Points inside a polygon are at distance zero.
class Coastline {
 public:
  Coastline() = default;

  static Coastline from_geojson_file(const std::string& path);
  static Coastline from_geojson_text(const std::string& text);

  bool empty() const { return rings_.empty(); }
  double distance_to(const GeoPos& p) const;

 private:
  std::vector<std::vector<GeoPos>> rings_;  // outer rings
};

}  // namespace aisdet
