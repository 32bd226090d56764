#include "aisdet/coastline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace aisdet {

namespace {

using nlohmann::json;

std::vector<GeoPos> parse_ring(const json& ring) {
  std::vector<GeoPos> out;
  for (const json& coord : ring) {
    if (!coord.is_array() || coord.size() < 2) {
      throw std::runtime_error("coastline: ring coordinate is not [lon, lat]");
    }
    out.push_back(GeoPos{coord[1].get<double>(), coord[0].get<double>()});
  }
  if (out.size() >= 2 && out.front().lat == out.back().lat && out.front().lon == out.back().lon) {
    out.pop_back();  // drop the GeoJSON closing vertex
  }
  if (out.size() < 3) throw std::runtime_error("coastline: ring needs at least 3 vertices");
  return out;
}

// Even-odd test on the lon/lat plane; adequate at regional scales.
bool point_in_ring(const GeoPos& p, const std::vector<GeoPos>& ring) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const GeoPos& a = ring[i];
    const GeoPos& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double cross_lon = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < cross_lon) inside = !inside;
    }
  }
  return inside;
}

double segment_distance_m(const GeoPos& p, const GeoPos& a, const GeoPos& b, int depth = 0) {
  const double da = geodesic_distance(p, a);
  const double db = geodesic_distance(p, b);
  // Far segments only matter as "not coastal"; bisect until both endpoints fit
  // inside the tangent-plane validity radius.
  if (std::min(da, db) > 400'000.0 || depth > 8) return std::min(da, db);
  if (std::max(da, db) > 400'000.0) {
    const GeoPos mid{0.5 * (a.lat + b.lat), 0.5 * (a.lon + b.lon)};
    return std::min(segment_distance_m(p, a, mid, depth + 1),
                    segment_distance_m(p, mid, b, depth + 1));
  }
  const PlanarPos pa = project_local(p, a);
  const PlanarPos pb = project_local(p, b);
  const double dx = pb.x - pa.x;
  const double dy = pb.y - pa.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(-(pa.x * dx + pa.y * dy) / len2, 0.0, 1.0);
  }
  return std::hypot(pa.x + t * dx, pa.y + t * dy);
}

}  // namespace

Coastline Coastline::from_geojson_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coastline file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_geojson_text(text);
}

Coastline Coastline::from_geojson_text(const std::string& text) {
  Coastline c;
  const json doc = json::parse(text);

  auto add_geometry = [&](const json& geom) {
    const std::string type = geom.at("type").get<std::string>();
    if (type == "Polygon") {
      const json& rings = geom.at("coordinates");
      if (!rings.empty()) c.rings_.push_back(parse_ring(rings[0]));
    } else if (type == "MultiPolygon") {
      for (const json& poly : geom.at("coordinates")) {
        if (!poly.empty()) c.rings_.push_back(parse_ring(poly[0]));
      }
    } else {
      throw std::runtime_error("coastline: unsupported geometry type " + type);
    }
  };

  const std::string type = doc.at("type").get<std::string>();
  if (type == "FeatureCollection") {
    for (const json& f : doc.at("features")) add_geometry(f.at("geometry"));
  } else if (type == "Feature") {
    add_geometry(doc.at("geometry"));
  } else {
    add_geometry(doc);
  }
  return c;
}

double Coastline::distance_to(const GeoPos& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ring : rings_) {
    if (point_in_ring(p, ring)) return 0.0;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
      best = std::min(best, segment_distance_m(p, ring[j], ring[i]));
    }
  }
  return best;
}

}  // namespace aisdet
