#include "aisdet/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>

#include <nlohmann/json.hpp>

#include "aisdet/geo.hpp"

namespace aisdet {

namespace {

using nlohmann::json;

std::optional<std::string> validate_ranges(const AisRecord& r) {
  if (r.mmsi < 1 || r.mmsi > 999'999'999) return "mmsi out of range";
  if (!(r.lat >= -90.0 && r.lat <= 90.0)) return "lat out of range";
  if (!(r.lon >= -180.0 && r.lon <= 180.0)) return "lon out of range";
  if (!std::isfinite(r.sog) || r.sog < 0.0) return "sog out of range";
  if (!(r.cog >= 0.0 && r.cog < 360.0)) return "cog out of range";
  if (r.heading != kNoHeading && !(r.heading >= 0.0 && r.heading < 360.0)) {
    return "heading out of range";
  }
  return std::nullopt;
}

std::optional<std::string> parse_ndjson_record(const std::string& line, AisRecord& out) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    return std::string("invalid JSON: ") + e.what();
  }
  if (!j.is_object()) return "line is not a JSON object";

  auto need_number = [&](const char* key, double& dst) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end()) return std::string("missing field '") + key + "'";
    if (!it->is_number()) return std::string("field '") + key + "' is not a number";
    dst = it->get<double>();
    return std::nullopt;
  };

  auto it = j.find("mmsi");
  if (it == j.end()) return "missing field 'mmsi'";
  if (!it->is_number_integer() || it->get<std::int64_t>() < 0) return "mmsi must be a non-negative integer";
  const std::int64_t mmsi64 = it->get<std::int64_t>();
  if (mmsi64 > 999'999'999) return "mmsi out of range";
  out.mmsi = static_cast<std::uint32_t>(mmsi64);

  it = j.find("t");
  if (it == j.end()) return "missing field 't'";
  if (it->is_number_integer()) {
    out.t = it->get<std::int64_t>();
  } else if (it->is_string()) {
    auto t = parse_time_utc(it->get<std::string>());
    if (!t) return "unparseable timestamp";
    out.t = *t;
  } else {
    return "field 't' must be an ISO-8601 string or integer epoch-ms";
  }

  if (auto err = need_number("lat", out.lat)) return err;
  if (auto err = need_number("lon", out.lon)) return err;
  if (auto err = need_number("sog", out.sog)) return err;
  if (auto err = need_number("cog", out.cog)) return err;

  out.heading = kNoHeading;
  if (auto h = j.find("heading"); h != j.end() && !h->is_null()) {
    if (!h->is_number()) return "field 'heading' is not a number";
    out.heading = h->get<double>();
  }
  return validate_ranges(out);
}

// RFC-4180 field splitting for one physical line (numeric AIS exports carry
// no embedded newlines).
std::optional<std::string> split_csv(const std::string& line, std::vector<std::string>& fields) {
  fields.clear();
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      if (!cur.empty()) return "stray quote inside unquoted field";
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) return "unterminated quoted field";
  fields.push_back(std::move(cur));
  return std::nullopt;
}

bool parse_double_field(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size() && s.size() > 0 && std::isfinite(out);
}

struct CsvLayout {
  int mmsi = -1, t = -1, lat = -1, lon = -1, sog = -1, cog = -1, heading = -1;
};

std::optional<std::string> parse_csv_header(const std::string& line, CsvLayout& layout) {
  std::vector<std::string> names;
  if (auto err = split_csv(line, names)) return err;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string& n = names[i];
    const int idx = static_cast<int>(i);
    if (n == "mmsi") layout.mmsi = idx;
    else if (n == "t") layout.t = idx;
    else if (n == "lat") layout.lat = idx;
    else if (n == "lon") layout.lon = idx;
    else if (n == "sog") layout.sog = idx;
    else if (n == "cog") layout.cog = idx;
    else if (n == "heading") layout.heading = idx;
    else return "unknown CSV column '" + n + "'";
  }
  if (layout.mmsi < 0 || layout.t < 0 || layout.lat < 0 || layout.lon < 0 ||
      layout.sog < 0 || layout.cog < 0) {
    return std::string("CSV header must name mmsi,t,lat,lon,sog,cog");
  }
  return std::nullopt;
}

std::optional<std::string> parse_csv_record(const std::string& line, const CsvLayout& layout,
                                            AisRecord& out) {
  std::vector<std::string> fields;
  if (auto err = split_csv(line, fields)) return err;
  auto field = [&](int idx) -> const std::string* {
    if (idx < 0 || idx >= static_cast<int>(fields.size())) return nullptr;
    return &fields[static_cast<std::size_t>(idx)];
  };

  const std::string* f = field(layout.mmsi);
  if (!f || f->empty()) return "missing field 'mmsi'";
  std::int64_t mmsi64 = 0;
  auto [ptr, ec] = std::from_chars(f->data(), f->data() + f->size(), mmsi64);
  if (ec != std::errc{} || ptr != f->data() + f->size() || mmsi64 < 0 || mmsi64 > 999'999'999) {
    return "mmsi out of range";
  }
  out.mmsi = static_cast<std::uint32_t>(mmsi64);

  f = field(layout.t);
  if (!f || f->empty()) return "missing field 't'";
  auto t = parse_time_utc(*f);
  if (!t) return "unparseable timestamp";
  out.t = *t;

  auto need = [&](int idx, const char* name, double& dst) -> std::optional<std::string> {
    const std::string* v = field(idx);
    if (!v || v->empty()) return std::string("missing field '") + name + "'";
    if (!parse_double_field(*v, dst)) return std::string("field '") + name + "' is not a number";
    return std::nullopt;
  };
  if (auto err = need(layout.lat, "lat", out.lat)) return err;
  if (auto err = need(layout.lon, "lon", out.lon)) return err;
  if (auto err = need(layout.sog, "sog", out.sog)) return err;
  if (auto err = need(layout.cog, "cog", out.cog)) return err;

  out.heading = kNoHeading;
  if (const std::string* h = field(layout.heading); h && !h->empty()) {
    if (!parse_double_field(*h, out.heading)) return "field 'heading' is not a number";
  }
  return validate_ranges(out);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

ParseResult parse_records(std::istream& source, InputFormat format, SogUnit sog_unit) {
  ParseResult result;
  std::string line;
  std::size_t lineno = 0;
  CsvLayout layout;
  bool header_done = false;

  while (std::getline(source, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;

    if (format == InputFormat::csv && !header_done) {
      if (auto err = parse_csv_header(line, layout)) {
        result.errors.push_back({lineno, *err});
        return result;  // a broken header makes every further line unreadable
      }
      header_done = true;
      continue;
    }

    ++result.lines;
    AisRecord rec;
    const auto err = format == InputFormat::ndjson ? parse_ndjson_record(line, rec)
                                                   : parse_csv_record(line, layout, rec);
    if (err) {
      result.errors.push_back({lineno, *err});
      continue;
    }
    if (sog_unit == SogUnit::knots) rec.sog *= kKnotsToMps;
    result.records.push_back(rec);
  }
  return result;
}

std::string to_ndjson_line(const AisRecord& r) {
  std::array<char, 256> buf{};
  int n;
  if (r.has_heading()) {
    n = std::snprintf(buf.data(), buf.size(),
                      R"({"mmsi":%u,"t":"%s","lat":%.6f,"lon":%.6f,"sog":%.2f,"cog":%.1f,"heading":%.1f})",
                      r.mmsi, format_time_utc(r.t).c_str(), r.lat, r.lon, r.sog, r.cog, r.heading);
  } else {
    n = std::snprintf(buf.data(), buf.size(),
                      R"({"mmsi":%u,"t":"%s","lat":%.6f,"lon":%.6f,"sog":%.2f,"cog":%.1f})",
                      r.mmsi, format_time_utc(r.t).c_str(), r.lat, r.lon, r.sog, r.cog);
  }
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

FilterResult dedup_exact(std::vector<AisRecord> records) {
  const std::size_t before = records.size();
  sort_canonical(records);
  std::set<std::uint32_t> removed_mmsis;
  std::size_t w = 0;
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (r > 0 && same_nav_tuple(records[r], records[w - 1])) {
      removed_mmsis.insert(records[r].mmsi);
      continue;
    }
    records[w++] = records[r];
  }
  records.resize(w);
  return FilterResult{std::move(records), before - w, removed_mmsis.size()};
}

FilterResult filter_position_scatter(std::vector<AisRecord> records, double d_scatter_m) {
  std::vector<AisRecord> kept;
  kept.reserve(records.size());
  std::size_t removed = 0;
  std::set<std::uint32_t> removed_mmsis;

  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i + 1;
    while (j < records.size() && records[j].t == records[i].t && records[j].mmsi == records[i].mmsi) {
      ++j;
    }
    const std::size_t group = j - i;
    if (group == 1) {
      kept.push_back(records[i]);
    } else {
      bool scattered = false;
      for (std::size_t a = i; a < j && !scattered; ++a) {
        for (std::size_t b = a + 1; b < j && !scattered; ++b) {
          if (geodesic_distance(records[a].pos(), records[b].pos()) > d_scatter_m) scattered = true;
        }
      }
      if (scattered) {
        removed += group;  // cannot arbitrate which position is true
        removed_mmsis.insert(records[i].mmsi);
      } else {
        kept.push_back(records[i]);
        removed += group - 1;
        if (group > 1) removed_mmsis.insert(records[i].mmsi);
      }
    }
    i = j;
  }
  return FilterResult{std::move(kept), removed, removed_mmsis.size()};
}

FilterResult filter_bbox(std::vector<AisRecord> records, const BoundingBox& bbox) {
  const std::size_t before = records.size();
  std::set<std::uint32_t> removed_mmsis;
  auto last = std::remove_if(records.begin(), records.end(), [&](const AisRecord& r) {
    if (bbox.contains(r.pos())) return false;
    removed_mmsis.insert(r.mmsi);
    return true;
  });
  records.erase(last, records.end());
  const std::size_t removed = before - records.size();
  return FilterResult{std::move(records), removed, removed_mmsis.size()};
}

std::map<std::uint32_t, Track> partition_by_mmsi(const std::vector<AisRecord>& records) {
  std::map<std::uint32_t, Track> tracks;
  for (const AisRecord& r : records) {
    Track& t = tracks[r.mmsi];
    t.mmsi = r.mmsi;
    t.records.push_back(r);
  }
  for (auto& [mmsi, track] : tracks) {
    std::stable_sort(track.records.begin(), track.records.end(), track_order_less);
  }
  return tracks;
}

}  // namespace aisdet
