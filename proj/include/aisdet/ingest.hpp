#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "aisdet/config.hpp"
#include "aisdet/records.hpp"

namespace aisdet {

inline constexpr double kKnotsToMps = 0.514444;

enum class InputFormat { ndjson, csv };

struct ParseError {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct ParseResult {
  std::vector<AisRecord> records;  // source order
  std::vector<ParseError> errors;
  std::size_t lines = 0;  // non-empty data lines seen
};

// Parses NDJSON or CSV (RFC-4180 quoting, header row) into records. Malformed
// lines are reported with line number and reason, never silently dropped.
ParseResult parse_records(std::istream& source, InputFormat format, SogUnit sog_unit);

// Canonical NDJSON form: fixed-precision fields (lat/lon 6 dp, sog 2 dp,
// cog/heading 1 dp), ISO-8601 ms timestamps. Reparsing reproduces the record
// exactly; Table-style printouts keep all their digits.
std::string to_ndjson_line(const AisRecord& r);

struct FilterResult {
  std::vector<AisRecord> records;
  std::size_t removed = 0;
  std::size_t removed_mmsis = 0;  // distinct MMSIs among removed records
};

// Collapses identical (mmsi, t, lat, lon, sog, cog) tuples to the first
// occurrence in canonical order; output globally sorted by (t, mmsi).
FilterResult dedup_exact(std::vector<AisRecord> records);

// Same-(mmsi, t) groups spread wider than d_scatter are dropped entirely;
// agreeing groups collapse to the first record. Input must be sorted (t, mmsi).
FilterResult filter_position_scatter(std::vector<AisRecord> records, double d_scatter_m);

// Keeps records inside the box, bounds inclusive.
FilterResult filter_bbox(std::vector<AisRecord> records, const BoundingBox& bbox);

// Groups records per MMSI; each track sorted by track_order_less.
std::map<std::uint32_t, Track> partition_by_mmsi(const std::vector<AisRecord>& records);

}  // namespace aisdet
