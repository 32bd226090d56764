#include "aisdet/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>

#include <openssl/evp.h>

#include "aisdet/comm_integrity.hpp"
#include "aisdet/imm.hpp"
#include "aisdet/ingest.hpp"
#include "aisdet/parallel.hpp"
#include "aisdet/tx_interval.hpp"

namespace aisdet {

namespace {

using nlohmann::json;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::size_t distinct_mmsis(const std::vector<AisRecord>& records) {
  std::set<std::uint32_t> s;
  for (const AisRecord& r : records) s.insert(r.mmsi);
  return s.size();
}

double pct_of(std::size_t part, std::size_t base) {
  return base == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(base);
}

struct TrackCues {
  std::vector<KinematicCue> kinematic;
  std::vector<GapCue> gaps;
  bool unprofiled = false;
};

}  // namespace

PipelineOutput run_pipeline_records(std::vector<AisRecord> records, const PipelineConfig& cfg,
                                    RunMode mode) {
  cfg.validate();
  PipelineOutput out;
  json timings = json::object();
  double t0 = now_ms();

  const std::size_t initial_points = records.size();
  const std::size_t initial_mmsis = distinct_mmsis(records);
  out.report.rows.push_back({"preprocess", "input records", "n/a", initial_points, initial_mmsis,
                             pct_of(initial_points, initial_points)});

  // Preprocess: dedup -> scatter -> bbox.
  FilterResult step = dedup_exact(std::move(records));
  out.report.rows.push_back({"preprocess", "exact duplicates removed", "n/a", step.removed,
                             step.removed_mmsis, pct_of(step.removed, initial_points)});
  step = filter_position_scatter(std::move(step.records), cfg.d_scatter);
  out.report.rows.push_back({"preprocess", "same-timestamp position scatter removed", "n/a",
                             step.removed, step.removed_mmsis, pct_of(step.removed, initial_points)});
  step = filter_bbox(std::move(step.records), cfg.bbox);
  out.report.rows.push_back({"preprocess", "outside bounding box removed", "n/a", step.removed,
                             step.removed_mmsis, pct_of(step.removed, initial_points)});
  std::vector<AisRecord> preprocessed = std::move(step.records);
  out.report.rows.push_back({"preprocess", "records after preprocessing", "n/a",
                             preprocessed.size(), distinct_mmsis(preprocessed),
                             pct_of(preprocessed.size(), initial_points)});
  timings["preprocess_ms"] = now_ms() - t0;
  t0 = now_ms();

  // Stage 1 (skipped entirely in baseline mode).
  std::map<std::uint32_t, Track> tracks = partition_by_mmsi(preprocessed);
  if (mode == RunMode::full) {
    preprocessed.clear();
    preprocessed.shrink_to_fit();
    const Stage1Report s1 = run_stage1(tracks, cfg, static_cast<unsigned>(cfg.workers));
    out.report.rows.push_back({"stage1", "MMSI duplication artifacts removed", "n/a",
                               s1.dup_points, s1.dup_mmsis, pct_of(s1.dup_points, initial_points)});
    out.report.rows.push_back({"stage1", "stale-data retransmission artifacts removed", "n/a",
                               s1.stale_points, s1.stale_mmsis,
                               pct_of(s1.stale_points, initial_points)});
    for (const auto& [mmsi, track] : tracks) {
      preprocessed.insert(preprocessed.end(), track.records.begin(), track.records.end());
    }
    sort_canonical(preprocessed);
    out.report.rows.push_back({"stage1", "records after communication-integrity diagnostics",
                               "n/a", preprocessed.size(), tracks.size(),
                               pct_of(preprocessed.size(), initial_points)});
  }
  timings["stage1_ms"] = now_ms() - t0;
  t0 = now_ms();

  // Stage 2: kinematic and transmission-continuity cues, sharded per track.
  std::vector<const Track*> order;
  order.reserve(tracks.size());
  for (const auto& [mmsi, track] : tracks) order.push_back(&track);
  std::vector<TrackCues> cue_slots(order.size());
  parallel_for(order.size(), static_cast<unsigned>(cfg.workers), [&](std::size_t i) {
    TrackCues& slot = cue_slots[i];
    slot.kinematic = extract_kinematic_cues(*order[i], cfg);
    const auto profile = tx_profile(*order[i], cfg);
    if (profile) {
      slot.gaps = extract_gap_cues(*order[i], *profile);
    } else {
      slot.unprofiled = true;
    }
  });

  std::size_t unprofiled = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const KinematicCue& c : cue_slots[i].kinematic) {
      out.kinematic_cues.push_back(AnomalyCue::from(c));
    }
    for (const GapCue& c : cue_slots[i].gaps) out.gap_cues.push_back(AnomalyCue::from(c));
    if (cue_slots[i].unprofiled) ++unprofiled;
  }
  std::sort(out.kinematic_cues.begin(), out.kinematic_cues.end(), cue_less);
  std::sort(out.gap_cues.begin(), out.gap_cues.end(), cue_less);

  {
    std::set<std::uint32_t> km, gm;
    for (const AnomalyCue& c : out.kinematic_cues) km.insert(c.mmsi);
    for (const AnomalyCue& c : out.gap_cues) gm.insert(c.mmsi);
    out.report.rows.push_back({"stage2", "kinematic-consistency anomaly cues", "kinematic",
                               out.kinematic_cues.size(), km.size(), 100.0});
    out.report.rows.push_back({"stage2", "transmission-continuity anomaly cues", "tx_gap",
                               out.gap_cues.size(), gm.size(), 100.0});
    out.report.rows.push_back({"stage2", "tracks without transmission profile", "tx_gap",
                               unprofiled, unprofiled, pct_of(unprofiled, tracks.size())});
  }
  timings["stage2_ms"] = now_ms() - t0;
  t0 = now_ms();

  // Stage 3.
  const TrafficIndex traffic(preprocessed, cfg.eps_s, cfg.eps_t);
  Coastline coastline;
  if (!cfg.coastline_path.empty()) coastline = Coastline::from_geojson_file(cfg.coastline_path);
  CategorizeOptions options;
  options.baseline = mode == RunMode::baseline;
  auto [events, s3] = categorize_all(out.kinematic_cues, out.gap_cues, traffic, cfg, coastline,
                                     options);
  out.events = std::move(events);

  const auto push_kind_rows = [&](const Stage3KindReport& kr, const char* kind,
                                  const char* interference_name) {
    const std::size_t base = kr.total_cues;
    out.report.rows.push_back({"stage3", "ST-DBSCAN noise (unclustered cues)", kind,
                               kr.noise.points, kr.noise.mmsis, pct_of(kr.noise.points, base)});
    out.report.rows.push_back({"stage3", "persistent sensor-integrity artifacts", kind,
                               kr.persistent.points, kr.persistent.mmsis,
                               pct_of(kr.persistent.points, base)});
    out.report.rows.push_back({"stage3", "transient sensor-integrity artifacts", kind,
                               kr.transient.points, kr.transient.mmsis,
                               pct_of(kr.transient.points, base)});
    out.report.rows.push_back({"stage3", interference_name, kind, kr.interference.points,
                               kr.interference.mmsis, pct_of(kr.interference.points, base)});
    out.report.rows.push_back({"stage3", "final multi-vessel clusters", kind, kr.final_clusters,
                               0, pct_of(kr.final_clusters, base)});
  };
  push_kind_rows(s3.kinematic, "kinematic", "GNSS spoofing");
  push_kind_rows(s3.tx_gap, "tx_gap", "GNSS jamming");
  timings["stage3_ms"] = now_ms() - t0;

  out.manifest = json{{"tool", "aisdet"},
                      {"version", "0.1.0"},
                      {"mode", mode == RunMode::full ? "full" : "baseline"},
                      {"workers", cfg.workers},
                      {"config", cfg.to_json()},
                      {"timings_ms", timings},
                      {"input_records", initial_points},
                      {"inputs", json::array()}};
  return out;
}

PipelineOutput run_pipeline(const std::vector<std::string>& inputs, const PipelineConfig& cfg,
                            RunMode mode, const std::string& force_format) {
  std::vector<AisRecord> records;
  std::size_t parse_errors = 0;
  std::size_t parsed_lines = 0;
  json input_meta = json::array();

  for (const std::string& path : inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError("cannot open input: " + path);
    InputFormat format = InputFormat::ndjson;
    if (force_format == "csv") {
      format = InputFormat::csv;
    } else if (force_format.empty() || force_format == "auto") {
      if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") format = InputFormat::csv;
    }
    ParseResult parsed = parse_records(in, format, cfg.sog_unit);
    parse_errors += parsed.errors.size();
    parsed_lines += parsed.lines;
    records.insert(records.end(), parsed.records.begin(), parsed.records.end());
    input_meta.push_back(json{{"path", path},
                              {"sha256", sha256_hex_file(path)},
                              {"lines", parsed.lines},
                              {"errors", parsed.errors.size()}});
  }

  PipelineOutput out = run_pipeline_records(std::move(records), cfg, mode);
  out.parse_errors = parse_errors;
  out.parsed_lines = parsed_lines;
  out.manifest["inputs"] = input_meta;
  out.manifest["parse_errors"] = parse_errors;
  return out;
}

std::string stage_table_csv(const StageReport& report) {
  std::string out = "stage,process,cue_kind,points,mmsis,pct\n";
  char buf[64];
  for (const StageRow& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%.2f", r.pct);
    out += r.stage + ",\"" + r.process + "\"," + r.cue_kind + "," + std::to_string(r.points) +
           "," + std::to_string(r.mmsis) + "," + buf + "\n";
  }
  return out;
}

json stage_table_json(const StageReport& report) {
  json rows = json::array();
  char buf[64];
  for (const StageRow& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%.2f", r.pct);
    rows.push_back(json{{"stage", r.stage},
                        {"process", r.process},
                        {"cue_kind", r.cue_kind},
                        {"points", r.points},
                        {"mmsis", r.mmsis},
                        {"pct", std::stod(buf)}});
  }
  // record rows measure shares of parsed input; cue rows shares of their own
  // cue kind
  return json{{"pct_base", "records: parsed input; cues: per-kind stage-2 totals"},
              {"rows", rows}};
}

json events_geojson(const std::vector<StEvent>& events) {
  json features = json::array();
  for (const StEvent& e : events) {
    if (e.category == EventCategory::noise) continue;
    json props{{"cluster_id", e.cluster_id},
               {"category", to_string(e.category)},
               {"cue_kind", to_string(e.kind)},
               {"mmsi_count", e.mmsis.size()},
               {"mmsis", e.mmsis},
               {"t_start", e.t_start},
               {"t_end", e.t_end},
               {"t_start_iso", format_time_utc(e.t_start)},
               {"t_end_iso", format_time_utc(e.t_end)},
               {"radius_m", e.radius_m},
               {"anomalous_ratio", e.anomalous_ratio},
               {"cue_count", e.members.size()}};
    features.push_back(json{{"type", "Feature"},
                            {"geometry", json{{"type", "Point"},
                                              {"coordinates", {e.centroid.lon, e.centroid.lat}}}},
                            {"properties", props}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}};
}

json cues_geojson(const PipelineOutput& out) {
  json features = json::array();
  for (const StEvent& e : out.events) {
    if (e.category == EventCategory::noise) continue;
    const auto& cues = e.kind == CueKind::kinematic ? out.kinematic_cues : out.gap_cues;
    json coords = json::array();
    for (const std::size_t m : e.members) {
      coords.push_back({cues[m].pos.lon, cues[m].pos.lat});
    }
    features.push_back(json{{"type", "Feature"},
                            {"geometry", json{{"type", "MultiPoint"}, {"coordinates", coords}}},
                            {"properties", json{{"cluster_id", e.cluster_id},
                                                {"category", to_string(e.category)}}}});
  }
  return json{{"type", "FeatureCollection"}, {"features", features}};
}

std::vector<StEvent> events_from_geojson(const json& doc) {
  std::vector<StEvent> events;
  for (const json& f : doc.at("features")) {
    StEvent e;
    const json& props = f.at("properties");
    const std::string cat = props.at("category").get<std::string>();
    if (cat == "spoofing") e.category = EventCategory::spoofing;
    else if (cat == "jamming") e.category = EventCategory::jamming;
    else if (cat == "persistent_sensor") e.category = EventCategory::persistent_sensor;
    else if (cat == "transient_sensor") e.category = EventCategory::transient_sensor;
    else e.category = EventCategory::noise;
    e.kind = props.at("cue_kind").get<std::string>() == "kinematic" ? CueKind::kinematic
                                                                    : CueKind::tx_gap;
    e.cluster_id = props.at("cluster_id").get<int>();
    e.t_start = props.at("t_start").get<EpochMs>();
    e.t_end = props.at("t_end").get<EpochMs>();
    e.mmsis = props.at("mmsis").get<std::vector<std::uint32_t>>();
    e.anomalous_ratio = props.at("anomalous_ratio").get<double>();
    e.radius_m = props.at("radius_m").get<double>();
    const json& coords = f.at("geometry").at("coordinates");
    e.centroid = GeoPos{coords.at(1).get<double>(), coords.at(0).get<double>()};
    events.push_back(std::move(e));
  }
  return events;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PipelineError("cannot write: " + tmp.string());
    out << content;
    if (!out) throw PipelineError("short write: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string sha256_hex_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PipelineError("cannot open for digest: " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

void write_outputs(const PipelineOutput& out, const std::filesystem::path& out_dir,
                   bool emit_cues) {
  std::filesystem::create_directories(out_dir);
  write_file_atomic(out_dir / "events.geojson", events_geojson(out.events).dump(2) + "\n");
  write_file_atomic(out_dir / "stage_table.csv", stage_table_csv(out.report));
  write_file_atomic(out_dir / "stage_table.json", stage_table_json(out.report).dump(2) + "\n");
  write_file_atomic(out_dir / "manifest.json", out.manifest.dump(2) + "\n");
  if (emit_cues) {
    write_file_atomic(out_dir / "cues.geojson", cues_geojson(out).dump(2) + "\n");
  }
}

}  // namespace aisdet
