#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aisdet/config.hpp"
#include "aisdet/st_cluster.hpp"
#include "aisdet/synth.hpp"

namespace aisdet {

struct PipelineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RunMode { full, baseline };

struct StageRow {
  std::string stage;     // preprocess | stage1 | stage2 | stage3
  std::string process;
  std::string cue_kind;  // kinematic | tx_gap | n/a
  std::size_t points = 0;
  std::size_t mmsis = 0;
  double pct = 0.0;  // record rows: share of parsed input; cue rows: share of that kind's cues
};

struct StageReport {
  std::vector<StageRow> rows;
};

struct PipelineOutput {
  std::vector<StEvent> events;  // all clusters, including demoted noise
  StageReport report;
  nlohmann::json manifest;
  std::size_t parsed_lines = 0;
  std::size_t parse_errors = 0;
  std::vector<AnomalyCue> kinematic_cues;  // canonical order, matches event member indices
  std::vector<AnomalyCue> gap_cues;
};

// In-memory pipeline over already-parsed records (preprocess -> stage 1 ->
// stage 2 -> stage 3; baseline mode skips stage 1 and every coherence gate).
PipelineOutput run_pipeline_records(std::vector<AisRecord> records, const PipelineConfig& cfg,
                                    RunMode mode);

// File-based pipeline: format inferred per path (.csv vs NDJSON) unless
// forced. Unreadable inputs throw PipelineError.
PipelineOutput run_pipeline(const std::vector<std::string>& inputs, const PipelineConfig& cfg,
                            RunMode mode, const std::string& force_format = "");

std::string stage_table_csv(const StageReport& report);
nlohmann::json stage_table_json(const StageReport& report);

// FeatureCollection of categorized events (noise clusters omitted).
nlohmann::json events_geojson(const std::vector<StEvent>& events);

// MultiPoint sidecar with every member cue of the categorized events.
nlohmann::json cues_geojson(const PipelineOutput& out);

// Events round-trip for the eval subcommand.
std::vector<StEvent> events_from_geojson(const nlohmann::json& doc);

void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string sha256_hex_file(const std::filesystem::path& path);

// Writes events.geojson, stage_table.csv/.json and manifest.json into out_dir.
void write_outputs(const PipelineOutput& out, const std::filesystem::path& out_dir,
                   bool emit_cues = false);

}  // namespace aisdet
