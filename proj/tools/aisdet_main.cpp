#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aisdet/ingest.hpp"
#include "aisdet/pipeline.hpp"
#include "aisdet/synth.hpp"

namespace {

using nlohmann::json;

int log_level() {
  const char* env = std::getenv("AISDET_LOG");
  if (!env) return 1;  // info
  const std::string v(env);
  if (v == "debug") return 0;
  if (v == "warn") return 2;
  if (v == "error") return 3;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() <= 1) std::fprintf(stderr, "[aisdet] %s\n", msg.c_str());
}

int cmd_run(const std::vector<std::string>& inputs, const std::string& config_path,
            const std::string& out_dir, bool baseline, int workers_override,
            const std::string& format, bool emit_cues) {
  aisdet::PipelineConfig cfg;
  if (!config_path.empty()) cfg = aisdet::PipelineConfig::from_file(config_path);
  if (workers_override > 0) cfg.workers = workers_override;

  const aisdet::RunMode mode = baseline ? aisdet::RunMode::baseline : aisdet::RunMode::full;
  aisdet::PipelineOutput out = aisdet::run_pipeline(inputs, cfg, mode, format);
  aisdet::write_outputs(out, out_dir, emit_cues);

  std::size_t event_count = 0;
  for (const auto& e : out.events) {
    if (e.category != aisdet::EventCategory::noise) ++event_count;
  }
  log_info("parsed " + std::to_string(out.parsed_lines) + " lines, " +
           std::to_string(out.parse_errors) + " parse errors, " + std::to_string(event_count) +
           " events -> " + out_dir);

  if (out.parsed_lines > 0) {
    const double ratio =
        static_cast<double>(out.parse_errors) / static_cast<double>(out.parsed_lines);
    if (ratio > cfg.max_parse_error_ratio) {
      std::fprintf(stderr, "[aisdet] parse error ratio %.4f exceeds limit %.4f\n", ratio,
                   cfg.max_parse_error_ratio);
      return 2;
    }
  }
  return 0;
}

int cmd_synth(const std::string& scenario_path, const std::string& out_dir) {
  const aisdet::Scenario scenario = aisdet::Scenario::from_file(scenario_path);
  const aisdet::SynthOutput out = aisdet::generate_scenario(scenario);

  std::filesystem::create_directories(out_dir);
  std::string ndjson;
  ndjson.reserve(out.records.size() * 120);
  for (const aisdet::AisRecord& r : out.records) {
    ndjson += aisdet::to_ndjson_line(r);
    ndjson += '\n';
  }
  aisdet::write_file_atomic(std::filesystem::path(out_dir) / "records.ndjson", ndjson);
  aisdet::write_file_atomic(std::filesystem::path(out_dir) / "truth.ndjson",
                            aisdet::truth_to_ndjson(out.truth));
  log_info("wrote " + std::to_string(out.records.size()) + " records, " +
           std::to_string(out.truth.events.size()) + " truth events -> " + out_dir);
  return 0;
}

int cmd_eval(const std::string& events_path, const std::string& truth_path,
             const std::string& out_path, const std::string& baseline_events_path,
             double radius_m, double window_s) {
  std::ifstream ev(events_path);
  if (!ev) throw aisdet::PipelineError("cannot open events: " + events_path);
  json events_doc;
  ev >> events_doc;
  const std::vector<aisdet::StEvent> events = aisdet::events_from_geojson(events_doc);

  std::ifstream tr(truth_path);
  if (!tr) throw aisdet::PipelineError("cannot open truth: " + truth_path);
  const aisdet::GroundTruth truth = aisdet::truth_from_ndjson(tr);

  const aisdet::MatchParams params{radius_m, window_s};
  const aisdet::Metrics metrics = aisdet::evaluate(events, truth, params);
  json result{{"full", metrics.to_json()}};

  if (!baseline_events_path.empty()) {
    std::ifstream bev(baseline_events_path);
    if (!bev) throw aisdet::PipelineError("cannot open baseline events: " + baseline_events_path);
    json base_doc;
    bev >> base_doc;
    const aisdet::Metrics base =
        aisdet::evaluate(aisdet::events_from_geojson(base_doc), truth, params);
    result["baseline"] = base.to_json();
    const double fa_full = static_cast<double>(metrics.interference_false_alarms);
    const double fa_base = static_cast<double>(base.interference_false_alarms);
    result["false_alarm_reduction"] = fa_base > 0.0 ? (fa_base - fa_full) / fa_base : 0.0;
  }

  aisdet::write_file_atomic(out_path, result.dump(2) + "\n");
  log_info("metrics -> " + out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AIS-based GNSS interference detection pipeline"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run the detection pipeline over AIS files");
  std::vector<std::string> inputs;
  std::string config_path, out_dir, format = "auto";
  bool baseline = false, emit_cues = false;
  int workers = 0;
  run->add_option("--input", inputs, "Input files (NDJSON or CSV)")->required()->expected(-1);
  run->add_option("--config", config_path, "Pipeline config JSON (defaults when omitted)");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--baseline", baseline, "Naive-clustering comparator: skip stage 1 and gates");
  run->add_option("--workers", workers, "Worker threads (overrides config)");
  run->add_option("--format", format, "Force input format: auto|ndjson|csv")
      ->check(CLI::IsMember({"auto", "ndjson", "csv"}));
  run->add_flag("--cues", emit_cues, "Also write member cues as a MultiPoint sidecar");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario with ground truth");
  std::string scenario_path, synth_out;
  synth->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "Score detected events against ground truth");
  std::string events_path, truth_path, eval_out, baseline_events;
  double radius_m = 10'000.0, window_s = 1800.0;
  eval->add_option("--events", events_path, "events.geojson from a full run")->required();
  eval->add_option("--truth", truth_path, "truth.ndjson from synth")->required();
  eval->add_option("--out", eval_out, "Metrics JSON output path")->required();
  eval->add_option("--baseline-events", baseline_events, "events.geojson from a --baseline run");
  eval->add_option("--radius", radius_m, "Match radius in meters");
  eval->add_option("--window", window_s, "Match window in seconds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(inputs, config_path, out_dir, baseline, workers, format, emit_cues);
    }
    if (synth->parsed()) return cmd_synth(scenario_path, synth_out);
    if (eval->parsed()) {
      return cmd_eval(events_path, truth_path, eval_out, baseline_events, radius_m, window_s);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "[aisdet] fatal: %s\n", e.what());
    return 1;
  }
  return 0;
}
