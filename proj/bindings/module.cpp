#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "aisdet/geo.hpp"
#include "aisdet/ingest.hpp"
#include "aisdet/pipeline.hpp"
#include "aisdet/st_cluster.hpp"
#include "aisdet/synth.hpp"

namespace py = pybind11;
using namespace aisdet;

namespace {

py::dict event_to_dict(const StEvent& e) {
  py::dict d;
  d["cluster_id"] = e.cluster_id;
  d["category"] = to_string(e.category);
  d["cue_kind"] = to_string(e.kind);
  d["mmsis"] = e.mmsis;
  d["mmsi_count"] = e.mmsis.size();
  d["t_start"] = e.t_start;
  d["t_end"] = e.t_end;
  d["lat"] = e.centroid.lat;
  d["lon"] = e.centroid.lon;
  d["radius_m"] = e.radius_m;
  d["anomalous_ratio"] = e.anomalous_ratio;
  d["cue_count"] = e.members.size();
  return d;
}

py::dict run_files(const std::vector<std::string>& inputs, const std::string& config_json,
                   const std::string& out_dir, bool baseline, int workers) {
  PipelineConfig cfg;
  if (!config_json.empty()) cfg = PipelineConfig::from_json_text(config_json);
  if (workers > 0) cfg.workers = workers;
  const RunMode mode = baseline ? RunMode::baseline : RunMode::full;
  const PipelineOutput out = run_pipeline(inputs, cfg, mode);
  if (!out_dir.empty()) write_outputs(out, out_dir);

  py::list events;
  for (const StEvent& e : out.events) {
    if (e.category != EventCategory::noise) events.append(event_to_dict(e));
  }
  py::dict result;
  result["events"] = events;
  result["parsed_lines"] = out.parsed_lines;
  result["parse_errors"] = out.parse_errors;
  result["stage_table_csv"] = stage_table_csv(out.report);
  result["kinematic_cue_count"] = out.kinematic_cues.size();
  result["gap_cue_count"] = out.gap_cues.size();
  return result;
}

py::dict synth_to_dir(const std::string& scenario_json, const std::string& out_dir) {
  const Scenario scenario = Scenario::from_json(nlohmann::json::parse(scenario_json));
  const SynthOutput out = generate_scenario(scenario);
  std::filesystem::create_directories(out_dir);
  std::string ndjson;
  for (const AisRecord& r : out.records) {
    ndjson += to_ndjson_line(r);
    ndjson += '\n';
  }
  const auto dir = std::filesystem::path(out_dir);
  write_file_atomic(dir / "records.ndjson", ndjson);
  write_file_atomic(dir / "truth.ndjson", truth_to_ndjson(out.truth));
  py::dict d;
  d["records"] = out.records.size();
  d["truth_events"] = out.truth.events.size();
  d["records_path"] = (dir / "records.ndjson").string();
  d["truth_path"] = (dir / "truth.ndjson").string();
  return d;
}

std::string eval_files(const std::string& events_geojson_path, const std::string& truth_path,
                       double radius_m, double window_s) {
  std::ifstream ev(events_geojson_path);
  if (!ev) throw std::runtime_error("cannot open " + events_geojson_path);
  nlohmann::json doc;
  ev >> doc;
  std::ifstream tr(truth_path);
  if (!tr) throw std::runtime_error("cannot open " + truth_path);
  const GroundTruth truth = truth_from_ndjson(tr);
  const Metrics m = evaluate(events_from_geojson(doc), truth, MatchParams{radius_m, window_s});
  return m.to_json().dump();
}

std::vector<int> st_dbscan_py(const std::vector<std::tuple<double, double, double>>& points,
                              double eps_s_m, double eps_t_s, int min_pts) {
  std::vector<AnomalyCue> cues;
  cues.reserve(points.size());
  for (const auto& [lat, lon, t_s] : points) {
    AnomalyCue c;
    c.pos = GeoPos{lat, lon};
    c.t = static_cast<EpochMs>(t_s * 1000.0);
    cues.push_back(c);
  }
  // Caller ordering is preserved so labels map back to the input rows.
  return st_dbscan(cues, eps_s_m, eps_t_s, min_pts);
}

}  // namespace

PYBIND11_MODULE(_aisdet, m) {
  m.doc() = "AIS-based GNSS interference detection pipeline";

  m.def("geodesic_distance",
        [](double lat1, double lon1, double lat2, double lon2) {
          return geodesic_distance(GeoPos{lat1, lon1}, GeoPos{lat2, lon2});
        },
        py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"),
        "Great-circle distance in meters");

  m.def("jamming_threshold", &jamming_threshold, py::arg("median_s"), py::arg("kappa"),
        py::arg("t_min_s"));

  m.def("st_dbscan", &st_dbscan_py, py::arg("points"), py::arg("eps_s_m"), py::arg("eps_t_s"),
        py::arg("min_pts"),
        "Cluster (lat, lon, t_seconds) tuples; returns a cluster id per point, -1 for noise");

  m.def("run_pipeline", &run_files, py::arg("inputs"), py::arg("config_json") = std::string(),
        py::arg("out_dir") = std::string(), py::arg("baseline") = false, py::arg("workers") = 0,
        "Run the full pipeline over AIS files and optionally write outputs");

  m.def("generate_scenario", &synth_to_dir, py::arg("scenario_json"), py::arg("out_dir"),
        "Generate a synthetic scenario (records.ndjson + truth.ndjson)");

  m.def("evaluate", &eval_files, py::arg("events_geojson"), py::arg("truth_ndjson"),
        py::arg("radius_m") = 10'000.0, py::arg("window_s") = 1800.0,
        "Score detected events against ground truth; returns metrics JSON");

  m.def("default_config_json", [] { return PipelineConfig{}.to_json().dump(2); });

  m.attr("__version__") = "0.1.0";
}
