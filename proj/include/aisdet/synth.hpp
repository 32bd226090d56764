#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "aisdet/records.hpp"
#include "aisdet/st_cluster.hpp"

namespace aisdet {

enum class InjectionKind : std::uint8_t {
  spoofing,
  jamming,
  mmsi_duplication,
  stale_retransmission,
  persistent_sensor,
  transient_sensor,
};

const char* to_string(InjectionKind k);

struct Injection {
  InjectionKind kind = InjectionKind::spoofing;
  GeoPos center{};         // spoofing/jamming area, or imposter spawn point
  double radius_m = 0.0;   // spoofing/jamming
  double window_start_s = 0.0;  // relative to scenario start
  double window_end_s = 0.0;
  double offset_east_m = 0.0;   // spoofing & sensor displacement
  double offset_north_m = 0.0;
  double on_s = 0.0;   // jamming duty cycle
  double off_s = 0.0;
  int vessel_index = 0;   // duplication victim / stale & sensor subject
  int count = 0;          // stale: tuples to re-emit
  double delay_s = 0.0;   // stale: rebroadcast delay
  std::vector<int> days;  // sensor: scheduled day offsets from scenario start
  double daily_start_s = 0.0;     // sensor: window start within each day
  double daily_duration_s = 0.0;  // sensor: window length
  // Sensor deviations are intermittent scatter: one displaced fix per period,
  // spaced wider than the sub-track time gate so stage 1 cannot mistake the
  // deviation cloud for a second consistent emitter.
  double deviation_period_s = 960.0;
};

struct Scenario {
  std::uint64_t seed = 1;
  BoundingBox region{32.0, 37.0, 123.0, 133.0};
  double duration_s = 3600.0;
  int n_vessels = 10;
  double report_interval_s = 10.0;
  EpochMs start_t = 1730419200000;  // 2024-11-01T00:00:00Z
  std::vector<Injection> injections;

  static Scenario from_json(const nlohmann::json& j);
  static Scenario from_file(const std::string& path);
  nlohmann::json to_json() const;
};

struct TruthEvent {
  InjectionKind kind = InjectionKind::spoofing;
  GeoPos center{};
  double radius_m = 0.0;
  EpochMs t0 = 0;
  EpochMs t1 = 0;
  std::vector<std::uint32_t> mmsis;  // sorted distinct affected vessels
  std::size_t mutated_points = 0;    // records displaced/inserted/deleted
};

struct RecordLabel {
  std::uint32_t mmsi = 0;
  EpochMs t = 0;
  InjectionKind kind = InjectionKind::spoofing;
};

struct GroundTruth {
  std::vector<TruthEvent> events;
  std::vector<RecordLabel> labels;  // one per surviving mutated/inserted record
};

struct SynthOutput {
  std::vector<AisRecord> records;  // canonical (t, mmsi) order
  GroundTruth truth;
};

// Piecewise CV/CTRV traffic inside the region; every record labeled normal.
SynthOutput generate_baseline(const Scenario& scenario);

// Applies one injection in place. Throws std::runtime_error when the
// injection touches no traffic (misconfigured scenario).
void inject(std::vector<AisRecord>& records, GroundTruth& truth, const Scenario& scenario,
            const Injection& injection, std::size_t injection_index);

// Baseline plus all injections, records re-sorted canonically.
SynthOutput generate_scenario(const Scenario& scenario);

// Truth sidecar (NDJSON): one line per truth event and per record label.
std::string truth_to_ndjson(const GroundTruth& truth);
GroundTruth truth_from_ndjson(std::istream& in);

struct MatchParams {
  double radius_m = 10'000.0;  // defaults follow eps_s / eps_t
  double window_s = 1800.0;
};

struct CategoryMetrics {
  std::size_t truth = 0;
  std::size_t detected = 0;
  std::size_t matched = 0;
  double precision = 1.0;  // matched / detected; 1 when nothing detected
  double recall = 1.0;     // matched / truth; 1 when nothing to find
  double mmsi_recall = 1.0;  // mean over matched pairs
};

struct Metrics {
  std::map<std::string, CategoryMetrics> per_category;
  std::size_t interference_false_alarms = 0;  // unmatched spoofing/jamming detections

  nlohmann::json to_json() const;
};

// Greedy one-to-one matching of detected events to truth events of the same
// category within radius/window. Noise-category events are ignored.
Metrics evaluate(const std::vector<StEvent>& events, const GroundTruth& truth,
                 const MatchParams& params);

}  // namespace aisdet
