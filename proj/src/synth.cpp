#include "aisdet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "aisdet/geo.hpp"

namespace aisdet {

namespace {

using nlohmann::json;

constexpr std::uint32_t kBaseMmsi = 440'000'001;

// Engine output is standardized; the distributions are hand-rolled so streams
// never shift across standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal(double sigma) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_ * sigma;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a) * sigma;
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

double round_to(double v, double step) { return std::round(v / step) * step; }

// Unchecked equirectangular frame; synthetic regions may exceed the strict
// tangent-plane validity radius and only need plausible geometry.
struct Frame {
  GeoPos origin;
  double cos_lat;

  explicit Frame(GeoPos o) : origin(o), cos_lat(std::cos(deg2rad(o.lat))) {}

  void to_planar(const GeoPos& p, double& x, double& y) const {
    x = kEarthRadiusM * wrap_pi(deg2rad(p.lon - origin.lon)) * cos_lat;
    y = kEarthRadiusM * deg2rad(p.lat - origin.lat);
  }
  GeoPos to_geo(double x, double y) const {
    return GeoPos{origin.lat + rad2deg(y / kEarthRadiusM),
                  origin.lon + rad2deg(x / (kEarthRadiusM * cos_lat))};
  }
};

AisRecord make_record(std::uint32_t mmsi, EpochMs t, const GeoPos& p, double speed, double psi) {
  AisRecord r;
  r.mmsi = mmsi;
  r.t = t;
  r.lat = round_to(p.lat, 1e-6);
  r.lon = round_to(p.lon, 1e-6);
  r.sog = round_to(speed, 0.01);
  double cog = round_to(math_rad_to_compass_deg(psi), 0.1);
  if (cog >= 360.0) cog = 0.0;
  r.cog = cog;
  return r;
}

GeoPos displaced(const GeoPos& p, double east_m, double north_m) {
  const GeoPos out = unproject_local(PlanarPos{east_m, north_m, p});
  return GeoPos{round_to(out.lat, 1e-6), round_to(out.lon, 1e-6)};
}

std::uint64_t injection_seed(const Scenario& s, std::size_t index) {
  std::uint64_t h = s.seed ^ 0x9e3779b97f4a7c15ull;
  h ^= (index + 1) * 0xbf58476d1ce4e5b9ull;
  h ^= h >> 31;
  return h;
}

InjectionKind kind_from_string(const std::string& s) {
  if (s == "spoofing") return InjectionKind::spoofing;
  if (s == "jamming") return InjectionKind::jamming;
  if (s == "mmsi_duplication") return InjectionKind::mmsi_duplication;
  if (s == "stale_retransmission") return InjectionKind::stale_retransmission;
  if (s == "persistent_sensor") return InjectionKind::persistent_sensor;
  if (s == "transient_sensor") return InjectionKind::transient_sensor;
  throw std::runtime_error("unknown injection kind: " + s);
}

EventCategory event_category_for(InjectionKind k) {
  switch (k) {
    case InjectionKind::spoofing: return EventCategory::spoofing;
    case InjectionKind::jamming: return EventCategory::jamming;
    case InjectionKind::persistent_sensor: return EventCategory::persistent_sensor;
    case InjectionKind::transient_sensor: return EventCategory::transient_sensor;
    default: return EventCategory::noise;  // stage-1 artifacts never become events
  }
}

}  // namespace

const char* to_string(InjectionKind k) {
  switch (k) {
    case InjectionKind::spoofing: return "spoofing";
    case InjectionKind::jamming: return "jamming";
    case InjectionKind::mmsi_duplication: return "mmsi_duplication";
    case InjectionKind::stale_retransmission: return "stale_retransmission";
    case InjectionKind::persistent_sensor: return "persistent_sensor";
    case InjectionKind::transient_sensor: return "transient_sensor";
  }
  return "unknown";
}

SynthOutput generate_baseline(const Scenario& scenario) {
  if (scenario.n_vessels < 1) throw std::runtime_error("scenario needs at least one vessel");
  if (!(scenario.report_interval_s > 0.0) || !(scenario.duration_s > 0.0)) {
    throw std::runtime_error("scenario duration and report interval must be positive");
  }
  SynthOutput out;
  Rng rng(scenario.seed);

  const GeoPos center{0.5 * (scenario.region.lat_min + scenario.region.lat_max),
                      0.5 * (scenario.region.lon_min + scenario.region.lon_max)};
  const Frame frame(center);
  double xmin, ymin, xmax, ymax;
  frame.to_planar(GeoPos{scenario.region.lat_min, scenario.region.lon_min}, xmin, ymin);
  frame.to_planar(GeoPos{scenario.region.lat_max, scenario.region.lon_max}, xmax, ymax);
  // The 20% margin absorbs the worst-case boundary-turn excursion
  // (2 v_max / omega_steer plus one step of overshoot).
  const double mx = 0.2 * (xmax - xmin);
  const double my = 0.2 * (ymax - ymin);
  xmin += mx, xmax -= mx, ymin += my, ymax -= my;

  const EpochMs interval_ms = static_cast<EpochMs>(std::llround(scenario.report_interval_s * 1000.0));
  const EpochMs end_t = scenario.start_t + static_cast<EpochMs>(std::llround(scenario.duration_s * 1000.0));
  const double dt = scenario.report_interval_s;

  for (int i = 0; i < scenario.n_vessels; ++i) {
    const std::uint32_t mmsi = kBaseMmsi + static_cast<std::uint32_t>(i);
    double x = rng.uniform(xmin, xmax);
    double y = rng.uniform(ymin, ymax);
    const double speed = rng.uniform(2.0, 12.0);
    double psi = rng.uniform(-std::numbers::pi, std::numbers::pi);
    double omega = 0.0;
    double next_switch_s = rng.uniform(300.0, 900.0);
    double elapsed_s = 0.0;
    const EpochMs phase = (static_cast<EpochMs>(i) * 137) % interval_ms;

    for (EpochMs t = scenario.start_t + phase; t <= end_t; t += interval_ms) {
      const GeoPos noisy = frame.to_geo(x + rng.normal(5.0), y + rng.normal(5.0));
      out.records.push_back(make_record(mmsi, t, noisy, speed, psi));

      // advance to the next report
      elapsed_s += dt;
      const bool outside = x < xmin || x > xmax || y < ymin || y > ymax;
      // Per-report heading change stays well below the stage-1 heading gate,
      // so tracks never fragment at boundary turns.
      const double omega_steer = std::min(0.018, 0.18 / dt);
      if (outside) {
        const double bearing = std::atan2(-y, -x);
        omega = std::clamp(wrap_pi(bearing - psi) / dt, -omega_steer, omega_steer);
      } else if (elapsed_s >= next_switch_s) {
        omega = rng.uniform() < 0.7 ? 0.0 : rng.uniform(-0.06 / dt, 0.06 / dt);
        next_switch_s += rng.uniform(300.0, 900.0);
      }
      psi = wrap_pi(psi + omega * dt);
      x += speed * std::cos(psi) * dt;
      y += speed * std::sin(psi) * dt;
    }
  }
  sort_canonical(out.records);
  return out;
}

void inject(std::vector<AisRecord>& records, GroundTruth& truth, const Scenario& scenario,
            const Injection& inj, std::size_t injection_index) {
  const EpochMs w0 = scenario.start_t + static_cast<EpochMs>(std::llround(inj.window_start_s * 1000.0));
  const EpochMs w1 = scenario.start_t + static_cast<EpochMs>(std::llround(inj.window_end_s * 1000.0));
  Rng rng(injection_seed(scenario, injection_index));

  std::set<std::uint32_t> affected;
  std::size_t mutated = 0;

  switch (inj.kind) {
    case InjectionKind::spoofing: {
      for (AisRecord& r : records) {
        if (r.t < w0 || r.t > w1) continue;
        if (geodesic_distance(r.pos(), inj.center) > inj.radius_m) continue;
        const GeoPos moved = displaced(r.pos(), inj.offset_east_m, inj.offset_north_m);
        r.lat = moved.lat;
        r.lon = moved.lon;
        truth.labels.push_back({r.mmsi, r.t, InjectionKind::spoofing});
        affected.insert(r.mmsi);
        ++mutated;
      }
      break;
    }
    case InjectionKind::jamming: {
      if (!(inj.on_s > 0.0) || !(inj.off_s >= 0.0)) {
        throw std::runtime_error("jamming injection needs a positive on-phase");
      }
      const EpochMs on_ms = static_cast<EpochMs>(std::llround(inj.on_s * 1000.0));
      const EpochMs cycle_ms = on_ms + static_cast<EpochMs>(std::llround(inj.off_s * 1000.0));
      auto it = std::remove_if(records.begin(), records.end(), [&](const AisRecord& r) {
        if (r.t < w0 || r.t > w1) return false;
        if ((r.t - w0) % cycle_ms >= on_ms) return false;
        if (geodesic_distance(r.pos(), inj.center) > inj.radius_m) return false;
        affected.insert(r.mmsi);
        ++mutated;
        return true;
      });
      records.erase(it, records.end());
      break;
    }
    case InjectionKind::mmsi_duplication: {
      if (inj.vessel_index < 0 || inj.vessel_index >= scenario.n_vessels) {
        throw std::runtime_error("mmsi_duplication: vessel_index out of range");
      }
      const std::uint32_t victim = kBaseMmsi + static_cast<std::uint32_t>(inj.vessel_index);
      const GeoPos region_center{0.5 * (scenario.region.lat_min + scenario.region.lat_max),
                                 0.5 * (scenario.region.lon_min + scenario.region.lon_max)};
      const Frame frame(region_center);
      double x, y;
      frame.to_planar(inj.center, x, y);
      // Head roughly toward the region center so the imposter stays in frame.
      const double psi = wrap_pi(std::atan2(-y, -x) + rng.uniform(-0.3, 0.3));
      const double speed = 5.0;
      const EpochMs interval_ms =
          static_cast<EpochMs>(std::llround(scenario.report_interval_s * 1000.0));
      const EpochMs phase = interval_ms / 2;  // never collide with the victim's grid

      for (EpochMs t = w0 + phase; t <= w1; t += interval_ms) {
        const GeoPos noisy = frame.to_geo(x + rng.normal(5.0), y + rng.normal(5.0));
        records.push_back(make_record(victim, t, noisy, speed, psi));
        truth.labels.push_back({victim, t, InjectionKind::mmsi_duplication});
        ++mutated;
        x += speed * std::cos(psi) * scenario.report_interval_s;
        y += speed * std::sin(psi) * scenario.report_interval_s;
      }
      affected.insert(victim);
      break;
    }
    case InjectionKind::stale_retransmission: {
      if (inj.count < 1) throw std::runtime_error("stale_retransmission: count must be >= 1");
      const std::uint32_t victim = kBaseMmsi + static_cast<std::uint32_t>(inj.vessel_index);
      const EpochMs delay_ms = static_cast<EpochMs>(std::llround(inj.delay_s * 1000.0));
      std::vector<const AisRecord*> sources;
      for (const AisRecord& r : records) {
        if (r.mmsi == victim && r.t >= w0 && r.t <= w1) sources.push_back(&r);
      }
      std::sort(sources.begin(), sources.end(),
                [](const AisRecord* a, const AisRecord* b) { return a->t < b->t; });
      const std::size_t n = std::min<std::size_t>(sources.size(), static_cast<std::size_t>(inj.count));
      std::vector<AisRecord> rebroadcast;
      for (std::size_t i = 0; i < n; ++i) {
        AisRecord copy = *sources[i];
        copy.t += delay_ms;
        rebroadcast.push_back(copy);
        truth.labels.push_back({victim, copy.t, InjectionKind::stale_retransmission});
        ++mutated;
      }
      records.insert(records.end(), rebroadcast.begin(), rebroadcast.end());
      affected.insert(victim);
      if (n == 0) mutated = 0;
      break;
    }
    case InjectionKind::persistent_sensor:
    case InjectionKind::transient_sensor: {
      const std::uint32_t victim = kBaseMmsi + static_cast<std::uint32_t>(inj.vessel_index);
      for (const int day : inj.days) {
        const EpochMs d0 = scenario.start_t + static_cast<EpochMs>(day) * 86'400'000 +
                           static_cast<EpochMs>(std::llround(inj.daily_start_s * 1000.0));
        const EpochMs d1 = d0 + static_cast<EpochMs>(std::llround(inj.daily_duration_s * 1000.0));
        std::vector<AisRecord*> in_window;
        for (AisRecord& r : records) {
          if (r.mmsi == victim && r.t >= d0 && r.t <= d1) in_window.push_back(&r);
        }
        std::sort(in_window.begin(), in_window.end(),
                  [](const AisRecord* a, const AisRecord* b) { return a->t < b->t; });
        double lat_sum = 0.0, lon_sum = 0.0;
        std::size_t day_mutated = 0;
        const EpochMs period_ms =
            static_cast<EpochMs>(std::llround(std::max(1.0, inj.deviation_period_s) * 1000.0));
        EpochMs next_deviation = d0;
        for (AisRecord* rp : in_window) {
          if (rp->t < next_deviation) continue;
          AisRecord& r = *rp;
          const GeoPos moved = displaced(r.pos(), inj.offset_east_m, inj.offset_north_m);
          r.lat = moved.lat;
          r.lon = moved.lon;
          truth.labels.push_back({victim, r.t, inj.kind});
          lat_sum += moved.lat;
          lon_sum += moved.lon;
          ++day_mutated;
          next_deviation = r.t + period_ms;
        }
        if (day_mutated > 0) {
          TruthEvent ev;
          ev.kind = inj.kind;
          ev.center = GeoPos{lat_sum / static_cast<double>(day_mutated),
                             lon_sum / static_cast<double>(day_mutated)};
          ev.radius_m = std::hypot(inj.offset_east_m, inj.offset_north_m);
          ev.t0 = d0;
          ev.t1 = d1;
          ev.mmsis = {victim};
          ev.mutated_points = day_mutated;
          truth.events.push_back(ev);
          mutated += day_mutated;
          affected.insert(victim);
        }
      }
      if (mutated == 0) throw std::runtime_error("sensor injection touched no traffic");
      return;  // per-day events already recorded
    }
  }

  if (mutated == 0) throw std::runtime_error("injection touched no traffic (misconfigured scenario)");

  TruthEvent ev;
  ev.kind = inj.kind;
  ev.center = inj.center;
  ev.radius_m = inj.radius_m;
  ev.t0 = w0;
  ev.t1 = w1;
  ev.mmsis.assign(affected.begin(), affected.end());
  ev.mutated_points = mutated;
  truth.events.push_back(ev);
}

SynthOutput generate_scenario(const Scenario& scenario) {
  SynthOutput out = generate_baseline(scenario);
  for (std::size_t i = 0; i < scenario.injections.size(); ++i) {
    inject(out.records, out.truth, scenario, scenario.injections[i], i);
  }
  sort_canonical(out.records);
  std::sort(out.truth.labels.begin(), out.truth.labels.end(),
            [](const RecordLabel& a, const RecordLabel& b) {
              return std::tie(a.t, a.mmsi) < std::tie(b.t, b.mmsi);
            });
  return out;
}

Scenario Scenario::from_json(const json& j) {
  Scenario s;
  if (!j.is_object()) throw std::runtime_error("scenario root must be a JSON object");
  std::set<std::string> known{"seed",    "region",     "duration_s", "n_vessels",
                              "report_interval_s", "start_t", "injections"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw std::runtime_error("unknown scenario key: " + it.key());
  }
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("region")) {
    const json& r = j.at("region");
    s.region = BoundingBox{r.at("lat_min").get<double>(), r.at("lat_max").get<double>(),
                           r.at("lon_min").get<double>(), r.at("lon_max").get<double>()};
  }
  if (j.contains("duration_s")) s.duration_s = j.at("duration_s").get<double>();
  if (j.contains("n_vessels")) s.n_vessels = j.at("n_vessels").get<int>();
  if (j.contains("report_interval_s")) s.report_interval_s = j.at("report_interval_s").get<double>();
  if (j.contains("start_t")) {
    const json& t = j.at("start_t");
    if (t.is_number_integer()) {
      s.start_t = t.get<EpochMs>();
    } else {
      const auto parsed = parse_time_utc(t.get<std::string>());
      if (!parsed) throw std::runtime_error("scenario start_t is unparseable");
      s.start_t = *parsed;
    }
  }
  if (j.contains("injections")) {
    for (const json& ij : j.at("injections")) {
      Injection inj;
      inj.kind = kind_from_string(ij.at("kind").get<std::string>());
      if (ij.contains("center")) {
        inj.center = GeoPos{ij.at("center").at("lat").get<double>(),
                            ij.at("center").at("lon").get<double>()};
      }
      inj.radius_m = ij.value("radius_m", 0.0);
      if (ij.contains("window")) {
        inj.window_start_s = ij.at("window").at(0).get<double>();
        inj.window_end_s = ij.at("window").at(1).get<double>();
      }
      inj.offset_east_m = ij.value("offset_east_m", 0.0);
      inj.offset_north_m = ij.value("offset_north_m", 0.0);
      inj.on_s = ij.value("on_s", 0.0);
      inj.off_s = ij.value("off_s", 0.0);
      inj.vessel_index = ij.value("vessel_index", 0);
      inj.count = ij.value("count", 0);
      inj.delay_s = ij.value("delay_s", 0.0);
      if (ij.contains("days")) inj.days = ij.at("days").get<std::vector<int>>();
      inj.daily_start_s = ij.value("daily_start_s", 0.0);
      inj.daily_duration_s = ij.value("daily_duration_s", 0.0);
      inj.deviation_period_s = ij.value("deviation_period_s", 960.0);
      s.injections.push_back(std::move(inj));
    }
  }
  return s;
}

Scenario Scenario::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  json j;
  in >> j;
  return from_json(j);
}

json Scenario::to_json() const {
  json inj_list = json::array();
  for (const Injection& inj : injections) {
    json ij{{"kind", to_string(inj.kind)},
            {"center", {{"lat", inj.center.lat}, {"lon", inj.center.lon}}},
            {"radius_m", inj.radius_m},
            {"window", {inj.window_start_s, inj.window_end_s}},
            {"offset_east_m", inj.offset_east_m},
            {"offset_north_m", inj.offset_north_m},
            {"on_s", inj.on_s},
            {"off_s", inj.off_s},
            {"vessel_index", inj.vessel_index},
            {"count", inj.count},
            {"delay_s", inj.delay_s},
            {"days", inj.days},
            {"daily_start_s", inj.daily_start_s},
            {"daily_duration_s", inj.daily_duration_s},
            {"deviation_period_s", inj.deviation_period_s}};
    inj_list.push_back(std::move(ij));
  }
  return json{{"seed", seed},
              {"region", {{"lat_min", region.lat_min}, {"lat_max", region.lat_max},
                          {"lon_min", region.lon_min}, {"lon_max", region.lon_max}}},
              {"duration_s", duration_s},
              {"n_vessels", n_vessels},
              {"report_interval_s", report_interval_s},
              {"start_t", start_t},
              {"injections", inj_list}};
}

std::string truth_to_ndjson(const GroundTruth& truth) {
  std::ostringstream out;
  for (const TruthEvent& e : truth.events) {
    json j{{"type", "event"},
           {"kind", to_string(e.kind)},
           {"lat", e.center.lat},
           {"lon", e.center.lon},
           {"radius_m", e.radius_m},
           {"t0", e.t0},
           {"t1", e.t1},
           {"mmsis", e.mmsis},
           {"mutated_points", e.mutated_points}};
    out << j.dump() << '\n';
  }
  for (const RecordLabel& l : truth.labels) {
    json j{{"type", "label"}, {"mmsi", l.mmsi}, {"t", l.t}, {"kind", to_string(l.kind)}};
    out << j.dump() << '\n';
  }
  return out.str();
}

GroundTruth truth_from_ndjson(std::istream& in) {
  GroundTruth truth;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string type = j.at("type").get<std::string>();
    if (type == "event") {
      TruthEvent e;
      e.kind = kind_from_string(j.at("kind").get<std::string>());
      e.center = GeoPos{j.at("lat").get<double>(), j.at("lon").get<double>()};
      e.radius_m = j.at("radius_m").get<double>();
      e.t0 = j.at("t0").get<EpochMs>();
      e.t1 = j.at("t1").get<EpochMs>();
      e.mmsis = j.at("mmsis").get<std::vector<std::uint32_t>>();
      e.mutated_points = j.at("mutated_points").get<std::size_t>();
      truth.events.push_back(std::move(e));
    } else if (type == "label") {
      truth.labels.push_back({j.at("mmsi").get<std::uint32_t>(), j.at("t").get<EpochMs>(),
                              kind_from_string(j.at("kind").get<std::string>())});
    }
  }
  return truth;
}

Metrics evaluate(const std::vector<StEvent>& events, const GroundTruth& truth,
                 const MatchParams& params) {
  Metrics m;

  std::vector<const StEvent*> detected;
  for (const StEvent& e : events) {
    if (e.category != EventCategory::noise) detected.push_back(&e);
  }
  std::vector<bool> used(detected.size(), false);

  auto cat_of_event = [](const StEvent& e) { return std::string(to_string(e.category)); };

  for (const StEvent* e : detected) ++m.per_category[cat_of_event(*e)].detected;

  const EpochMs pad = static_cast<EpochMs>(params.window_s * 1000.0);
  for (const TruthEvent& t : truth.events) {
    const EventCategory want = event_category_for(t.kind);
    if (want == EventCategory::noise) continue;  // stage-1 artifact truths have no event form
    CategoryMetrics& cm = m.per_category[to_string(want)];
    ++cm.truth;

    // nearest-first greedy match
    std::vector<std::pair<double, std::size_t>> candidates;
    for (std::size_t i = 0; i < detected.size(); ++i) {
      if (used[i] || detected[i]->category != want) continue;
      const double d = geodesic_distance(detected[i]->centroid, t.center);
      if (d > params.radius_m) continue;
      if (detected[i]->t_end + pad < t.t0 || detected[i]->t_start - pad > t.t1) continue;
      candidates.emplace_back(d, i);
    }
    if (candidates.empty()) continue;
    std::sort(candidates.begin(), candidates.end());
    const std::size_t pick = candidates.front().second;
    used[pick] = true;
    ++cm.matched;

    std::size_t overlap = 0;
    for (const std::uint32_t mm : t.mmsis) {
      if (std::binary_search(detected[pick]->mmsis.begin(), detected[pick]->mmsis.end(), mm)) {
        ++overlap;
      }
    }
    const double rec =
        t.mmsis.empty() ? 1.0 : static_cast<double>(overlap) / static_cast<double>(t.mmsis.size());
    // running mean over matched pairs
    cm.mmsi_recall += (rec - cm.mmsi_recall) / static_cast<double>(cm.matched);
  }

  for (auto& [name, cm] : m.per_category) {
    cm.precision = cm.detected == 0
                       ? 1.0
                       : static_cast<double>(cm.matched) / static_cast<double>(cm.detected);
    cm.recall =
        cm.truth == 0 ? 1.0 : static_cast<double>(cm.matched) / static_cast<double>(cm.truth);
  }
  for (std::size_t i = 0; i < detected.size(); ++i) {
    if (used[i]) continue;
    if (detected[i]->category == EventCategory::spoofing ||
        detected[i]->category == EventCategory::jamming) {
      ++m.interference_false_alarms;
    }
  }
  return m;
}

json Metrics::to_json() const {
  json cats = json::object();
  for (const auto& [name, cm] : per_category) {
    cats[name] = json{{"truth", cm.truth},     {"detected", cm.detected},
                      {"matched", cm.matched}, {"precision", cm.precision},
                      {"recall", cm.recall},   {"mmsi_recall", cm.mmsi_recall}};
  }
  return json{{"per_category", cats}, {"interference_false_alarms", interference_false_alarms}};
}

}  // namespace aisdet
