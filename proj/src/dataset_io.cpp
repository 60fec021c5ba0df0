#include "aoa/dataset_io.hpp"

#include "aoa/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace aoa {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Line lookup for a JSON pointer in already-valid JSON text.

struct Frame {
  bool is_array = false;
  std::size_t index = 0;
  std::string key;
  bool expecting_key = false;
};

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string current_pointer(const std::vector<Frame>& stack) {
  std::string p;
  for (const auto& f : stack) p += "/" + (f.is_array ? std::to_string(f.index) : escape_token(f.key));
  return p;
}

// Returns the 1-based line where the value at `pointer` starts, or 0.
std::size_t line_of(std::string_view text, const std::string& pointer) {
  std::vector<Frame> stack;
  std::size_t line = 1;
  std::size_t i = 0;
  auto read_string = [&](std::string* out) {
    ++i;  // opening quote
    while (i < text.size() && text[i] != '"') {
      if (text[i] == '\\' && i + 1 < text.size()) {
        if (out) *out += text[i + 1];
        i += 2;
        continue;
      }
      if (out) *out += text[i];
      ++i;
    }
    ++i;  // closing quote
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (!stack.empty() && !stack.back().is_array && stack.back().expecting_key) {
      if (c == '"') {
        stack.back().key.clear();
        read_string(&stack.back().key);
        continue;
      }
      if (c == ':') {
        stack.back().expecting_key = false;
        ++i;
        continue;
      }
      if (c == '}') {
        stack.pop_back();
        ++i;
        continue;
      }
      ++i;
      continue;
    }
    if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().is_array) ++stack.back().index;
        else stack.back().expecting_key = true;
      }
      ++i;
      continue;
    }
    if (c == ']' || c == '}') {
      if (!stack.empty()) stack.pop_back();
      ++i;
      continue;
    }
    // start of a value
    if (current_pointer(stack) == pointer) return line;
    if (c == '{') {
      stack.push_back({false, 0, {}, true});
      ++i;
    } else if (c == '[') {
      stack.push_back({true, 0, {}, false});
      ++i;
    } else if (c == '"') {
      read_string(nullptr);
    } else {
      while (i < text.size() && text[i] != ',' && text[i] != ']' && text[i] != '}' && text[i] != '\n') ++i;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Typed field access with path-aware errors.

class Reader {
 public:
  explicit Reader(std::string_view raw) : raw_(raw) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what,
                         ErrorKind kind = ErrorKind::parse_error) const {
    std::string where = "field " + (pointer.empty() ? std::string("/") : pointer);
    if (const auto line = line_of(raw_, pointer); line > 0) where += " (line " + std::to_string(line) + ")";
    raise(kind, where + ": " + what);
  }

  const json& member(const json& obj, const std::string& pointer, const char* key) const {
    if (!obj.is_object()) fail(pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(pointer, std::string("missing required field '") + key + "'");
    return *it;
  }

  const json* optional(const json& obj, const char* key) const {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  double number(const json& v, const std::string& pointer) const {
    if (!v.is_number()) fail(pointer, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(pointer, "expected a finite number");
    return x;
  }

  double number_field(const json& obj, const std::string& pointer, const char* key) const {
    return number(member(obj, pointer, key), pointer + "/" + key);
  }

  std::uint64_t count(const json& v, const std::string& pointer) const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(pointer, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::uint64_t count_field(const json& obj, const std::string& pointer, const char* key) const {
    return count(member(obj, pointer, key), pointer + "/" + key);
  }

  std::string string(const json& v, const std::string& pointer) const {
    if (!v.is_string()) fail(pointer, "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const json& v, const std::string& pointer) const {
    if (!v.is_boolean()) fail(pointer, "expected true or false");
    return v.get<bool>();
  }

  const json& array(const json& v, const std::string& pointer) const {
    if (!v.is_array()) fail(pointer, "expected an array");
    return v;
  }

  template <int N>
  Eigen::Matrix<double, N, 1> vec(const json& v, const std::string& pointer) const {
    if (!v.is_array() || v.size() != static_cast<std::size_t>(N)) {
      fail(pointer, "expected an array of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> out;
    for (int k = 0; k < N; ++k) out[k] = number(v[static_cast<std::size_t>(k)], pointer + "/" + std::to_string(k));
    return out;
  }

 private:
  std::string_view raw_;
};

json parse_json(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) raise(ErrorKind::parse_error, "empty document");
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    raise(ErrorKind::parse_error, e.what());
  }
}

struct Units {
  double time = 1.0;
  double length = 1.0;
};

Units read_units(const Reader& r, const json& meta) {
  Units u;
  const json* units = r.optional(meta, "units");
  if (!units) return u;
  if (const json* t = r.optional(*units, "time")) {
    const auto name = r.string(*t, "/meta/units/time");
    if (name == "s") u.time = 1.0;
    else if (name == "ms") u.time = 1e-3;
    else if (name == "us") u.time = 1e-6;
    else r.fail("/meta/units/time", "unknown time unit '" + name + "' (s, ms, us)");
  }
  if (const json* l = r.optional(*units, "length")) {
    const auto name = r.string(*l, "/meta/units/length");
    if (name == "m") u.length = 1.0;
    else if (name == "cm") u.length = 1e-2;
    else if (name == "mm") u.length = 1e-3;
    else r.fail("/meta/units/length", "unknown length unit '" + name + "' (m, cm, mm)");
  }
  return u;
}

Complex read_channel(const Reader& r, const json& pkt, const std::string& p) {
  if (const json* csi = r.optional(pkt, "csi")) {
    // Multi-subcarrier report: keep the center subcarrier.
    r.array(*csi, p + "/csi");
    if (csi->empty()) r.fail(p + "/csi", "subcarrier list is empty");
    const std::size_t mid = csi->size() / 2;
    const Vec2 v = r.vec<2>((*csi)[mid], p + "/csi/" + std::to_string(mid));
    return {v.x(), v.y()};
  }
  return {r.number_field(pkt, p, "re"), r.number_field(pkt, p, "im")};
}

std::vector<CsiPacket> read_stream(const Reader& r, const json& packets, const char* name, const Units& units) {
  const std::string p = std::string("/packets/") + name;
  const json* stream = r.optional(packets, name);
  if (!stream) raise(ErrorKind::validation_error, std::string(name) + " stream absent");
  r.array(*stream, p);
  std::vector<CsiPacket> out;
  out.reserve(stream->size());
  for (std::size_t k = 0; k < stream->size(); ++k) {
    const std::string q = p + "/" + std::to_string(k);
    const json& pkt = (*stream)[k];
    CsiPacket c;
    c.counter = r.count_field(pkt, q, "counter");
    c.timestamp = r.number_field(pkt, q, "t") * units.time;
    c.channel = read_channel(r, pkt, q);
    c.sender.value = static_cast<std::uint32_t>(r.count_field(pkt, q, "sender"));
    c.receiver.value = static_cast<std::uint32_t>(r.count_field(pkt, q, "receiver"));
    if (!out.empty() && c.counter <= out.back().counter) {
      r.fail(q + "/counter", "counters must strictly increase within a stream", ErrorKind::validation_error);
    }
    out.push_back(c);
  }
  return out;
}

Trajectory read_trajectory_samples(const Reader& r, const json& node, const std::string& p, const Units& units) {
  const json* samples = &node;
  double heading = 0.0;
  std::string sp = p;
  if (node.is_object()) {
    if (const json* h = r.optional(node, "heading_deg")) heading = deg_to_rad(r.number(*h, p + "/heading_deg"));
    samples = &r.member(node, p, "samples");
    sp = p + "/samples";
  }
  r.array(*samples, sp);
  std::vector<TrajectorySample> out;
  out.reserve(samples->size());
  for (std::size_t k = 0; k < samples->size(); ++k) {
    const std::string q = sp + "/" + std::to_string(k);
    const json& s = (*samples)[k];
    out.push_back({r.number_field(s, q, "t") * units.time,
                   Vec3(r.number_field(s, q, "x"), r.number_field(s, q, "y"), r.number_field(s, q, "z")) *
                       units.length});
    if (k > 0 && !(out[k].t > out[k - 1].t)) {
      r.fail(q + "/t", "trajectory timestamps must strictly increase", ErrorKind::validation_error);
    }
  }
  if (out.empty()) r.fail(sp, "trajectory has no samples", ErrorKind::validation_error);
  return Trajectory::from_global(out, heading);
}

json trajectory_to_json(const Trajectory& traj) {
  json arr = json::array();
  for (const auto& s : traj.samples()) {
    arr.push_back({{"t", s.t}, {"x", s.position.x()}, {"y", s.position.y()}, {"z", s.position.z()}});
  }
  return arr;
}

json stream_to_json(const std::vector<CsiPacket>& stream) {
  json arr = json::array();
  for (const auto& c : stream) {
    arr.push_back({{"counter", c.counter},
                   {"t", c.timestamp},
                   {"re", c.channel.real()},
                   {"im", c.channel.imag()},
                   {"sender", c.sender.value},
                   {"receiver", c.receiver.value}});
  }
  return arr;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json peak_json(const Peak& p) {
  return {{"rank", p.rank},
          {"azimuth_deg", rad_to_deg(p.direction.azimuth_rad)},
          {"elevation_deg", rad_to_deg(p.direction.elevation_rad)},
          {"magnitude", p.magnitude}};
}

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(TrajectorySource source) {
  switch (source) {
    case TrajectorySource::groundtruth: return "groundtruth";
    case TrajectorySource::tracking_camera: return "tracking_camera";
    case TrajectorySource::wheel_odometry: return "wheel_odometry";
  }
  return "groundtruth";
}

TrajectorySource parse_trajectory_source(std::string_view name) {
  if (name == "groundtruth") return TrajectorySource::groundtruth;
  if (name == "tracking_camera" || name == "camera") return TrajectorySource::tracking_camera;
  if (name == "wheel_odometry" || name == "odometry") return TrajectorySource::wheel_odometry;
  raise(ErrorKind::invalid_argument, "unknown trajectory source '" + std::string(name) + "'");
}

const Trajectory& DatasetRecord::trajectory(TrajectorySource source) const {
  auto it = trajectories.find(source);
  if (it == trajectories.end()) {
    raise(ErrorKind::validation_error, std::string("record has no ") + to_string(source) + " trajectory");
  }
  return it->second;
}

DatasetRecord CanonicalRecordAdapter::convert(const json& doc, std::string_view raw) const {
  const Reader r(raw);
  if (!doc.is_object()) r.fail("", "expected a JSON object at the top level");
  DatasetRecord rec;

  if (const json* v = r.optional(doc, "schema_version")) {
    const auto version = r.count(*v, "/schema_version");
    if (version != static_cast<std::uint64_t>(kRecordSchemaVersion)) {
      r.fail("/schema_version", "unsupported schema version " + std::to_string(version));
    }
  }

  const json& meta = r.member(doc, "", "meta");
  const Units units = read_units(r, meta);
  rec.meta.initiator.value = static_cast<std::uint32_t>(r.count_field(meta, "/meta", "initiator"));
  rec.meta.responder.value = static_cast<std::uint32_t>(r.count_field(meta, "/meta", "responder"));
  if (rec.meta.initiator == rec.meta.responder) {
    r.fail("/meta/responder", "responder must differ from initiator", ErrorKind::validation_error);
  }
  if (const json* w = r.optional(meta, "wavelength_m")) {
    rec.meta.wavelength_m = r.number(*w, "/meta/wavelength_m");
    if (!(rec.meta.wavelength_m > 0.0)) r.fail("/meta/wavelength_m", "must be positive", ErrorKind::validation_error);
  }
  if (const json* label = r.optional(meta, "rx_grid_label")) rec.meta.rx_grid_label = r.string(*label, "/meta/rx_grid_label");
  if (const json* env = r.optional(meta, "environment")) {
    const auto e = r.string(*env, "/meta/environment");
    if (e == "LOS") rec.meta.environment = Environment::los;
    else if (e == "NLOS") rec.meta.environment = Environment::nlos;
    else r.fail("/meta/environment", "expected LOS or NLOS");
  }
  if (const json* tx = r.optional(meta, "tx_positions")) {
    r.array(*tx, "/meta/tx_positions");
    for (std::size_t k = 0; k < tx->size(); ++k) {
      const std::string q = "/meta/tx_positions/" + std::to_string(k);
      const auto id = static_cast<std::uint32_t>(r.count_field((*tx)[k], q, "id"));
      rec.meta.tx_positions[id] = r.vec<3>(r.member((*tx)[k], q, "position"), q + "/position") * units.length;
    }
  }

  const json& packets = r.member(doc, "", "packets");
  rec.packets.forward = read_stream(r, packets, "forward", units);
  rec.packets.reverse = read_stream(r, packets, "reverse", units);
  for (std::size_t k = 0; k < rec.packets.forward.size(); ++k) {
    const auto& c = rec.packets.forward[k];
    if (c.sender != rec.meta.responder || c.receiver != rec.meta.initiator) {
      r.fail("/packets/forward/" + std::to_string(k), "forward packets must go responder -> initiator",
             ErrorKind::validation_error);
    }
  }
  for (std::size_t k = 0; k < rec.packets.reverse.size(); ++k) {
    const auto& c = rec.packets.reverse[k];
    if (c.sender != rec.meta.initiator || c.receiver != rec.meta.responder) {
      r.fail("/packets/reverse/" + std::to_string(k), "reverse packets must go initiator -> responder",
             ErrorKind::validation_error);
    }
  }

  const json* trajs = r.optional(doc, "trajectories");
  if (!trajs || !trajs->is_object() || trajs->empty()) {
    raise(ErrorKind::validation_error, "record has no trajectory");
  }
  for (auto source : {TrajectorySource::groundtruth, TrajectorySource::tracking_camera,
                      TrajectorySource::wheel_odometry}) {
    if (const json* t = r.optional(*trajs, to_string(source))) {
      rec.trajectories.emplace(source,
                               read_trajectory_samples(r, *t, std::string("/trajectories/") + to_string(source), units));
    }
  }
  if (rec.trajectories.empty()) raise(ErrorKind::validation_error, "record has no trajectory");

  static const std::set<std::string> known = {"schema_version", "meta", "packets", "trajectories"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.count(it.key())) rec.extras[it.key()] = it.value();
  }
  return rec;
}

DatasetRecord parse_record(std::string_view text, const RecordAdapter& adapter) {
  return adapter.convert(parse_json(text), text);
}

DatasetRecord load_record(const std::filesystem::path& path, const RecordAdapter& adapter) {
  const auto text = read_text_file(path);
  try {
    return parse_record(text, adapter);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

json record_to_json(const DatasetRecord& record) {
  json doc = record.extras.is_object() ? record.extras : json::object();
  doc["schema_version"] = kRecordSchemaVersion;
  json tx = json::array();
  for (const auto& [id, pos] : record.meta.tx_positions) tx.push_back({{"id", id}, {"position", vec_json(pos)}});
  doc["meta"] = {{"initiator", record.meta.initiator.value},
                 {"responder", record.meta.responder.value},
                 {"tx_positions", tx},
                 {"rx_grid_label", record.meta.rx_grid_label},
                 {"environment", record.meta.environment == Environment::los ? "LOS" : "NLOS"},
                 {"wavelength_m", record.meta.wavelength_m}};
  doc["packets"] = {{"forward", stream_to_json(record.packets.forward)},
                    {"reverse", stream_to_json(record.packets.reverse)}};
  json trajs = json::object();
  for (const auto& [source, traj] : record.trajectories) trajs[to_string(source)] = trajectory_to_json(traj);
  doc["trajectories"] = trajs;
  return doc;
}

void save_record(const DatasetRecord& record, const std::filesystem::path& path) {
  write_text_file(path, record_to_json(record).dump(1) + "\n");
}

// ---------------------------------------------------------------------------

Scene parse_scene(std::string_view text) {
  const json doc = parse_json(text);
  const Reader r(text);
  if (!doc.is_object()) r.fail("", "expected a JSON object");
  Scene s;
  s.tx_position = r.vec<3>(r.member(doc, "", "tx_position"), "/tx_position");
  if (const json* refl = r.optional(doc, "reflectors")) {
    r.array(*refl, "/reflectors");
    for (std::size_t k = 0; k < refl->size(); ++k) {
      const std::string q = "/reflectors/" + std::to_string(k);
      s.reflectors.push_back({r.vec<3>(r.member((*refl)[k], q, "position"), q + "/position"),
                              r.number_field((*refl)[k], q, "gain")});
    }
  }
  if (const json* v = r.optional(doc, "noise_std")) s.noise_std = r.number(*v, "/noise_std");
  if (const json* v = r.optional(doc, "cfo")) s.cfo_enabled = r.boolean(*v, "/cfo");
  if (const json* v = r.optional(doc, "loss_rate")) s.loss_rate = r.number(*v, "/loss_rate");
  if (const json* v = r.optional(doc, "seed")) s.rng_seed = r.count(*v, "/seed");
  if (const json* v = r.optional(doc, "wavelength_m")) s.wavelength_m = r.number(*v, "/wavelength_m");
  if (const json* v = r.optional(doc, "initiator")) s.initiator.value = static_cast<std::uint32_t>(r.count(*v, "/initiator"));
  if (const json* v = r.optional(doc, "responder")) s.responder.value = static_cast<std::uint32_t>(r.count(*v, "/responder"));
  try {
    s.validate();
  } catch (const Error& e) {
    raise(ErrorKind::validation_error, e.what());
  }
  return s;
}

Scene load_scene(const std::filesystem::path& path) { return parse_scene(read_text_file(path)); }

json scene_to_json(const Scene& s) {
  json refl = json::array();
  for (const auto& r : s.reflectors) refl.push_back({{"position", vec_json(r.virtual_source)}, {"gain", r.gain}});
  return {{"tx_position", vec_json(s.tx_position)},
          {"reflectors", refl},
          {"noise_std", s.noise_std},
          {"cfo", s.cfo_enabled},
          {"loss_rate", s.loss_rate},
          {"seed", s.rng_seed},
          {"wavelength_m", s.wavelength_m},
          {"initiator", s.initiator.value},
          {"responder", s.responder.value}};
}

Trajectory parse_trajectory(std::string_view text) {
  const json doc = parse_json(text);
  const Reader r(text);
  if (doc.is_object()) {
    if (const json* arc = r.optional(doc, "arc")) {
      ArcMotion m;
      if (const json* v = r.optional(*arc, "linear_velocity")) m.linear_velocity = r.number(*v, "/arc/linear_velocity");
      if (const json* v = r.optional(*arc, "angular_velocity")) m.angular_velocity = r.number(*v, "/arc/angular_velocity");
      if (const json* v = r.optional(*arc, "duration_s")) m.duration_s = r.number(*v, "/arc/duration_s");
      if (const json* v = r.optional(*arc, "sample_rate_hz")) m.sample_rate_hz = r.number(*v, "/arc/sample_rate_hz");
      if (const json* v = r.optional(*arc, "heading_deg")) m.heading_rad = deg_to_rad(r.number(*v, "/arc/heading_deg"));
      return arc_trajectory(m);
    }
    return read_trajectory_samples(r, doc, "", Units{});
  }
  return read_trajectory_samples(r, doc, "", Units{});
}

Trajectory load_trajectory(const std::filesystem::path& path) { return parse_trajectory(read_text_file(path)); }

std::vector<BearingObservation> parse_observations(std::string_view text) {
  const json doc = parse_json(text);
  const Reader r(text);
  const json& list = r.array(r.member(doc, "", "observations"), "/observations");
  std::vector<BearingObservation> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string q = "/observations/" + std::to_string(k);
    BearingObservation o;
    o.anchor = r.vec<2>(r.member(list[k], q, "anchor"), q + "/anchor");
    o.bearing_rad = wrap_azimuth(deg_to_rad(r.number_field(list[k], q, "bearing_deg")));
    if (const json* v = r.optional(list[k], "variance")) o.variance = r.number(*v, q + "/variance");
    out.push_back(o);
  }
  return out;
}

std::vector<BearingObservation> load_observations(const std::filesystem::path& path) {
  return parse_observations(read_text_file(path));
}

// ---------------------------------------------------------------------------

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

std::string profile_to_csv(const AoaProfile& profile) {
  const auto& g = profile.grid();
  std::string out;
  for (int a = 0; a < g.azimuth_bins(); ++a) {
    if (a) out += ',';
    out += format_fixed(rad_to_deg(g.azimuth_center(a)), 6);
  }
  out += '\n';
  for (int e = 0; e < g.elevation_bins(); ++e) {
    for (int a = 0; a < g.azimuth_bins(); ++a) {
      if (a) out += ',';
      out += format_double(profile.at(e, a));
    }
    out += '\n';
  }
  return out;
}

json metrics_to_json(const AoaProfile& profile, const BearingEstimate& est) {
  const auto& g = profile.grid();
  json top = json::array();
  for (const auto& p : est.top_n) top.push_back(peak_json(p));
  json elevations = json::array();
  for (int e = 0; e < g.elevation_bins(); ++e) elevations.push_back(rad_to_deg(g.elevation_center(e)));
  return {{"aoa_max", peak_json(est.aoa_max)},
          {"top_n", top},
          {"variance", est.variance},
          {"accepted", est.accepted},
          {"n_packets_used", est.n_packets_used},
          {"compute_time_s", est.compute_time_s},
          {"grid",
           {{"azimuth_bins", g.azimuth_bins()},
            {"elevation_bins", g.elevation_bins()},
            {"elevation_centers_deg", elevations},
            {"wavelength_m", g.config().wavelength_m},
            {"phase_factor", g.config().phase_factor == PhaseFactor::round_trip ? "round-trip" : "single-trip"}}}};
}

void export_profile(const AoaProfile& profile, const BearingEstimate& estimate, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) raise(ErrorKind::io_error, dir.string() + ": " + ec.message());
  write_text_file(dir / "profile.csv", profile_to_csv(profile));
  write_text_file(dir / "metrics.json", metrics_to_json(profile, estimate).dump(2) + "\n");
}

AoaProfile parse_profile_csv(std::string_view text, const GridConfig& base) {
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= line.size()) {
      auto comma = line.find(',', start);
      if (comma == std::string_view::npos) comma = line.size();
      const auto field = line.substr(start, comma - start);
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        raise(ErrorKind::parse_error, "profile csv line " + std::to_string(line_no) + ": bad number '" +
                                          std::string(field) + "'");
      }
      values.push_back(v);
      start = comma + 1;
    }
    if (line_no == 1) {
      columns = values.size();
      continue;
    }
    if (values.size() != columns) {
      raise(ErrorKind::parse_error, "profile csv line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(values));
  }
  if (columns == 0 || rows.empty()) raise(ErrorKind::parse_error, "profile csv has no data");
  GridConfig cfg = base;
  cfg.azimuth_bins = static_cast<int>(columns);
  cfg.elevation_bins = static_cast<int>(rows.size());
  std::vector<double> mags;
  mags.reserve(columns * rows.size());
  for (const auto& row : rows) mags.insert(mags.end(), row.begin(), row.end());
  return AoaProfile(build_grid(cfg), std::move(mags));
}

AoaProfile import_profile(const std::filesystem::path& csv_path, const GridConfig& base) {
  return parse_profile_csv(read_text_file(csv_path), base);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::io_error, "cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) raise(ErrorKind::io_error, "failed reading " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorKind::io_error, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) raise(ErrorKind::io_error, "failed writing " + path.string());
}

}  // namespace aoa
