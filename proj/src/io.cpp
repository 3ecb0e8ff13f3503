#include "uns2d/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "uns2d/error.hpp"
#include "uns2d/ops.hpp"

#ifndef UNS2D_VERSION
#define UNS2D_VERSION "0.0.0"
#endif

namespace uns2d {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool ExperimentSettings::empty() const { return *this == ExperimentSettings{}; }

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

class Reader {
 public:
  // Records keys of `obj` outside `allowed`; the caller reports them together.
  void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) unknown_.push_back(join(path, it.key()));
    }
  }

  void throw_if_unknown() const {
    if (unknown_.empty()) return;
    std::string list;
    for (const auto& k : unknown_) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError(unknown_.front(), "unknown key(s): " + list);
  }

 private:
  std::vector<std::string> unknown_;
};

const json& object_at(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a JSON object");
  return j;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

long integer_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long>();
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(number_at(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<int> integers_at(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(static_cast<int>(integer_at(j[k], path + "[" + std::to_string(k) + "]")));
  return out;
}

void parse_experiment(const json& e, ExperimentSettings& x, Reader& reader) {
  const std::string p = "experiment";
  object_at(e, p);
  reader.check_keys(e, p,
                    {"samples", "family", "modes", "decay", "divergence_free", "amplitude",
                     "fit_window", "grids", "spatial_dt", "temporal_n", "temporal_dts", "t_final",
                     "steady_tol", "t_max", "s", "dts"});
  auto at = [&](const char* k) { return join(p, k); };
  if (e.contains("samples")) x.samples = integer_at(e["samples"], at("samples"));
  if (e.contains("family")) x.family = string_at(e["family"], at("family"));
  if (e.contains("modes")) x.modes = static_cast<int>(integer_at(e["modes"], at("modes")));
  if (e.contains("decay")) x.decay = number_at(e["decay"], at("decay"));
  if (e.contains("divergence_free")) {
    if (!e["divergence_free"].is_boolean())
      throw ConfigError(at("divergence_free"), "expected true or false");
    x.divergence_free = e["divergence_free"].get<bool>();
  }
  if (e.contains("amplitude")) x.amplitude = number_at(e["amplitude"], at("amplitude"));
  if (e.contains("fit_window")) x.fit_window = numbers_at(e["fit_window"], at("fit_window"));
  if (e.contains("grids")) x.grids = integers_at(e["grids"], at("grids"));
  if (e.contains("spatial_dt")) x.spatial_dt = number_at(e["spatial_dt"], at("spatial_dt"));
  if (e.contains("temporal_n"))
    x.temporal_n = static_cast<int>(integer_at(e["temporal_n"], at("temporal_n")));
  if (e.contains("temporal_dts")) x.temporal_dts = numbers_at(e["temporal_dts"], at("temporal_dts"));
  if (e.contains("t_final")) x.t_final = number_at(e["t_final"], at("t_final"));
  if (e.contains("steady_tol")) x.steady_tol = number_at(e["steady_tol"], at("steady_tol"));
  if (e.contains("t_max")) x.t_max = number_at(e["t_max"], at("t_max"));
  if (e.contains("s")) x.s = number_at(e["s"], at("s"));
  if (e.contains("dts")) x.dts = numbers_at(e["dts"], at("dts"));
}

void validate_experiment(const ExperimentSettings& x) {
  auto positive = [](const std::optional<double>& v, const char* key) {
    if (v && !(*v > 0.0 && std::isfinite(*v)))
      throw ConfigError(std::string("experiment.") + key, "must be > 0");
  };
  if (x.samples && *x.samples < 1) throw ConfigError("experiment.samples", "must be >= 1");
  if (x.modes && *x.modes < 1) throw ConfigError("experiment.modes", "must be >= 1");
  if (x.family && *x.family != "random-sine-series" && *x.family != "stream-function" &&
      *x.family != "interior-bump")
    throw ConfigError("experiment.family", "unknown sample family '" + *x.family + "'");
  if (x.decay && !(*x.decay >= 0.0)) throw ConfigError("experiment.decay", "must be >= 0");
  if (x.fit_window &&
      (x.fit_window->size() != 2 || !((*x.fit_window)[0] >= 0.0) ||
       !((*x.fit_window)[1] > (*x.fit_window)[0])))
    throw ConfigError("experiment.fit_window", "expected [start, end] with 0 <= start < end");
  if (x.grids)
    for (int n : *x.grids)
      if (n < Grid2D::kMinCells) throw ConfigError("experiment.grids", "grid sizes must be >= 8");
  if (x.temporal_n && *x.temporal_n < Grid2D::kMinCells)
    throw ConfigError("experiment.temporal_n", "must be >= 8");
  for (const auto* list : {&x.temporal_dts, &x.dts})
    if (*list)
      for (double v : **list)
        if (!(v > 0.0 && std::isfinite(v)))
          throw ConfigError(list == &x.dts ? "experiment.dts" : "experiment.temporal_dts",
                            "time steps must be > 0");
  positive(x.spatial_dt, "spatial_dt");
  positive(x.t_final, "t_final");
  positive(x.steady_tol, "steady_tol");
  positive(x.t_max, "t_max");
  positive(x.s, "s");
}

}  // namespace

ConfigFile parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  object_at(root, "");
  if (!root.is_object()) throw ConfigError("", "config must be a JSON object");

  Reader reader;
  reader.check_keys(root, "",
                    {"grid", "nu", "dt", "t_end", "forcing", "initial", "bc", "snapshot_every",
                     "seed", "experiment"});
  ConfigFile out;
  SimConfig& c = out.sim;

  if (root.contains("grid")) {
    const json& g = object_at(root["grid"], "grid");
    reader.check_keys(g, "grid", {"nx", "ny"});
    if (g.contains("nx")) c.nx = static_cast<int>(integer_at(g["nx"], "grid.nx"));
    if (g.contains("ny")) c.ny = static_cast<int>(integer_at(g["ny"], "grid.ny"));
  }
  if (root.contains("nu")) c.nu = number_at(root["nu"], "nu");
  if (root.contains("dt")) c.dt = number_at(root["dt"], "dt");
  if (root.contains("t_end")) c.t_end = number_at(root["t_end"], "t_end");
  if (root.contains("forcing")) {
    const json& f = object_at(root["forcing"], "forcing");
    reader.check_keys(f, "forcing", {"preset", "value"});
    if (f.contains("preset")) c.forcing.id = string_at(f["preset"], "forcing.preset");
    if (f.contains("value")) {
      const auto v = numbers_at(f["value"], "forcing.value");
      if (v.size() != 2) throw ConfigError("forcing.value", "expected [f1, f2]");
      c.forcing.value = {v[0], v[1]};
    }
  }
  if (root.contains("initial")) {
    const json& f = object_at(root["initial"], "initial");
    reader.check_keys(f, "initial", {"preset", "amplitude"});
    if (f.contains("preset")) c.initial.id = string_at(f["preset"], "initial.preset");
    if (f.contains("amplitude")) c.initial.amplitude = number_at(f["amplitude"], "initial.amplitude");
  }
  if (root.contains("bc")) {
    const json& f = object_at(root["bc"], "bc");
    reader.check_keys(f, "bc", {"preset", "speed", "profile"});
    if (f.contains("preset")) c.bc.id = string_at(f["preset"], "bc.preset");
    if (f.contains("speed")) c.bc.speed = number_at(f["speed"], "bc.speed");
    if (f.contains("profile")) c.bc.profile = string_at(f["profile"], "bc.profile");
  }
  if (root.contains("snapshot_every"))
    c.snapshot_every = integer_at(root["snapshot_every"], "snapshot_every");
  if (root.contains("seed")) {
    const json& s = root["seed"];
    if (!s.is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (root.contains("experiment")) parse_experiment(root["experiment"], out.experiment, reader);

  reader.throw_if_unknown();
  c.validate();
  if (!std::isfinite(c.initial.amplitude))
    throw ConfigError("initial.amplitude", "must be finite");
  if (!std::isfinite(c.bc.speed)) throw ConfigError("bc.speed", "must be finite");
  if (!std::isfinite(c.forcing.value[0]) || !std::isfinite(c.forcing.value[1]))
    throw ConfigError("forcing.value", "must be finite");
  validate_experiment(out.experiment);
  return out;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

SimConfig parse_config(const std::string& path) { return load_config(path).sim; }

std::string config_echo(const ConfigFile& cfg) {
  const SimConfig& c = cfg.sim;
  ordered_json j;
  j["grid"] = {{"nx", c.nx}, {"ny", c.ny}};
  j["nu"] = c.nu;
  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["forcing"] = {{"preset", c.forcing.id}, {"value", {c.forcing.value[0], c.forcing.value[1]}}};
  j["initial"] = {{"preset", c.initial.id}, {"amplitude", c.initial.amplitude}};
  j["bc"] = {{"preset", c.bc.id}, {"speed", c.bc.speed}, {"profile", c.bc.profile}};
  j["snapshot_every"] = c.snapshot_every;
  j["seed"] = c.seed;
  const ExperimentSettings& x = cfg.experiment;
  if (!x.empty()) {
    ordered_json e = ordered_json::object();
    if (x.samples) e["samples"] = *x.samples;
    if (x.family) e["family"] = *x.family;
    if (x.modes) e["modes"] = *x.modes;
    if (x.decay) e["decay"] = *x.decay;
    if (x.divergence_free) e["divergence_free"] = *x.divergence_free;
    if (x.amplitude) e["amplitude"] = *x.amplitude;
    if (x.fit_window) e["fit_window"] = *x.fit_window;
    if (x.grids) e["grids"] = *x.grids;
    if (x.spatial_dt) e["spatial_dt"] = *x.spatial_dt;
    if (x.temporal_n) e["temporal_n"] = *x.temporal_n;
    if (x.temporal_dts) e["temporal_dts"] = *x.temporal_dts;
    if (x.t_final) e["t_final"] = *x.t_final;
    if (x.steady_tol) e["steady_tol"] = *x.steady_tol;
    if (x.t_max) e["t_max"] = *x.t_max;
    if (x.s) e["s"] = *x.s;
    if (x.dts) e["dts"] = *x.dts;
    j["experiment"] = e;
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV / PGM

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string diagnostics_csv(const std::vector<StepDiagnostics>& series) {
  std::string out = std::string(kDiagnosticsHeader) + "\n";
  for (const auto& d : series) {
    out += std::to_string(d.step);
    for (double v : {d.t, d.energy, d.grad_u_sq, d.lap_u_sq, d.div_u_sq, d.grad_ps_sq,
                     d.grad_pe_sq, d.stokes_ratio, d.compat_corr}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string field_csv(const ScalarField& f) {
  const Grid2D& g = f.grid();
  std::string out;
  out.reserve(g.node_count() * 20);
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) {
      if (i) out += ',';
      out += format_double(f(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string vorticity_pgm(const ScalarField& f) {
  const Grid2D& g = f.grid();
  const double m = f.max_abs();
  std::string out = "P5\n" + std::to_string(g.nx() + 1) + " " + std::to_string(g.ny() + 1) + "\n255\n";
  for (int j = g.ny(); j >= 0; --j)
    for (int i = 0; i <= g.nx(); ++i) {
      long v = 128;
      if (m > 0.0) v = std::clamp(std::lround((f(i, j) / m + 1.0) * 127.5), 0L, 255L);
      out += static_cast<char>(static_cast<unsigned char>(v));
    }
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw IoError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

// ---------------------------------------------------------------------------
// Output directory and manifest

OutputDir::OutputDir(std::string path) : path_(std::move(path)) {
  std::error_code ec;
  fs::create_directories(path_, ec);
  if (ec || !fs::is_directory(path_))
    throw IoError("cannot create output directory '" + path_ + "'");
}

void OutputDir::write(const std::string& name, const std::string& bytes,
                      std::optional<double> max_abs_vorticity) {
  write_file_atomic((fs::path(path_) / name).string(), bytes);
  ManifestFile entry{name, bytes.size(), sha256_hex(bytes), max_abs_vorticity};
  auto it = std::find_if(files_.begin(), files_.end(),
                         [&](const ManifestFile& f) { return f.name == name; });
  if (it != files_.end())
    *it = entry;
  else
    files_.push_back(entry);
}

void OutputDir::write_diagnostics(const std::string& name,
                                  const std::vector<StepDiagnostics>& series) {
  write(name, diagnostics_csv(series));
}

void OutputDir::write_snapshot(const Snapshot& snap) {
  if (!snap.u || !snap.pressure) throw ArgumentError("write_snapshot: missing fields");
  const std::string tag = std::to_string(snap.step);
  write("u1_" + tag + ".csv", field_csv(snap.u->u1));
  write("u2_" + tag + ".csv", field_csv(snap.u->u2));
  write("p_" + tag + ".csv", field_csv(snap.pressure->total(snap.nu)));
  const ScalarField w = vorticity(*snap.u);
  write("vorticity_" + tag + ".pgm", vorticity_pgm(w), w.max_abs());
}

void write_manifest(const OutputDir& dir, const ManifestInfo& info) {
  ordered_json m;
  m["version"] = version_string();
  m["command"] = info.command;
  m["config"] = info.config_echo.empty() ? ordered_json(nullptr)
                                         : ordered_json::parse(info.config_echo);
  m["started_utc"] = info.started_utc;
  m["finished_utc"] = info.finished_utc;
  m["wall_seconds"] = info.wall_seconds;
  ordered_json outcome;
  switch (info.outcome.kind) {
    case Outcome::Kind::Completed: outcome["status"] = "completed"; break;
    case Outcome::Kind::BlewUp:
      outcome["status"] = "blew-up";
      outcome["step"] = info.outcome.step;
      break;
    case Outcome::Kind::Error:
      outcome["status"] = "error";
      outcome["message"] = info.outcome.message;
      break;
  }
  m["outcome"] = outcome;
  ordered_json files = ordered_json::array();
  for (const auto& f : dir.files()) {
    ordered_json e;
    e["name"] = f.name;
    e["bytes"] = f.bytes;
    e["sha256"] = f.sha256;
    if (f.max_abs_vorticity) e["max_abs_vorticity"] = *f.max_abs_vorticity;
    files.push_back(e);
  }
  m["files"] = files;
  write_file_atomic((fs::path(dir.path()) / "manifest.json").string(), m.dump(2) + "\n");
}

std::vector<std::string> verify_manifest(const std::string& dir) {
  const fs::path mpath = fs::path(dir) / "manifest.json";
  std::ifstream in(mpath, std::ios::binary);
  if (!in) throw IoError("cannot read '" + mpath.string() + "'");
  json m;
  try {
    m = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("malformed manifest: " + std::string(e.what()));
  }
  std::vector<std::string> bad;
  for (const auto& f : m.at("files")) {
    const std::string name = f.at("name").get<std::string>();
    std::ifstream file(fs::path(dir) / name, std::ios::binary);
    if (!file) {
      bad.push_back(name);
      continue;
    }
    std::ostringstream ss;
    ss << file.rdbuf();
    const std::string bytes = ss.str();
    if (bytes.size() != f.at("bytes").get<std::uintmax_t>() ||
        sha256_hex(bytes) != f.at("sha256").get<std::string>())
      bad.push_back(name);
  }
  return bad;
}

std::string utc_now_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* version_string() noexcept { return UNS2D_VERSION; }

}  // namespace uns2d
