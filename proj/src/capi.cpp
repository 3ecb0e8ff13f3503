#include "uns2d/uns2d.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "uns2d/commands.hpp"
#include "uns2d/error.hpp"
#include "uns2d/io.hpp"
#include "uns2d/timestepper.hpp"

struct uns2d_config {
  uns2d::ConfigFile file;
};

struct uns2d_sim {
  uns2d::Simulation sim;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_key;

void clear_error() {
  last_error.clear();
  last_key.clear();
}

uns2d_status fail(uns2d_status s, const std::string& msg, const std::string& key = {}) {
  last_error = msg;
  last_key = key;
  return s;
}

// Maps the library's exceptions to status codes.
template <class F>
uns2d_status guarded(F&& fn) {
  clear_error();
  try {
    return fn();
  } catch (const uns2d::ConfigError& e) {
    return fail(UNS2D_ERR_CONFIG, e.what(), e.key_path());
  } catch (const uns2d::BlowUpError& e) {
    return fail(UNS2D_ERR_BLOWUP, e.what());
  } catch (const uns2d::IoError& e) {
    return fail(UNS2D_ERR_IO, e.what());
  } catch (const uns2d::ArgumentError& e) {
    return fail(UNS2D_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(UNS2D_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(UNS2D_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(UNS2D_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* uns2d_version(void) { return uns2d::version_string(); }
const char* uns2d_last_error(void) { return last_error.c_str(); }
const char* uns2d_last_error_key(void) { return last_key.c_str(); }

uns2d_status uns2d_config_load(const char* path, uns2d_config** out) {
  return guarded([&] {
    if (!path || !out) return fail(UNS2D_ERR_ARGUMENT, "null argument");
    *out = new uns2d_config{uns2d::load_config(path)};
    return UNS2D_OK;
  });
}

uns2d_status uns2d_config_parse(const char* json_text, uns2d_config** out) {
  return guarded([&] {
    if (!json_text || !out) return fail(UNS2D_ERR_ARGUMENT, "null argument");
    *out = new uns2d_config{uns2d::parse_config_text(json_text)};
    return UNS2D_OK;
  });
}

void uns2d_config_free(uns2d_config* cfg) { delete cfg; }

uns2d_status uns2d_config_echo(const uns2d_config* cfg, char** out) {
  return guarded([&] {
    if (!cfg || !out) return fail(UNS2D_ERR_ARGUMENT, "null argument");
    *out = dup_string(uns2d::config_echo(cfg->file));
    return UNS2D_OK;
  });
}

uns2d_status uns2d_sim_create(const uns2d_config* cfg, uns2d_sim** out) {
  return guarded([&] {
    if (!cfg || !out) return fail(UNS2D_ERR_ARGUMENT, "null argument");
    *out = new uns2d_sim{uns2d::Simulation(cfg->file.sim)};
    return UNS2D_OK;
  });
}

void uns2d_sim_free(uns2d_sim* sim) { delete sim; }

uns2d_status uns2d_sim_step(uns2d_sim* sim) {
  return guarded([&] {
    if (!sim) return fail(UNS2D_ERR_ARGUMENT, "null argument");
    if (sim->sim.blow_up()) return fail(UNS2D_ERR_BLOWUP, "simulation has blown up");
    if (!sim->sim.advance())
      return fail(UNS2D_ERR_BLOWUP,
                  "blow-up at step " + std::to_string(sim->sim.blow_up()->step));
    return UNS2D_OK;
  });
}

uns2d_status uns2d_sim_run(uns2d_sim* sim) {
  return guarded([&] {
    if (!sim) return fail(UNS2D_ERR_ARGUMENT, "null argument");
    while (!sim->sim.finished())
      if (!sim->sim.advance()) break;
    if (sim->sim.blow_up())
      return fail(UNS2D_ERR_BLOWUP,
                  "blow-up at step " + std::to_string(sim->sim.blow_up()->step));
    return UNS2D_OK;
  });
}

int uns2d_sim_finished(const uns2d_sim* sim) { return sim && sim->sim.finished() ? 1 : 0; }
double uns2d_sim_time(const uns2d_sim* sim) { return sim ? sim->sim.state().t : 0.0; }
long uns2d_sim_step_index(const uns2d_sim* sim) { return sim ? sim->sim.state().n : 0; }

uns2d_status uns2d_sim_diagnostics(const uns2d_sim* sim, uns2d_diagnostics* out) {
  return guarded([&] {
    if (!sim || !out) return fail(UNS2D_ERR_ARGUMENT, "null argument");
    const auto& d = sim->sim.diagnostics();
    *out = {d.step,     d.t,          d.energy,       d.grad_u_sq,   d.lap_u_sq,
            d.div_u_sq, d.grad_ps_sq, d.grad_pe_sq, d.stokes_ratio, d.compat_corr};
    return UNS2D_OK;
  });
}

size_t uns2d_sim_node_count(const uns2d_sim* sim) {
  return sim ? sim->sim.grid().node_count() : 0;
}

uns2d_status uns2d_sim_velocity(const uns2d_sim* sim, double* u1, double* u2, size_t count) {
  return guarded([&] {
    if (!sim || !u1 || !u2) return fail(UNS2D_ERR_ARGUMENT, "null argument");
    const auto& u = sim->sim.state().u;
    const size_t n = sim->sim.grid().node_count();
    if (count < n) return fail(UNS2D_ERR_ARGUMENT, "buffer too small");
    std::memcpy(u1, u.u1.data(), n * sizeof(double));
    std::memcpy(u2, u.u2.data(), n * sizeof(double));
    return UNS2D_OK;
  });
}

uns2d_status uns2d_execute(const char* command, const uns2d_config* cfg, const char* out_dir,
                           const uns2d_options* options, char** summary) {
  return guarded([&] {
    if (!command || !cfg || !out_dir) return fail(UNS2D_ERR_ARGUMENT, "null argument");
    uns2d::CommandOptions opt;
    opt.out_dir = out_dir;
    if (options) {
      if (options->dts && options->dts_count > 0)
        opt.dts = std::vector<double>(options->dts, options->dts + options->dts_count);
      if (options->samples) opt.samples = *options->samples;
      if (options->seed) opt.seed = *options->seed;
      if (options->s) opt.s = *options->s;
    }
    const uns2d::CommandResult r = uns2d::execute_command(command, cfg->file, opt);
    if (summary) *summary = dup_string(r.summary);
    if (r.outcome.kind == uns2d::Outcome::Kind::BlewUp)
      return fail(UNS2D_ERR_BLOWUP, "blow-up at step " + std::to_string(r.outcome.step));
    return UNS2D_OK;
  });
}

void uns2d_string_free(char* s) { std::free(s); }

}  // extern "C"
