#include "bubblesim/bubblesim.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "bubblesim/config.hpp"
#include "bubblesim/report.hpp"
#include "bubblesim/simulation.hpp"

struct bsim_config {
  bsim::ScenarioConfig value;
};

struct bsim_result {
  bsim::SimulationResult value;
};

namespace {

thread_local std::string last_error;

bsim_status fail(bsim_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps exceptions escaping the core onto status codes.
template <class Fn>
bsim_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const bsim::UnknownPreset& e) {
    return fail(BSIM_ERR_UNKNOWN_PRESET, e.what());
  } catch (const bsim::ConfigError& e) {
    return fail(BSIM_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BSIM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(BSIM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BSIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BSIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BSIM_ERR_INTERNAL, "unknown error");
  }
}

bsim::MetricsOptions to_options(const bsim_metrics_options* o) {
  bsim::MetricsOptions m;
  if (!o) return m;
  m.deviation_from = o->deviation_from;
  m.deviation_to = o->deviation_to;
  m.osc_window = o->osc_window;
  m.crash_drawdown = o->crash_drawdown;
  m.bubble_ratio = o->bubble_ratio;
  m.convergence_tol = o->convergence_tol;
  m.convergence_sustain = o->convergence_sustain;
  return m;
}

bsim_status null_argument(const char* what) {
  return fail(BSIM_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* bsim_version(void) { return "1.0.0"; }

const char* bsim_last_error(void) { return last_error.c_str(); }

const char* bsim_status_string(bsim_status status) {
  switch (status) {
    case BSIM_OK: return "ok";
    case BSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BSIM_ERR_CONFIG: return "configuration error";
    case BSIM_ERR_UNKNOWN_PRESET: return "unknown preset";
    case BSIM_ERR_IO: return "i/o error";
    case BSIM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

size_t bsim_preset_count(void) { return bsim::preset_names().size(); }

const char* bsim_preset_name(size_t index) {
  const auto names = bsim::preset_names();
  // Preset names are literals, hence NUL-terminated.
  return index < names.size() ? names[index].data() : nullptr;
}

bsim_status bsim_config_new(bsim_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new bsim_config{};
    return BSIM_OK;
  });
}

bsim_status bsim_config_from_preset(const char* name, bsim_config** out) {
  if (!name || !out) return null_argument("name and out");
  return guarded([&] {
    *out = new bsim_config{bsim::preset(name)};
    return BSIM_OK;
  });
}

bsim_status bsim_config_parse(const char* text, bsim_config** out) {
  if (!text || !out) return null_argument("text and out");
  return guarded([&] {
    *out = new bsim_config{bsim::parse_config(text)};
    return BSIM_OK;
  });
}

bsim_status bsim_config_load(const char* path, bsim_config** out) {
  if (!path || !out) return null_argument("path and out");
  return guarded([&] {
    *out = new bsim_config{bsim::load_config(path)};
    return BSIM_OK;
  });
}

bsim_status bsim_config_clone(const bsim_config* config, bsim_config** out) {
  if (!config || !out) return null_argument("config and out");
  return guarded([&] {
    *out = new bsim_config{config->value};
    return BSIM_OK;
  });
}

void bsim_config_free(bsim_config* config) { delete config; }

bsim_status bsim_config_set(bsim_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return null_argument("config, key and value");
  return guarded([&] {
    auto updated = config->value;
    bsim::apply_setting(updated, key, value);
    bsim::validate(updated);
    config->value = std::move(updated);
    return BSIM_OK;
  });
}

bsim_status bsim_config_get_seed(const bsim_config* config, uint64_t* seed) {
  if (!config || !seed) return null_argument("config and seed");
  *seed = config->value.seed;
  return BSIM_OK;
}

bsim_status bsim_config_get_rounds(const bsim_config* config, int64_t* rounds) {
  if (!config || !rounds) return null_argument("config and rounds");
  *rounds = config->value.rounds;
  return BSIM_OK;
}

bsim_status bsim_config_serialize(const bsim_config* config, char* buffer, size_t capacity, size_t* needed) {
  if (!config) return null_argument("config");
  return guarded([&] {
    const auto text = bsim::serialize_config(config->value);
    if (needed) *needed = text.size() + 1;
    if (!buffer) return BSIM_OK;
    if (capacity < text.size() + 1) return fail(BSIM_ERR_INVALID_ARGUMENT, "buffer too small");
    std::memcpy(buffer, text.c_str(), text.size() + 1);
    return BSIM_OK;
  });
}

bsim_status bsim_run(const bsim_config* config, uint64_t seed, bsim_result** out) {
  if (!config || !out) return null_argument("config and out");
  return guarded([&] {
    auto c = config->value;
    c.seed = seed;
    *out = new bsim_result{bsim::run_simulation(c)};
    return BSIM_OK;
  });
}

bsim_status bsim_run_batch(const bsim_config* config, const uint64_t* seeds, size_t count, bsim_result** out) {
  if (!config || !out || (!seeds && count > 0)) return null_argument("config, seeds and out");
  if (count == 0) return fail(BSIM_ERR_INVALID_ARGUMENT, "seed list is empty");
  return guarded([&] {
    auto results = bsim::run_batch(config->value, {seeds, count});
    std::vector<std::unique_ptr<bsim_result>> owned;
    owned.reserve(count);
    for (auto& r : results) owned.push_back(std::make_unique<bsim_result>(bsim_result{std::move(r)}));
    for (size_t i = 0; i < count; ++i) out[i] = owned[i].release();
    return BSIM_OK;
  });
}

void bsim_result_free(bsim_result* result) { delete result; }

uint64_t bsim_result_seed(const bsim_result* result) { return result ? result->value.config.seed : 0; }

size_t bsim_result_price_count(const bsim_result* result) { return result ? result->value.prices.size() : 0; }

bsim_status bsim_result_prices(const bsim_result* result, double* out, size_t capacity) {
  if (!result || !out) return null_argument("result and out");
  const auto& prices = result->value.prices;
  if (capacity < prices.size()) return fail(BSIM_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(out, prices.data(), prices.size() * sizeof(double));
  return BSIM_OK;
}

size_t bsim_result_trade_count(const bsim_result* result) { return result ? result->value.trades.size() : 0; }

size_t bsim_result_agent_count(const bsim_result* result) { return result ? result->value.final_states.size() : 0; }

bsim_status bsim_result_agent(const bsim_result* result, size_t index, double* cash, int64_t* shares) {
  if (!result) return null_argument("result");
  if (index >= result->value.final_states.size()) return fail(BSIM_ERR_INVALID_ARGUMENT, "agent index out of range");
  const auto& s = result->value.final_states[index];
  if (cash) *cash = s.cash;
  if (shares) *shares = s.shares;
  return BSIM_OK;
}

bsim_status bsim_result_write_series_csv(const bsim_result* result, const char* path) {
  if (!result || !path) return null_argument("result and path");
  return guarded([&] {
    bsim::write_series_csv(result->value, path);
    return BSIM_OK;
  });
}

bsim_status bsim_result_write_ledger_csv(const bsim_result* result, const char* path) {
  if (!result || !path) return null_argument("result and path");
  return guarded([&] {
    bsim::write_ledger_csv(result->value.trades, path);
    return BSIM_OK;
  });
}

void bsim_metrics_options_default(bsim_metrics_options* options) {
  if (!options) return;
  const bsim::MetricsOptions m;
  options->deviation_from = m.deviation_from;
  options->deviation_to = m.deviation_to;
  options->osc_window = m.osc_window;
  options->crash_drawdown = m.crash_drawdown;
  options->bubble_ratio = m.bubble_ratio;
  options->convergence_tol = m.convergence_tol;
  options->convergence_sustain = m.convergence_sustain;
}

bsim_status bsim_result_stats(const bsim_result* result, const bsim_metrics_options* options, bsim_series_stats* out) {
  if (!result || !out) return null_argument("result and out");
  return guarded([&] {
    const auto stats = bsim::run_stats(result->value, to_options(options));
    out->mean_abs_rel_dev = stats.series.mean_abs_rel_dev;
    out->peak_round = static_cast<int64_t>(stats.series.peak.round);
    out->peak_price = stats.series.peak.price;
    out->max_drawdown = stats.series.peak.max_drawdown;
    out->osc_std = stats.series.osc_std;
    out->convergence_time = stats.series.convergence_time.value_or(-1);
    out->bubble = stats.bubble ? 1 : 0;
    out->crash = stats.crash ? 1 : 0;
    return BSIM_OK;
  });
}

bsim_status bsim_write_summary(const bsim_result* const* results, const char* const* groups, size_t count,
                               const bsim_metrics_options* options, const char* path) {
  if (!results || !path) return null_argument("results and path");
  if (count == 0) return fail(BSIM_ERR_INVALID_ARGUMENT, "summary needs at least one result");
  return guarded([&] {
    std::vector<bsim::LabeledResult> runs;
    runs.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!results[i]) return null_argument("results[i]");
      runs.push_back({&results[i]->value, groups && groups[i] ? groups[i] : ""});
    }
    bsim::write_summary(runs, to_options(options), path);
    return BSIM_OK;
  });
}

}  // extern "C"
