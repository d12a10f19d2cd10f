// bubblesim command-line front end. Talks to the simulator exclusively
// through the C API in bubblesim.h.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bubblesim/bubblesim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunError = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigDeleter {
  void operator()(bsim_config* c) const { bsim_config_free(c); }
};
struct ResultDeleter {
  void operator()(bsim_result* r) const { bsim_result_free(r); }
};
using ConfigPtr = std::unique_ptr<bsim_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<bsim_result, ResultDeleter>;

void check(bsim_status status, const std::string& context) {
  if (status == BSIM_OK) return;
  std::string message = context + ": " + bsim_last_error();
  if (status == BSIM_ERR_CONFIG || status == BSIM_ERR_UNKNOWN_PRESET || status == BSIM_ERR_INVALID_ARGUMENT)
    throw UsageError(message);
  throw RunError(message);
}

struct CommonOptions {
  std::string preset;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::optional<std::int64_t> rounds;
  std::vector<std::string> settings;
  std::string out;
  std::string ledger;
  std::string summary;
};

void add_common(CLI::App& cmd, CommonOptions& o) {
  auto* preset = cmd.add_option("--preset", o.preset, "Named scenario (see `bubblesim presets`)");
  auto* config = cmd.add_option("--config", o.config_path, "Scenario file (key = value lines)");
  preset->excludes(config);
  config->excludes(preset);
  auto* seed = cmd.add_option("--seed", o.seed, "Single seed (overrides the scenario seed)");
  auto* seeds = cmd.add_option("--seeds", o.seeds, "Seed range N..M or comma list");
  seed->excludes(seeds);
  seeds->excludes(seed);
  cmd.add_option("--rounds", o.rounds, "Number of rounds T")->check(CLI::NonNegativeNumber);
  cmd.add_option("--set", o.settings, "Override one scenario key, KEY=VALUE (repeatable)");
  cmd.add_option("--out", o.out, "Per-round series CSV (suffixed per run when several runs)");
  cmd.add_option("--ledger", o.ledger, "Trade ledger CSV (suffixed per run when several runs)");
  cmd.add_option("--summary", o.summary, "JSON summary path");
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text.front() == '-') throw UsageError("invalid seed '" + text + "'");
  return v;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = parse_seed(text.substr(0, dots));
    const auto hi = parse_seed(text.substr(dots + 2));
    if (hi < lo) throw UsageError("empty seed range '" + text + "'");
    if (hi - lo >= 1'000'000) throw UsageError("seed range '" + text + "' is too large");
    for (auto s = lo;; ++s) {
      out.push_back(s);
      if (s == hi) break;
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    out.push_back(parse_seed(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

ConfigPtr build_config(const CommonOptions& o) {
  bsim_config* raw = nullptr;
  if (!o.preset.empty()) {
    check(bsim_config_from_preset(o.preset.c_str(), &raw), "preset");
  } else if (!o.config_path.empty()) {
    check(bsim_config_load(o.config_path.c_str(), &raw), "config");
  } else {
    throw UsageError("one of --preset or --config is required");
  }
  ConfigPtr config(raw);
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects KEY=VALUE, got '" + kv + "'");
    check(bsim_config_set(config.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set " + kv);
  }
  if (o.rounds) check(bsim_config_set(config.get(), "rounds", std::to_string(*o.rounds).c_str()), "--rounds");
  return config;
}

std::vector<std::uint64_t> resolve_seeds(const CommonOptions& o, const bsim_config* config) {
  if (o.seed) return {*o.seed};
  if (!o.seeds.empty()) return parse_seeds(o.seeds);
  std::uint64_t seed = 0;
  check(bsim_config_get_seed(config, &seed), "seed");
  return {seed};
}

// `dir/name.csv` + tag -> `dir/name_<tag>.csv`; unchanged when tag is empty.
std::string tagged_path(const std::string& path, const std::string& tag) {
  if (tag.empty()) return path;
  const std::filesystem::path p(path);
  auto name = p.stem().string() + "_" + tag + p.extension().string();
  return (p.parent_path() / name).string();
}

std::vector<ResultPtr> run_seeds(const bsim_config* config, const std::vector<std::uint64_t>& seeds) {
  std::vector<bsim_result*> raw(seeds.size(), nullptr);
  check(bsim_run_batch(config, seeds.data(), seeds.size(), raw.data()), "run");
  std::vector<ResultPtr> results;
  for (auto* r : raw) results.emplace_back(r);
  return results;
}

void write_outputs(const CommonOptions& o, const std::vector<ResultPtr>& results, const std::string& prefix) {
  const bool many = results.size() > 1 || !prefix.empty();
  for (const auto& r : results) {
    std::string tag = prefix;
    if (results.size() > 1) tag += (tag.empty() ? "" : "_") + std::string("seed") + std::to_string(bsim_result_seed(r.get()));
    if (!many) tag.clear();
    if (!o.out.empty()) {
      const auto path = tagged_path(o.out, tag);
      check(bsim_result_write_series_csv(r.get(), path.c_str()), "writing " + path);
    }
    if (!o.ledger.empty()) {
      const auto path = tagged_path(o.ledger, tag);
      check(bsim_result_write_ledger_csv(r.get(), path.c_str()), "writing " + path);
    }
  }
}

void print_run_line(const bsim_result* r, const std::string& group) {
  bsim_series_stats s{};
  check(bsim_result_stats(r, nullptr, &s), "stats");
  std::printf("%sseed=%llu trades=%zu mean_abs_rel_dev=%.5f peak=%.3f@%lld max_drawdown=%.4f osc_std=%.4f",
              group.empty() ? "" : (group + " ").c_str(), static_cast<unsigned long long>(bsim_result_seed(r)),
              bsim_result_trade_count(r), s.mean_abs_rel_dev, s.peak_price, static_cast<long long>(s.peak_round),
              s.max_drawdown, s.osc_std);
  if (s.convergence_time >= 0) std::printf(" converged_at=%lld", static_cast<long long>(s.convergence_time));
  std::printf(" bubble=%d crash=%d\n", s.bubble, s.crash);
}

void write_summary(const std::string& path, const std::vector<const bsim_result*>& results,
                   const std::vector<std::string>& groups) {
  std::vector<const char*> labels;
  for (const auto& g : groups) labels.push_back(g.c_str());
  check(bsim_write_summary(results.data(), groups.empty() ? nullptr : labels.data(), results.size(), nullptr,
                           path.c_str()),
        "writing " + path);
}

int cmd_run(const CommonOptions& o) {
  auto config = build_config(o);
  const auto seeds = resolve_seeds(o, config.get());
  const auto results = run_seeds(config.get(), seeds);
  write_outputs(o, results, "");
  std::vector<const bsim_result*> views;
  for (const auto& r : results) {
    print_run_line(r.get(), "");
    views.push_back(r.get());
  }
  if (!o.summary.empty()) write_summary(o.summary, views, {});
  return kExitOk;
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    auto item = text.substr(pos, comma - pos);
    if (item.empty()) throw UsageError("empty entry in --values '" + text + "'");
    out.push_back(item);
    pos = comma + 1;
  }
  return out;
}

int cmd_sweep(const CommonOptions& o, const std::string& param, const std::string& values_text) {
  auto base = build_config(o);
  const auto seeds = resolve_seeds(o, base.get());
  const auto values = split_values(values_text);

  std::vector<ResultPtr> all;
  std::vector<std::string> groups;
  for (const auto& value : values) {
    bsim_config* raw = nullptr;
    check(bsim_config_clone(base.get(), &raw), "clone");
    ConfigPtr config(raw);
    check(bsim_config_set(config.get(), param.c_str(), value.c_str()), "--param " + param + "=" + value);
    auto results = run_seeds(config.get(), seeds);
    const auto group = param + "=" + value;
    write_outputs(o, results, param + value);
    for (auto& r : results) {
      print_run_line(r.get(), group);
      groups.push_back(group);
      all.push_back(std::move(r));
    }
  }
  std::vector<const bsim_result*> views;
  for (const auto& r : all) views.push_back(r.get());
  if (!o.summary.empty()) write_summary(o.summary, views, groups);
  return kExitOk;
}

int cmd_show(const CommonOptions& o) {
  auto config = build_config(o);
  if (o.seed) check(bsim_config_set(config.get(), "seed", std::to_string(*o.seed).c_str()), "--seed");
  size_t needed = 0;
  check(bsim_config_serialize(config.get(), nullptr, 0, &needed), "serialize");
  std::string text(needed, '\0');
  check(bsim_config_serialize(config.get(), text.data(), text.size(), &needed), "serialize");
  text.resize(needed - 1);
  std::fputs(text.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-auction market simulator with bounded-rationality agents"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bsim_version()));

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "Run one scenario for one or more seeds");
  add_common(*run, run_opts);

  CommonOptions sweep_opts;
  std::string param;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario across values of one parameter");
  add_common(*sweep, sweep_opts);
  sweep->add_option("--param", param, "Scenario key to vary, e.g. alpha")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  CommonOptions show_opts;
  auto* show = app.add_subcommand("show", "Print the scenario file for a preset or config");
  add_common(*show, show_opts);

  app.add_subcommand("presets", "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, param, values);
    if (show->parsed()) return cmd_show(show_opts);
    for (size_t i = 0; i < bsim_preset_count(); ++i) std::printf("%s\n", bsim_preset_name(i));
    return kExitOk;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "bubblesim: %s\n", e.what());
    return kExitUsage;
  } catch (const RunError& e) {
    std::fprintf(stderr, "bubblesim: %s\n", e.what());
    return kExitRunError;
  }
}
