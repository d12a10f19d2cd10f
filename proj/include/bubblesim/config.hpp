#pragma once

#include <span>
#include <string>
#include <string_view>

#include "bubblesim/simulation.hpp"

namespace bsim {

// Scenario files are plain text, one `key = value` per line, `#` starts a
// comment. Keys (defaults in parentheses):
//
//   n_agents (10)            rounds (1000)              seed (1)
//   model (endogenous)       endogenous | exogenous
//   risk_curve (linear)      linear | arctan, exogenous model only
//   arctan_k (10)            sigmoid_a (1)              slope_window (3)
//   R (0.5)  alpha (1.1)  v (1)  w (-3)  F (100)
//   R_dist, alpha_dist, v_dist, w_dist, F_dist   `uniform <lo> <hi>` or `none`
//   initial_cash (1000)      initial_shares_min (0)     initial_shares_max (10)
//   initial_price (100)
//   shock                    `<round> <F>`, repeatable, sorted by round
//   exuberant_band, comfort_band, panic_band   `<lo> <hi>` relative (-0.01 0.01)
//   clear_books_each_round (false)             check_invariants (false)
//
// Later lines override earlier ones, except `shock`, which accumulates; a
// `shock = none` line empties the list.

/// Applies one `key = value` setting. Throws ConfigError on an unknown key or bad value.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Parses a scenario file body on top of the built-in defaults and validates it.
ScenarioConfig parse_config(std::string_view text);

/// Same as parse_config but starting from `base` instead of the defaults.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base);

ScenarioConfig load_config(const std::string& path);

/// Every key, in a fixed order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

class UnknownPreset : public ConfigError {
public:
  using ConfigError::ConfigError;
};

std::span<const std::string_view> preset_names();

/// Scenario reproducing one of the reference experiments. Throws UnknownPreset.
ScenarioConfig preset(std::string_view name);

}  // namespace bsim
