#include "bubblesim/config.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <vector>

#include "format.hpp"

namespace bsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for '" + std::string(key) + "': expected " +
                    std::string(expected));
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  if (!detail::parse_double(value, out)) bad_value(key, value, "a number");
  return out;
}

template <class Int>
Int to_int(std::string_view key, std::string_view value) {
  Int out{};
  if (!detail::parse_int(value, out)) bad_value(key, value, "an integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "true or false");
}

std::pair<double, double> to_pair(std::string_view key, std::string_view value) {
  const auto w = words(value);
  if (w.size() != 2) bad_value(key, value, "two numbers");
  return {to_double(key, w[0]), to_double(key, w[1])};
}

std::optional<UniformRange> to_distribution(std::string_view key, std::string_view value) {
  if (value == "none") return std::nullopt;
  const auto w = words(value);
  if (w.size() != 3 || w[0] != "uniform") bad_value(key, value, "'uniform <lo> <hi>' or 'none'");
  return UniformRange{to_double(key, w[1]), to_double(key, w[2])};
}

std::string format_distribution(const std::optional<UniformRange>& range) {
  if (!range) return "none";
  return "uniform " + detail::format_double(range->lo) + " " + detail::format_double(range->hi);
}

std::string format_band(const PriceBand& band) {
  return detail::format_double(band.lo) + " " + detail::format_double(band.hi);
}

ExogenousRisk& exogenous(ScenarioConfig& c) {
  if (!std::holds_alternative<ExogenousRisk>(c.model)) c.model = ExogenousRisk{};
  return std::get<ExogenousRisk>(c.model);
}

// Parameters of both model variants live in the file even when the other
// variant is active, so they are kept here until the model is chosen.
struct ModelKnobs {
  double arctan_k = 10.0;
  double sigmoid_a = 1.0;
  int slope_window = 3;
  SigmoidForm form = SigmoidForm::Shift;
};

SigmoidForm to_form(std::string_view key, std::string_view value) {
  if (value == "shift") return SigmoidForm::Shift;
  if (value == "steepness") return SigmoidForm::Steepness;
  bad_value(key, value, "shift or steepness");
}

}  // namespace

void apply_setting(ScenarioConfig& c, std::string_view key, std::string_view raw) {
  const auto value = trim(raw);
  if (key == "n_agents") {
    c.n_agents = to_int<int>(key, value);
  } else if (key == "rounds") {
    c.rounds = to_int<std::int64_t>(key, value);
  } else if (key == "seed") {
    c.seed = to_int<std::uint64_t>(key, value);
  } else if (key == "model") {
    if (value == "endogenous") {
      if (!std::holds_alternative<EndogenousRisk>(c.model)) c.model = EndogenousRisk{};
    } else if (value == "exogenous") {
      exogenous(c);
    } else {
      bad_value(key, value, "endogenous or exogenous");
    }
  } else if (key == "risk_curve") {
    auto& exo = exogenous(c);
    if (value == "linear") {
      exo.curve = LinearCurve{};
    } else if (value == "arctan") {
      if (!std::holds_alternative<ArctanCurve>(exo.curve)) exo.curve = ArctanCurve{};
    } else {
      bad_value(key, value, "linear or arctan");
    }
  } else if (key == "arctan_k") {
    const double k = to_double(key, value);
    if (auto* exo = std::get_if<ExogenousRisk>(&c.model)) {
      if (auto* arc = std::get_if<ArctanCurve>(&exo->curve)) arc->steepness = k;
    }
  } else if (key == "sigmoid_a") {
    const double a = to_double(key, value);
    if (auto* endo = std::get_if<EndogenousRisk>(&c.model)) endo->sigmoid_factor = a;
  } else if (key == "slope_window") {
    const int w = to_int<int>(key, value);
    if (auto* endo = std::get_if<EndogenousRisk>(&c.model)) endo->slope_window = w;
  } else if (key == "sigmoid_form") {
    const auto form = to_form(key, value);
    if (auto* endo = std::get_if<EndogenousRisk>(&c.model)) endo->form = form;
  } else if (key == "R") {
    c.defaults.risk_threshold = to_double(key, value);
  } else if (key == "alpha") {
    c.defaults.fool_factor = to_double(key, value);
  } else if (key == "v") {
    c.defaults.deviation_weight = to_double(key, value);
  } else if (key == "w") {
    c.defaults.slope_weight = to_double(key, value);
  } else if (key == "F") {
    c.defaults.fundamental = to_double(key, value);
  } else if (key == "R_dist") {
    c.distributions.risk_threshold = to_distribution(key, value);
  } else if (key == "alpha_dist") {
    c.distributions.fool_factor = to_distribution(key, value);
  } else if (key == "v_dist") {
    c.distributions.deviation_weight = to_distribution(key, value);
  } else if (key == "w_dist") {
    c.distributions.slope_weight = to_distribution(key, value);
  } else if (key == "F_dist") {
    c.distributions.fundamental = to_distribution(key, value);
  } else if (key == "initial_cash") {
    c.initial_cash = to_double(key, value);
  } else if (key == "initial_shares_min") {
    c.initial_shares_min = to_int<std::int64_t>(key, value);
  } else if (key == "initial_shares_max") {
    c.initial_shares_max = to_int<std::int64_t>(key, value);
  } else if (key == "initial_price") {
    c.initial_price = to_double(key, value);
  } else if (key == "shock") {
    if (value == "none") {
      c.shocks.clear();
    } else {
      const auto w = words(value);
      if (w.size() != 2) bad_value(key, value, "'<round> <F>'");
      c.shocks.push_back(Shock{to_int<std::int64_t>(key, w[0]), to_double(key, w[1])});
    }
  } else if (key == "exuberant_band") {
    const auto [lo, hi] = to_pair(key, value);
    c.bands.exuberant = {lo, hi};
  } else if (key == "comfort_band") {
    const auto [lo, hi] = to_pair(key, value);
    c.bands.comfort = {lo, hi};
  } else if (key == "panic_band") {
    const auto [lo, hi] = to_pair(key, value);
    c.bands.panic = {lo, hi};
  } else if (key == "clear_books_each_round") {
    c.clear_books_each_round = to_bool(key, value);
  } else if (key == "check_invariants") {
    c.check_invariants = to_bool(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

ScenarioConfig parse_config(std::string_view text) { return parse_config(text, ScenarioConfig{}); }

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
  // Model-specific knobs may precede the `model` line, so they are applied
  // after every other key.
  ModelKnobs knobs;
  if (const auto* endo = std::get_if<EndogenousRisk>(&base.model)) {
    knobs.sigmoid_a = endo->sigmoid_factor;
    knobs.slope_window = endo->slope_window;
    knobs.form = endo->form;
  } else if (const auto* arc = std::get_if<ArctanCurve>(&std::get<ExogenousRisk>(base.model).curve)) {
    knobs.arctan_k = arc->steepness;
  }

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      if (key == "arctan_k") {
        knobs.arctan_k = to_double(key, value);
      } else if (key == "sigmoid_a") {
        knobs.sigmoid_a = to_double(key, value);
      } else if (key == "slope_window") {
        knobs.slope_window = to_int<int>(key, value);
      } else if (key == "sigmoid_form") {
        knobs.form = to_form(key, value);
      } else {
        apply_setting(base, key, value);
      }
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (end == text.size()) break;
  }

  if (auto* endo = std::get_if<EndogenousRisk>(&base.model)) {
    endo->sigmoid_factor = knobs.sigmoid_a;
    endo->slope_window = knobs.slope_window;
    endo->form = knobs.form;
  } else if (auto* arc = std::get_if<ArctanCurve>(&std::get<ExogenousRisk>(base.model).curve)) {
    arc->steepness = knobs.arctan_k;
  }
  validate(base);
  return base;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  using detail::format_double;
  std::ostringstream out;
  out << "n_agents = " << c.n_agents << '\n';
  out << "rounds = " << c.rounds << '\n';
  out << "seed = " << c.seed << '\n';
  if (const auto* exo = std::get_if<ExogenousRisk>(&c.model)) {
    out << "model = exogenous\n";
    if (const auto* arc = std::get_if<ArctanCurve>(&exo->curve)) {
      out << "risk_curve = arctan\n";
      out << "arctan_k = " << format_double(arc->steepness) << '\n';
    } else {
      out << "risk_curve = linear\n";
    }
  } else {
    const auto& endo = std::get<EndogenousRisk>(c.model);
    out << "model = endogenous\n";
    out << "sigmoid_form = " << (endo.form == SigmoidForm::Steepness ? "steepness" : "shift") << '\n';
    out << "sigmoid_a = " << format_double(endo.sigmoid_factor) << '\n';
    out << "slope_window = " << endo.slope_window << '\n';
  }
  out << "R = " << format_double(c.defaults.risk_threshold) << '\n';
  out << "alpha = " << format_double(c.defaults.fool_factor) << '\n';
  out << "v = " << format_double(c.defaults.deviation_weight) << '\n';
  out << "w = " << format_double(c.defaults.slope_weight) << '\n';
  out << "F = " << format_double(c.defaults.fundamental) << '\n';
  out << "R_dist = " << format_distribution(c.distributions.risk_threshold) << '\n';
  out << "alpha_dist = " << format_distribution(c.distributions.fool_factor) << '\n';
  out << "v_dist = " << format_distribution(c.distributions.deviation_weight) << '\n';
  out << "w_dist = " << format_distribution(c.distributions.slope_weight) << '\n';
  out << "F_dist = " << format_distribution(c.distributions.fundamental) << '\n';
  out << "initial_cash = " << format_double(c.initial_cash) << '\n';
  out << "initial_shares_min = " << c.initial_shares_min << '\n';
  out << "initial_shares_max = " << c.initial_shares_max << '\n';
  out << "initial_price = " << format_double(c.initial_price) << '\n';
  for (const auto& s : c.shocks) out << "shock = " << s.round << ' ' << format_double(s.fundamental) << '\n';
  out << "exuberant_band = " << format_band(c.bands.exuberant) << '\n';
  out << "comfort_band = " << format_band(c.bands.comfort) << '\n';
  out << "panic_band = " << format_band(c.bands.panic) << '\n';
  out << "clear_books_each_round = " << (c.clear_books_each_round ? "true" : "false") << '\n';
  out << "check_invariants = " << (c.check_invariants ? "true" : "false") << '\n';
  return out.str();
}

namespace {

constexpr std::array<std::string_view, 7> kPresetNames = {
    "fig1-linear",         "fig1-arctan",      "fig2-efficiency", "fig3-shock",
    "fig4-bubble-nocrash", "fig5-alpha-sweep", "fig6-crash",
};

ScenarioConfig heterogeneous_risk_tolerance() {
  ScenarioConfig c;
  c.distributions.risk_threshold = UniformRange{0.4, 0.8};
  return c;
}

}  // namespace

std::span<const std::string_view> preset_names() { return kPresetNames; }

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig c;
  if (name == "fig1-linear") {
    c.model = ExogenousRisk{LinearCurve{}};
  } else if (name == "fig1-arctan") {
    c.model = ExogenousRisk{ArctanCurve{10.0}};
  } else if (name == "fig2-efficiency") {
    // defaults
  } else if (name == "fig3-shock") {
    c.shocks = {Shock{250, 75.0}};
  } else if (name == "fig4-bubble-nocrash" || name == "fig5-alpha-sweep") {
    c = heterogeneous_risk_tolerance();
  } else if (name == "fig6-crash") {
    c = heterogeneous_risk_tolerance();
    c.defaults.slope_weight = -5.0;
    c.bands.panic = PriceBand{-0.05, 0.0};
  } else {
    throw UnknownPreset("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace bsim
