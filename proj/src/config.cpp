#include "relaxcat/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

#include "relaxcat/csv.hpp"
#include "relaxcat/errors.hpp"

namespace relaxcat {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  for (const auto& item : split_csv_line(value)) {
    const auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ConfigError("not an integer: '" + std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view text) {
  text = trim(text);
  if (text == "on" || text == "true" || text == "1" || text == "yes") return true;
  if (text == "off" || text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("not a boolean: '" + std::string(text) + "'");
}

double positive(std::string_view key, std::string_view text) {
  const double v = parse_number(text);
  if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive");
  return v;
}

int positive_int(std::string_view key, std::string_view text) {
  const int v = parse_int(text);
  if (v <= 0) throw ConfigError(std::string(key) + " must be positive");
  return v;
}

EulerRiemannSetup& euler(RunConfig& c) {
  if (!c.euler) c.euler = EulerRiemannSetup{};
  return *c.euler;
}

using Setter = std::function<void(RunConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"case", [](RunConfig& c, auto, auto v) { c.case_name = std::string(trim(v)); }},
      {"scheme", [](RunConfig& c, auto, auto v) { c.schemes = split_list(v); }},
      {"schemes", [](RunConfig& c, auto, auto v) { c.schemes = split_list(v); }},
      {"n_cells", [](RunConfig& c, auto k, auto v) { c.n_cells = positive_int(k, v); }},
      {"cfl", [](RunConfig& c, auto k, auto v) { c.cfl = positive(k, v); }},
      {"dt", [](RunConfig& c, auto k, auto v) { c.dt = positive(k, v); }},
      {"eps",
       [](RunConfig& c, auto k, auto v) {
         c.eps.clear();
         for (const auto& item : split_list(v)) c.eps.push_back(positive(k, item));
       }},
      {"t_final", [](RunConfig& c, auto k, auto v) { c.t_final = positive(k, v); }},
      {"a", [](RunConfig& c, auto k, auto v) { c.xinjin_a = positive(k, v); }},
      {"output", [](RunConfig& c, auto, auto v) { c.out_dir = std::string(trim(v)); }},
      {"repeats", [](RunConfig& c, auto k, auto v) { c.repeats = positive_int(k, v); }},
      {"grids",
       [](RunConfig& c, auto k, auto v) {
         c.grids.clear();
         for (const auto& item : split_list(v)) c.grids.push_back(positive_int(k, item));
       }},
      {"mood", [](RunConfig& c, auto, auto v) { c.mood = parse_bool(v); }},
      {"mood.eps1", [](RunConfig& c, auto k, auto v) { c.mood_eps1 = positive(k, v); }},
      {"mood.eps2", [](RunConfig& c, auto k, auto v) { c.mood_eps2 = positive(k, v); }},
      {"mood.rounds", [](RunConfig& c, auto k, auto v) { c.mood_rounds = positive_int(k, v); }},
      {"mood.pad", [](RunConfig& c, auto, auto v) { c.mood_pad = parse_bool(v); }},
      {"reference.n_fine", [](RunConfig& c, auto k, auto v) { c.reference_n = positive_int(k, v); }},
      {"reference.cfl", [](RunConfig& c, auto k, auto v) { c.reference_cfl = positive(k, v); }},
      {"reference.self", [](RunConfig& c, auto, auto v) { c.reference_self = parse_bool(v); }},
      {"stability.schemes",
       [](RunConfig& c, auto, auto v) { c.stability_schemes = split_list(v); }},
      {"stability.a",
       [](RunConfig& c, auto k, auto v) {
         c.stability_a.clear();
         for (const auto& item : split_list(v)) c.stability_a.push_back(positive(k, item));
       }},
      {"stability.eps", [](RunConfig& c, auto k, auto v) { c.stability_eps = positive(k, v); }},
      {"stability.k_samples",
       [](RunConfig& c, auto k, auto v) { c.stability.k_samples = positive_int(k, v); }},
      {"stability.mu_tol", [](RunConfig& c, auto k, auto v) { c.stability.mu_tol = positive(k, v); }},
      {"stability.mu_ceiling",
       [](RunConfig& c, auto k, auto v) { c.stability.mu_ceiling = positive(k, v); }},
      {"stability.dx", [](RunConfig& c, auto k, auto v) { c.stability.dx = positive(k, v); }},
      {"euler.rho_left", [](RunConfig& c, auto k, auto v) { euler(c).rho_left = positive(k, v); }},
      {"euler.u_left", [](RunConfig& c, auto, auto v) { euler(c).u_left = parse_number(v); }},
      {"euler.p_left", [](RunConfig& c, auto k, auto v) { euler(c).p_left = positive(k, v); }},
      {"euler.rho_right", [](RunConfig& c, auto k, auto v) { euler(c).rho_right = positive(k, v); }},
      {"euler.u_right", [](RunConfig& c, auto, auto v) { euler(c).u_right = parse_number(v); }},
      {"euler.p_right", [](RunConfig& c, auto k, auto v) { euler(c).p_right = positive(k, v); }},
      {"euler.x_split", [](RunConfig& c, auto, auto v) { euler(c).x_split = parse_number(v); }},
      {"euler.gamma",
       [](RunConfig& c, auto k, auto v) {
         euler(c).params.gamma = positive(k, v);
         if (!(euler(c).params.gamma > 1.0)) throw ConfigError("euler.gamma must exceed 1");
       }},
      {"euler.r_gas", [](RunConfig& c, auto k, auto v) { euler(c).params.r_gas = positive(k, v); }},
      {"euler.t_bath", [](RunConfig& c, auto k, auto v) { euler(c).params.t_bath = positive(k, v); }},
      {"euler.k", [](RunConfig& c, auto k, auto v) { euler(c).params.k_override = positive(k, v); }},
  };
  return table;
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  try {
    it->second(cfg, key, value);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view body(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    try {
      if (eq == std::string_view::npos) throw ConfigError("expected key = value");
      apply_setting(cfg, body.substr(0, eq), body.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

TestCase resolve_case(const RunConfig& cfg) {
  TestCase tc = find_case(cfg.case_name);
  if (cfg.euler) {
    if (tc.name != "EulerHeat-RP") throw ConfigError("euler.* keys need case EulerHeat-RP");
    tc = euler_riemann_case(*cfg.euler);
  }
  if (cfg.xinjin_a) tc = with_xinjin_slope(tc, *cfg.xinjin_a);
  if (cfg.t_final) tc.t_final = *cfg.t_final;
  return tc;
}

SchemeConfig resolve_scheme(const RunConfig& cfg, const std::string& name, const TestCase& tc) {
  SchemeConfig s = scheme_from_string(name);
  if (cfg.mood) {
    if (*cfg.mood && s.kind != SchemeKind::Cat2Trap && s.kind != SchemeKind::Cat2Tay)
      throw ConfigError("mood = on needs a CAT2 scheme");
    s.mood = *cfg.mood;
  }
  s.mood_cfg = tc.mood;
  if (cfg.mood_eps1) s.mood_cfg.eps1 = *cfg.mood_eps1;
  if (cfg.mood_eps2) s.mood_cfg.eps2 = *cfg.mood_eps2;
  if (cfg.mood_rounds) s.mood_cfg.max_cascade_rounds = *cfg.mood_rounds;
  if (cfg.mood_pad) s.mood_cfg.enable_pad = *cfg.mood_pad;
  s.cfl = cfg.cfl;
  s.fixed_dt = cfg.dt;
  return s;
}

std::vector<double> resolve_eps(const RunConfig& cfg, const TestCase& tc) {
  if (!cfg.eps.empty()) return cfg.eps;
  if (tc.eps_values.empty()) return {1.0};
  return {tc.eps_values.front()};
}

}  // namespace relaxcat
