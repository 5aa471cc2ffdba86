#include "frachp/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "frachp/output.hpp"

namespace frachp {

namespace {

const std::set<std::string, std::less<>> kSystems = {"pendulum", "metric:polar", "metric:custom",
                                                     "hamiltonian:custom", "black_scholes"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  throw Error(Errc::InvalidValue, "key `" + key + "` = '" + value + "': " + why);
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    bad_value(key, value, "not a finite real number");
  }
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    bad_value(key, value, "not a non-negative integer");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value, "expected true or false");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_real(key, trim(item)));
  }
  if (out.empty()) {
    bad_value(key, value, "expected a comma-separated list of reals");
  }
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_real(xs[i]);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

template <typename Check>
Setter real_key(double RunConfig::*field, Check check, const char* rule) {
  return [=](RunConfig& c, const std::string& key, const std::string& value) {
    const double x = parse_real(key, value);
    if (!check(x)) bad_value(key, value, rule);
    c.*field = x;
  };
}

template <typename Check>
Setter size_key(std::size_t RunConfig::*field, Check check, const char* rule) {
  return [=](RunConfig& c, const std::string& key, const std::string& value) {
    const auto x = parse_unsigned(key, value);
    if (!check(x)) bad_value(key, value, rule);
    c.*field = static_cast<std::size_t>(x);
  };
}

Setter bool_key(bool RunConfig::*field) {
  return [=](RunConfig& c, const std::string& key, const std::string& value) { c.*field = parse_bool(key, value); };
}

Setter list_key(std::vector<double> RunConfig::*field) {
  return [=](RunConfig& c, const std::string& key, const std::string& value) { c.*field = parse_list(key, value); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const auto any = [](double) { return true; };
  static const auto order = [](double x) { return x > 0.0 && x <= 1.0; };
  static const auto positive = [](double x) { return x > 0.0; };
  static const auto nonnegative = [](double x) { return x >= 0.0; };
  static const std::map<std::string, Setter, std::less<>> table = {
      {"system",
       [](RunConfig& c, const std::string& key, const std::string& value) {
         if (!kSystems.contains(value)) {
           bad_value(key, value, "unknown system (pendulum, metric:polar, metric:custom, hamiltonian:custom, "
                                 "black_scholes)");
         }
         c.system = value;
       }},
      {"alpha", real_key(&RunConfig::alpha, order, "must lie in (0, 1]")},
      {"beta", real_key(&RunConfig::beta, order, "must lie in (0, 1]")},
      {"t_eval", real_key(&RunConfig::t_eval, positive, "must be positive")},
      {"t_start", real_key(&RunConfig::t_start, any, "")},
      {"h", real_key(&RunConfig::h, positive, "must be positive")},
      {"n_steps", size_key(&RunConfig::n_steps, [](std::uint64_t n) { return n >= 1; }, "must be at least 1")},
      {"seed", [](RunConfig& c, const std::string& key, const std::string& value) {
         c.seed = parse_unsigned(key, value);
       }},
      {"resolved_seed", [](RunConfig& c, const std::string& key, const std::string& value) {
         c.seed = parse_unsigned(key, value);
       }},
      {"n_paths", size_key(&RunConfig::n_paths, [](std::uint64_t n) { return n >= 1; }, "must be at least 1")},
      {"q0", list_key(&RunConfig::q0)},
      {"p0", list_key(&RunConfig::p0)},
      {"outputs", [](RunConfig& c, const std::string&, const std::string& value) { c.outputs = value; }},
      {"plot", bool_key(&RunConfig::plot)},
      {"eq15_literal", bool_key(&RunConfig::eq15_literal)},
      {"dump_path", bool_key(&RunConfig::dump_path)},
      {"noise",
       [](RunConfig& c, const std::string& key, const std::string& value) {
         if (value != "cos" && value != "const" && value != "linear") {
           bad_value(key, value, "expected cos, const or linear");
         }
         c.noise = value;
       }},
      {"noise_scale", real_key(&RunConfig::noise_scale, any, "")},
      {"levels", size_key(&RunConfig::levels, [](std::uint64_t n) { return n >= 3 && n <= 20; },
                          "must lie in [3, 20]")},
      {"perturbations", size_key(&RunConfig::perturbations, [](std::uint64_t) { return true; }, "")},
      {"stationarity_threshold", real_key(&RunConfig::stationarity_threshold, positive, "must be positive")},
      {"mass", list_key(&RunConfig::mass)},
      {"stiffness", list_key(&RunConfig::stiffness)},
      {"cos_coeff", list_key(&RunConfig::cos_coeff)},
      {"metric_a", list_key(&RunConfig::metric_a)},
      {"metric_b", list_key(&RunConfig::metric_b)},
      {"mu", real_key(&RunConfig::mu, nonnegative, "must be nonnegative")},
      {"sigma", real_key(&RunConfig::sigma, nonnegative, "must be nonnegative")},
      {"x0", real_key(&RunConfig::x0, positive, "must be positive")},
      {"rate", real_key(&RunConfig::rate, nonnegative, "must be nonnegative")},
      {"volterra_path_files", size_key(&RunConfig::volterra_path_files, [](std::uint64_t) { return true; }, "")},
      {"code_version",
       [](RunConfig& c, const std::string&, const std::string& value) { c.code_version = value; }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (eq == std::string::npos) {
      throw Error(Errc::ParseError, "expected `key = value`" + where);
    }
    const auto key = trim(std::string_view(line).substr(0, eq));
    const auto value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      throw Error(Errc::ParseError, "empty key" + where);
    }
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw Error(Errc::UnknownKey, "unknown key `" + key + "`" + where);
    }
    if (!seen.insert(key).second) {
      throw Error(Errc::ParseError, "key `" + key + "` given twice" + where);
    }
    try {
      it->second(config, key, value);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + where);
    }
  }
  for (const char* required : {"system", "alpha", "beta", "t_eval"}) {
    if (!seen.contains(std::string_view(required))) {
      throw Error(Errc::MissingKey, std::string("missing required key `") + required + "`");
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::Io, "cannot read config file " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_manifest(const RunConfig& c) {
  std::ostringstream out;
  auto put = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  put("system", c.system);
  put("alpha", format_real(c.alpha));
  put("beta", format_real(c.beta));
  put("t_eval", format_real(c.t_eval));
  put("t_start", format_real(c.t_start));
  put("h", format_real(c.h));
  put("n_steps", std::to_string(c.n_steps));
  put("n_paths", std::to_string(c.n_paths));
  if (!c.q0.empty()) put("q0", join(c.q0));
  if (!c.p0.empty()) put("p0", join(c.p0));
  put("outputs", c.outputs);
  put("plot", flag(c.plot));
  put("eq15_literal", flag(c.eq15_literal));
  put("dump_path", flag(c.dump_path));
  put("noise", c.noise);
  put("noise_scale", format_real(c.noise_scale));
  put("levels", std::to_string(c.levels));
  put("perturbations", std::to_string(c.perturbations));
  put("stationarity_threshold", format_real(c.stationarity_threshold));
  put("mass", join(c.mass));
  put("stiffness", join(c.stiffness));
  put("cos_coeff", join(c.cos_coeff));
  put("metric_a", join(c.metric_a));
  put("metric_b", join(c.metric_b));
  put("mu", format_real(c.mu));
  put("sigma", format_real(c.sigma));
  put("x0", format_real(c.x0));
  put("rate", format_real(c.rate));
  put("volterra_path_files", std::to_string(c.volterra_path_files));
  put("code_version", std::string(kCodeVersion));
  put("resolved_seed", std::to_string(c.seed));
  return out.str();
}

FractionalParams fractional_params(const RunConfig& config) {
  return FractionalParams(config.alpha, config.beta, config.t_eval);
}

NoiseKind noise_kind(const RunConfig& config) {
  if (config.noise == "const") return NoiseKind::Constant;
  if (config.noise == "linear") return NoiseKind::Linear;
  return NoiseKind::Cos;
}

SystemSpec build_system(const RunConfig& config) {
  const auto noise = make_noise(noise_kind(config), config.noise_scale);
  if (config.system == "pendulum") {
    auto sys = pendulum_system();
    sys.noise = noise;
    return sys;
  }
  if (config.system == "metric:polar") {
    return polar_metric_system(noise);
  }
  if (config.system == "metric:custom") {
    return diagonal_metric_system(config.metric_a, config.metric_b, noise);
  }
  if (config.system == "hamiltonian:custom") {
    return separable_hamiltonian_system(config.mass, config.stiffness, config.cos_coeff, noise);
  }
  throw Error(Errc::NotApplicable, "system `" + config.system + "` has no HP dynamics");
}

std::pair<Vector, Vector> initial_vectors(const RunConfig& config, std::size_t dim) {
  auto fill = [&](const std::vector<double>& given, double fallback, const char* key) {
    if (given.empty()) {
      return Vector::Constant(static_cast<Eigen::Index>(dim), fallback).eval();
    }
    if (given.size() != dim) {
      throw Error(Errc::DimensionMismatch, std::string("key `") + key + "` needs " + std::to_string(dim) +
                                               " entries for system " + config.system);
    }
    return Eigen::Map<const Vector>(given.data(), static_cast<Eigen::Index>(dim)).eval();
  };
  return {fill(config.q0, 1.0, "q0"), fill(config.p0, 0.0, "p0")};
}

}  // namespace frachp
