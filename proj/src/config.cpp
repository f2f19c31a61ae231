#include "tslab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tslab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (!is || !is.eof()) throw ConfigError("invalid value for " + key + ": '" + v + "'");
  return out;
}

template <class T>
T positive(const std::string& key, T v) {
  if (!(v > T{})) throw ConfigError(key + " must be positive");
  return v;
}

}  // namespace

RunConfig RunConfig::scaled(double s) const {
  RunConfig c = *this;
  c.n = static_cast<std::size_t>(std::llround(static_cast<double>(n) * s));
  c.n += c.n % 2;
  c.X = X * s;
  c.T = T * s;
  c.nx = static_cast<std::size_t>(std::llround(static_cast<double>(nx - 1) * s)) + 1;
  c.nt = static_cast<std::size_t>(std::llround(static_cast<double>(nt - 1) * s)) + 1;
  return c;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "grid.n") {
    c.n = positive(key, parse_number<std::size_t>(key, value));
    if (c.n < 8 || c.n % 2) throw ConfigError("grid.n must be even and >= 8");
  } else if (key == "grid.x") c.X = positive(key, parse_number<double>(key, value));
  else if (key == "grid.t") c.T = positive(key, parse_number<double>(key, value));
  else if (key == "grid.nx") c.nx = positive(key, parse_number<std::size_t>(key, value));
  else if (key == "grid.nt") c.nt = positive(key, parse_number<std::size_t>(key, value));
  else if (key == "search.max_iter") c.max_iter = positive(key, parse_number<int>(key, value));
  else if (key == "search.tol") c.tol = positive(key, parse_number<double>(key, value));
  else if (key == "search.seed") c.seed = parse_number<unsigned>(key, value);
  else if (key == "search.random_starts") c.random_starts = parse_number<int>(key, value);
  else if (key == "search.bump_starts") c.bump_starts = parse_number<int>(key, value);
  else if (key == "search.sym_every") c.sym_every = positive(key, parse_number<int>(key, value));
  else if (key == "search.final_free") c.final_free = parse_number<int>(key, value);
  else if (key == "rp.spacing") c.rp_spacing = positive(key, parse_number<double>(key, value));
  else if (key == "experiment.name") c.experiment = value;
  else if (key == "output.dir") c.output_dir = value;
  else throw ConfigError("unknown config key: " + key);
  if (c.nx < 16 || c.nt < 16) throw ConfigError("grid.nx and grid.nt must be >= 16");
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  RunConfig c;
  for (const auto& [k, v] : parse_key_values(ss.str())) apply_setting(c, k, v);
  return c;
}

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::map<std::string, std::string> config_echo(const RunConfig& c) {
  return {{"grid.n", std::to_string(c.n)},
          {"grid.x", shortest(c.X)},
          {"grid.t", shortest(c.T)},
          {"grid.nx", std::to_string(c.nx)},
          {"grid.nt", std::to_string(c.nt)},
          {"search.max_iter", std::to_string(c.max_iter)},
          {"search.tol", shortest(c.tol)},
          {"search.seed", std::to_string(c.seed)},
          {"search.random_starts", std::to_string(c.random_starts)},
          {"search.bump_starts", std::to_string(c.bump_starts)},
          {"search.sym_every", std::to_string(c.sym_every)},
          {"search.final_free", std::to_string(c.final_free)},
          {"rp.spacing", shortest(c.rp_spacing)},
          {"experiment.name", c.experiment},
          {"output.dir", c.output_dir}};
}

}  // namespace tslab
