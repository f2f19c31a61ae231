#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace tslab {

struct RunConfig {
  std::size_t n = 256;
  double X = 60.0, T = 60.0;
  std::size_t nx = 121, nt = 121;
  int max_iter = 300;
  double tol = 1e-12;
  unsigned seed = 1;
  int random_starts = 3;
  int bump_starts = 2;
  int sym_every = 5;
  int final_free = 10;
  double rp_spacing = 0.4;
  std::string experiment = "default";
  std::string output_dir = "tslab-out";

  // Scales N, X, T and the interval counts so spacing is kept.
  RunConfig scaled(double s) const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text);
void apply_setting(RunConfig& c, const std::string& key, const std::string& value);
RunConfig load_config(const std::string& path);
std::map<std::string, std::string> config_echo(const RunConfig& c);

}  // namespace tslab
