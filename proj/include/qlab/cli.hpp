#pragma once
// Command-line front end: gap-scan, evolve, tomo, partition, ledger, replay.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qlab::cli {

/// Everything needed to reproduce a run. Instances and input states are
/// stored resolved, so a serialized config does not depend on input files.
struct RunConfig {
  std::string command;

  // Instance source (gap-scan, evolve, partition).
  std::string instance_path;
  std::string generator;
  int n = 0;
  std::int64_t max_weight = 0;
  std::vector<double> weights;

  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  /// 0 = available parallelism. Not part of the serialized config.
  unsigned jobs = 0;

  // gap-scan
  std::size_t grid = 64;
  std::string sector = "flip_symmetric";
  std::string refine = "brent";

  // evolve
  double time = 10.0;
  /// 0 = smallest multiple of 16 meeting error_target.
  std::size_t steps = 0;
  double error_target = 1e-3;
  std::string method = "auto";

  // tomo
  std::string state_path;
  int random_product = 0;
  std::string mode = "product";
  std::uint64_t shots = 10000;
  std::vector<double> state_re;
  std::vector<double> state_im;

  // ledger
  int n_min = 4;
  int n_max = 10;
  int n_step = 2;
  std::size_t instances = 10;
  double target = 0.99;
  double cap = 1e6;
  double t0 = 1.0;

  // replay
  std::string from;
};

/// Thrown for command-line problems; `exit_code` is 0 for --help.
struct UsageError {
  int exit_code = 2;
  std::string message;
};

/// Parses and validates argv, resolving the instance and any input state.
RunConfig parse_args(int argc, const char* const* argv);

/// The command-relevant fields of a config (no out, no jobs).
nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& json);

/// Runs a validated config, writing outputs atomically and a one-line summary
/// to `out`. Module errors propagate as qlab::Error.
int run(const RunConfig& config, std::ostream& out);

/// parse_args + run with the exit-code policy: 0 on success, 1 on module
/// errors, 2 on usage errors.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlab::cli
