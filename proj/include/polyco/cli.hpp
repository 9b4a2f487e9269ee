#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyco/instances.hpp"

namespace polyco {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

// Values left empty fall back to the config's [run] section, then to
// per-command defaults.
struct RunConfig {
  std::string command;  // verify | solve | reduce | compare | list
  std::string instance;
  std::string config_path;
  std::optional<std::vector<double>> mu;
  std::optional<std::pair<int, int>> grid;
  std::optional<double> tol;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> gauge;  // minimal | paper
  std::optional<std::string> out;
  bool svg = false;
};

// "201x201" -> {201, 201}; throws UsageError.
std::pair<int, int> parse_grid(const std::string& text);
// "1.0,0.5" -> {1.0, 0.5}; throws UsageError.
std::vector<double> parse_mu(const std::string& text);

// Full strings solve projected onto the quotient against the reduced solve on
// the same nt×nx grid. Initial data q1 = sin x, q2 = -sin x with velocities
// -cos x and mu1 + cos x, so the level is (mu1, 0). The err_* fields measure
// both sides against 2 sin(x - t) - mu1 t and only mean something when C = 0.
struct StringsGap {
  double linf = 0.0, l2 = 0.0, err_full = 0.0, err_reduced = 0.0;
};
StringsGap compare_strings_grid(const CatalogInstance& inst, double mu1, int nt, int nx);

// Runs one command. Summary lines go to `out`, diagnostics to `err`; report
// files land in the output directory (default polyco-out).
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace polyco
