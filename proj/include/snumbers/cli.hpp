#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "snumbers/numgrid.hpp"

namespace snumbers {

enum class ExitCode { Success = 0, Failure = 1, Usage = 2 };

enum class OutputFormat { Csv, Json };

/// Parsed command line. Values satisfy each module's preconditions once
/// validate_config() returns.
struct RunConfig {
  std::string command;
  double p = 2.0;
  bool p_given = false;
  Interval interval{0.0, 1.0};
  int n_lo = 2;
  int n_hi = 20;
  bool n_given = false;
  std::size_t nodes_per_unit = 0;  ///< 0: default_nodes_per_unit()
  int trials = 500;
  std::uint64_t seed = 0;
  double tol = 0.0;  ///< 0: the command's default
  std::string target;
  std::string oracle = "none";
  std::size_t count = 20;
  std::optional<OutputFormat> format;
  std::optional<std::string> output;
  std::optional<std::string> plot;
};

/// "a,b" with decimal reals.
Interval parse_interval(const std::string& text);

/// "lo..hi" inclusive, or a single integer N read as (N, N).
std::pair<int, int> parse_range(const std::string& text);

/// Parses and runs one command; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snumbers
