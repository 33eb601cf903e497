#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace reslab::cli {

enum class Format { text, csv, json };

/// Parsed command line. Fields unused by the chosen subcommand keep their
/// defaults.
struct CliConfig {
  std::string subcommand;

  std::uint64_t q = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t m = 1;
  std::vector<std::uint64_t> q_list;
  std::vector<std::uint64_t> x_list;
  std::vector<std::uint64_t> y_list;
  std::vector<std::uint64_t> q_range;  // lo, hi, count
  double x_real = 0.0;
  double y_real = 0.0;
  double level_y = 0.0;  // resonate at an explicit y instead of the theorem level
  double c = 0.0;        // 0 selects the mode's default
  double eps = 0.1;
  double delta = 0.05;
  double sigma = 0.0;
  double power = 0.0;
  double a = 1.0;
  double tol = 0.0;
  std::uint64_t chi = 0;
  bool has_chi = false;
  std::uint64_t truncation = 0;
  std::uint64_t top = 10;
  std::uint64_t budget = 0;  // 0 keeps the environment / built-in default
  bool composite = false;

  std::string format;  // empty selects the subcommand's default
  std::string output;
  unsigned workers = 0;
  bool verbose = false;
  bool timings = false;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Parses args (program name excluded), runs the subcommand and writes the
/// report to out or --output. Diagnostics go to err as one line
/// "error: <code>: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reslab::cli
