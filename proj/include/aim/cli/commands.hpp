#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace aim::cli {

enum class Command { diagnose, solve_eigen, chain, classify };

namespace exit_code {
inline constexpr int ok = 0;
/// A check the tool itself runs failed (for example a chain residual).
inline constexpr int failure = 1;
inline constexpr int input_error = 2;
inline constexpr int predicted_failure = 3;
inline constexpr int non_stabilizing = 4;
inline constexpr int degenerate = 5;
}  // namespace exit_code

struct RunConfig {
  Command command = Command::diagnose;
  std::string lambda0Text;
  std::string s0Text;
  /// 0 selects the command default (50 for diagnose, 3 for chain).
  int nMax = 0;
  std::string x0Text = "1/10000";
  /// 0 selects the command default (512 bits for solve-eigen, 256 otherwise).
  unsigned prec = 0;
  std::filesystem::path outDir = ".";
  bool emitPlot = false;
  std::string AText;
  int levels = 1;
  int digits = 15;
  bool trace = false;
  bool timing = true;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// key=value lines (blank lines and # comments skipped) as "--key value"
/// arguments; boolean keys become bare flags when true.
std::vector<std::string> config_file_args(const std::filesystem::path& file);

int cmd_diagnose(const RunConfig& config, std::ostream& out);
int cmd_solve_eigen(const RunConfig& config, std::ostream& out);
int cmd_chain(const RunConfig& config, std::ostream& out);
int cmd_classify(const RunConfig& config, std::ostream& out);

/// Parses the command line (flags > config file > defaults), runs the
/// subcommand and maps errors onto exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aim::cli
