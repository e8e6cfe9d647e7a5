#pragma once

// Command-line front end: grid evaluation of the library with CSV/JSON output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dephaseprobe::cli {

// ---- tables -----------------------------------------------------------------

/// A numeric result table plus the configuration that produced it. Booleans
/// and signs are stored as numbers (0/1, -1/0/1).
struct Table {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> notes;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool operator==(const Table&) const = default;
};

/// 17 significant digits, enough for parsing to recover the double exactly.
std::string format_number(double value);

/// "# dephaseprobe <command>", "# key=value" per config entry, "# note: ..."
/// per note, then a header line and one line per row.
void write_csv(const Table& table, std::ostream& out);
Table read_csv(std::istream& in);

/// {"command", "config": {...}, "notes": [...], "columns": [...], "rows": [{...}]}
void write_json(const Table& table, std::ostream& out);

// ---- ranges -----------------------------------------------------------------

struct Range {
  double start = 0.0;
  double stop = 0.0;
  int count = 2;
  bool logarithmic = false;

  /// Inclusive endpoints.
  std::vector<double> values() const;
  std::string to_string() const;
};

/// "start:stop:count" or "log:start:stop:count". Requires count >= 2 and
/// stop > start (and start > 0 for log spacing); throws std::invalid_argument.
Range parse_range(const std::string& text);

// ---- commands ---------------------------------------------------------------

enum class Command { Rate, Qfi, Fisher, Sweep, Opt, Excess, Simulate };
enum class OutputFormat { Csv, Json };

const char* to_string(Command command);

struct RunConfig {
  Command command = Command::Rate;
  std::optional<double> s;
  std::optional<double> tau;
  double T = 0.0;
  std::optional<Range> s_range;
  std::optional<Range> tau_range;
  double b1 = 1.0;
  std::int64_t M = 10000;
  std::int64_t trials = 1000;
  std::uint64_t seed = 42;
  double tau_max = 35.0;
  double Omega = 1.0;
  /// rate only: auto | exact | low-T | low-T-quadratic | high-T
  std::string model = "auto";
  /// simulate only: estimator search interval
  double s_lo = 0.1;
  double s_hi = 3.0;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::string> output_path;
};

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitInvalidConfig = 1;
inline constexpr int kExitNumericalFailure = 2;

/// Thrown for configurations rejected before any evaluation (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validates the config and evaluates the command's grid. Throws ConfigError
/// for invalid configurations; per-point numerical failures propagate as
/// NumericalFailure.
Table evaluate(const RunConfig& config);

class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& point, const std::string& what)
      : std::runtime_error(what), point_(point) {}
  const std::string& point() const noexcept { return point_; }

 private:
  std::string point_;
};

/// Evaluates and emits the table (to config.output_path or out). Returns the
/// exit status; diagnostics go to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (program name first) and calls run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dephaseprobe::cli
