#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "dephaseprobe/cli.hpp"
#include "dephaseprobe/dephasing.hpp"
#include "dephaseprobe/metrology.hpp"
#include "dephaseprobe/montecarlo.hpp"
#include "dephaseprobe/optimal.hpp"
#include "dephaseprobe/parallel.hpp"

namespace dephaseprobe::cli {

namespace {

using Row = std::vector<double>;

const Range kDefaultSweepS{0.1, 3.0, 30, false};
const Range kDefaultSweepTau{0.1, 35.0, 100, false};
const Range kDefaultOptS{0.1, 3.0, 59, false};

std::vector<double> axis_values(const std::optional<double>& single, const std::optional<Range>& range,
                                const char* name, const std::optional<Range>& fallback = std::nullopt) {
  if (single && range) {
    throw ConfigError(std::string("give either --") + name + " or --" + name + "-range, not both");
  }
  if (single) return {*single};
  if (range) return range->values();
  if (fallback) return fallback->values();
  throw ConfigError(std::string("missing --") + name + " or --" + name + "-range");
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

std::string describe_point(const std::vector<std::pair<const char*, double>>& coords) {
  std::string out;
  for (const auto& [name, value] : coords) {
    if (!out.empty()) out += ", ";
    out += std::string(name) + "=" + format_number(value);
  }
  return out;
}

// Evaluates rows[i] = fn(i) over the grid in parallel; the lowest failing
// index is reported so the diagnostic does not depend on scheduling.
void evaluate_grid(std::size_t n, std::vector<Row>& rows, const std::function<Row(std::size_t)>& fn,
                   const std::function<std::string(std::size_t)>& describe) {
  rows.assign(n, Row{});
  std::vector<std::string> errors(n);
  parallel_for(n, [&](std::size_t i) {
    try {
      rows[i] = fn(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "unknown error";
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) throw NumericalFailure(describe(i), errors[i]);
  }
}

dephasing::DephasingOutcome rate_for_model(const std::string& model, double s, double tau, double T) {
  if (model == "auto") {
    return T == 0.0 ? dephasing::gamma_zero_T(s, tau) : dephasing::gamma_finite_T_exact(s, tau, T);
  }
  if (model == "exact") return dephasing::gamma_finite_T_exact(s, tau, T);
  if (model == "low-T") return dephasing::gamma_low_T(s, tau, T);
  if (model == "low-T-quadratic") return dephasing::gamma_low_T_quadratic(s, tau, T);
  if (model == "high-T") return dephasing::gamma_high_T(s, tau, T);
  throw ConfigError("unknown --model '" + model + "'");
}

void validate_common(const RunConfig& c) {
  if (c.s) require(*c.s > 0.0, "--s must be > 0");
  if (c.s_range) require(c.s_range->start > 0.0, "--s-range must start above 0");
  if (c.tau) require(*c.tau >= 0.0, "--tau must be >= 0");
  if (c.tau_range) require(c.tau_range->start >= 0.0, "--tau-range must start at or above 0");
  require(c.T >= 0.0, "--T must be >= 0");
  require(c.Omega > 0.0, "Omega must be > 0");
  require(c.tau_max > optimal::kScanStart, "--tau-max must exceed 1e-3");
}

struct Grid {
  std::vector<double> s;
  std::vector<double> tau;
  std::size_t size() const { return s.size() * tau.size(); }
  double s_at(std::size_t i) const { return s[i / tau.size()]; }
  double tau_at(std::size_t i) const { return tau[i % tau.size()]; }
};

Table rate_table(const RunConfig& c, Table table) {
  const Grid grid{axis_values(c.s, c.s_range, "s"), axis_values(c.tau, c.tau_range, "tau")};
  if (c.model == "auto") {
    require(c.T >= 0.0, "--T must be >= 0");
  } else {
    require(c.T > 0.0, "--model " + c.model + " needs --T > 0");
  }
  rate_for_model(c.model, 1.0, 0.0, c.T > 0.0 ? c.T : 1.0);  // rejects unknown models up front
  table.columns = {"s", "tau", "T", "gamma", "dgamma_ds"};
  evaluate_grid(
      grid.size(), table.rows,
      [&](std::size_t i) {
        const double s = grid.s_at(i);
        const double tau = grid.tau_at(i);
        const auto rate = rate_for_model(c.model, s, tau, c.T);
        return Row{s, tau, c.T, rate.gamma, rate.dgamma_ds};
      },
      [&](std::size_t i) { return describe_point({{"s", grid.s_at(i)}, {"tau", grid.tau_at(i)}, {"T", c.T}}); });
  return table;
}

Table qfi_table(const RunConfig& c, Table table, const std::optional<Range>& s_fallback,
                const std::optional<Range>& tau_fallback) {
  const Grid grid{axis_values(c.s, c.s_range, "s", s_fallback),
                  axis_values(c.tau, c.tau_range, "tau", tau_fallback)};
  table.columns = {"s", "tau", "T", "qfi", "qsnr", "gamma", "dgamma_ds"};
  evaluate_grid(
      grid.size(), table.rows,
      [&](std::size_t i) {
        const double s = grid.s_at(i);
        const double tau = grid.tau_at(i);
        const metrology::QfiPoint p =
            c.T == 0.0 ? metrology::qfi_ohmicity(s, tau) : metrology::qfi_low_T(s, tau, c.T);
        return Row{p.s, p.tau, p.T, p.qfi, p.qsnr, p.gamma, p.dgamma_ds};
      },
      [&](std::size_t i) { return describe_point({{"s", grid.s_at(i)}, {"tau", grid.tau_at(i)}, {"T", c.T}}); });
  return table;
}

Table fisher_table(const RunConfig& c, Table table) {
  require(c.T == 0.0, "fisher is defined at T = 0 only");
  require(c.b1 >= -1.0 && c.b1 <= 1.0, "--b1 must lie in [-1, 1]");
  const Grid grid{axis_values(c.s, c.s_range, "s"), axis_values(c.tau, c.tau_range, "tau")};
  const auto axis = metrology::MeasurementAxis::from_b1(c.b1);
  table.columns = {"s", "tau", "b1", "F", "H", "F_over_H"};
  evaluate_grid(
      grid.size(), table.rows,
      [&](std::size_t i) {
        const double s = grid.s_at(i);
        const double tau = grid.tau_at(i);
        const double F = metrology::fisher_info_projective(s, tau, axis);
        const double H = metrology::qfi_ohmicity(s, tau).qfi;
        return Row{s, tau, c.b1, F, H, H > 0.0 ? F / H : std::nan("")};
      },
      [&](std::size_t i) { return describe_point({{"s", grid.s_at(i)}, {"tau", grid.tau_at(i)}, {"b1", c.b1}}); });
  return table;
}

Table opt_table(const RunConfig& c, Table table) {
  require(!c.tau && !c.tau_range, "opt scans tau itself; use --tau-max");
  std::vector<double> s_grid = axis_values(c.s, c.s_range, "s", kDefaultOptS);
  const auto curve = optimal::optimal_time_curve(s_grid, c.tau_max);
  table.columns = {"s", "tau_star", "qfi_star", "qsnr_star", "saturating", "horizon"};
  for (const auto& point : curve) {
    if (!point.report) throw NumericalFailure(describe_point({{"s", point.s}}), point.error);
    const auto& r = *point.report;
    table.rows.push_back(
        {r.s, r.tau_star, r.qfi_star, r.s * r.s * r.qfi_star, r.saturating ? 1.0 : 0.0, r.horizon});
  }
  for (const auto& jump : optimal::find_time_jumps(curve)) {
    table.notes.push_back("tau_star jump between s=" + format_number(jump.s_before) + " (tau=" +
                          format_number(jump.tau_before) + ") and s=" + format_number(jump.s_after) +
                          " (tau=" + format_number(jump.tau_after) + ")");
  }
  return table;
}

Table excess_table(const RunConfig& c, Table table) {
  require(c.T > 0.0, "excess needs --T > 0");
  const Grid grid{axis_values(c.s, c.s_range, "s"), axis_values(c.tau, c.tau_range, "tau")};
  table.columns = {"s", "tau", "T", "delta_H", "sign"};
  evaluate_grid(
      grid.size(), table.rows,
      [&](std::size_t i) {
        const double s = grid.s_at(i);
        const double tau = grid.tau_at(i);
        const double delta = metrology::excess_qfi(s, tau, c.T);
        const double sign = delta > 0.0 ? 1.0 : (delta < 0.0 ? -1.0 : 0.0);
        return Row{s, tau, c.T, delta, sign};
      },
      [&](std::size_t i) { return describe_point({{"s", grid.s_at(i)}, {"tau", grid.tau_at(i)}, {"T", c.T}}); });
  return table;
}

Table simulate_table(const RunConfig& c, Table table) {
  require(c.s.has_value() && !c.s_range, "simulate needs a single --s");
  require(!c.tau_range, "simulate takes a single --tau");
  require(c.T == 0.0, "simulate is defined at T = 0 only");
  require(c.b1 >= -1.0 && c.b1 <= 1.0 && c.b1 != 0.0, "--b1 must lie in [-1, 1] and be nonzero");
  require(c.M >= 1, "--M must be >= 1");
  require(c.trials >= 100, "--trials must be >= 100");
  require(c.s_lo > 0.0 && c.s_hi > c.s_lo, "--s-bounds must satisfy 0 < lo < hi");

  montecarlo::ExperimentConfig e;
  e.s_true = *c.s;
  if (c.tau) {
    require(*c.tau > 0.0, "simulate needs --tau > 0");
    e.tau = *c.tau;
  } else {
    try {
      e.tau = optimal::maximize_qfi_over_time(e.s_true, c.tau_max).tau_star;
    } catch (const std::exception& ex) {
      throw NumericalFailure(describe_point({{"s", e.s_true}}), ex.what());
    }
    table.notes.push_back("tau chosen by maximising H_s over (0, " + format_number(c.tau_max) + "]");
  }
  e.M = c.M;
  e.n_trials = c.trials;
  e.axis = metrology::MeasurementAxis::from_b1(c.b1);
  e.seed = c.seed;
  e.s_lo = c.s_lo;
  e.s_hi = c.s_hi;

  montecarlo::EstimationResult r;
  try {
    r = montecarlo::cr_experiment(e);
  } catch (const std::exception& ex) {
    throw NumericalFailure(describe_point({{"s", e.s_true}, {"tau", e.tau}}), ex.what());
  }
  table.columns = {"s_true",    "tau",        "M",          "n_trials", "b1",
                   "s_hat",     "empirical_variance",       "cr_bound", "q_cr_bound",
                   "saturation_ratio",        "failures"};
  table.rows.push_back({e.s_true, e.tau, static_cast<double>(e.M), static_cast<double>(r.n_trials), c.b1,
                        r.s_hat, r.empirical_variance, r.cr_bound, r.q_cr_bound, r.saturation_ratio,
                        static_cast<double>(r.failures)});
  return table;
}

Table base_table(const RunConfig& c) {
  Table t;
  t.command = to_string(c.command);
  auto add = [&](const char* key, const std::string& value) { t.config.emplace_back(key, value); };
  if (c.s) add("s", format_number(*c.s));
  if (c.s_range) add("s-range", c.s_range->to_string());
  if (c.tau) add("tau", format_number(*c.tau));
  if (c.tau_range) add("tau-range", c.tau_range->to_string());
  add("T", format_number(c.T));
  add("Omega", format_number(c.Omega));
  switch (c.command) {
    case Command::Rate: add("model", c.model); break;
    case Command::Fisher: add("b1", format_number(c.b1)); break;
    case Command::Opt: add("tau-max", format_number(c.tau_max)); break;
    case Command::Simulate:
      add("b1", format_number(c.b1));
      add("M", std::to_string(c.M));
      add("trials", std::to_string(c.trials));
      add("seed", std::to_string(c.seed));
      add("s-bounds", format_number(c.s_lo) + ":" + format_number(c.s_hi));
      add("tau-max", format_number(c.tau_max));
      break;
    default: break;
  }
  return t;
}

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::Rate: return "rate";
    case Command::Qfi: return "qfi";
    case Command::Fisher: return "fisher";
    case Command::Sweep: return "sweep";
    case Command::Opt: return "opt";
    case Command::Excess: return "excess";
    case Command::Simulate: return "simulate";
  }
  return "unknown";
}

Table evaluate(const RunConfig& c) {
  validate_common(c);
  Table table = base_table(c);
  switch (c.command) {
    case Command::Rate: return rate_table(c, std::move(table));
    case Command::Qfi: return qfi_table(c, std::move(table), std::nullopt, std::nullopt);
    case Command::Sweep: return qfi_table(c, std::move(table), kDefaultSweepS, kDefaultSweepTau);
    case Command::Fisher: return fisher_table(c, std::move(table));
    case Command::Opt: return opt_table(c, std::move(table));
    case Command::Excess: return excess_table(c, std::move(table));
    case Command::Simulate: return simulate_table(c, std::move(table));
  }
  throw ConfigError("unknown command");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Table table;
  try {
    table = evaluate(config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure at " << e.point() << ": " << e.what() << '\n';
    return kExitNumericalFailure;
  }

  std::ostringstream buffer;
  if (config.format == OutputFormat::Json) {
    write_json(table, buffer);
  } else {
    write_csv(table, buffer);
  }
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot open " << *config.output_path << " for writing\n";
      return kExitInvalidConfig;
    }
    file << buffer.str();
  } else {
    out << buffer.str();
  }
  return kExitSuccess;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-probe metrology of Ohmic dephasing baths"};
  app.require_subcommand(1, 1);

  RunConfig config;
  std::optional<std::string> s_range_text;
  std::optional<std::string> tau_range_text;
  std::optional<std::string> s_bounds_text;
  std::string format_text = "csv";

  const std::vector<std::pair<Command, std::string>> descriptions = {
      {Command::Rate, "dephasing exponent gamma and d gamma / ds"},
      {Command::Qfi, "quantum Fisher information and QSNR"},
      {Command::Fisher, "Fisher information of a projective measurement vs the QFI"},
      {Command::Sweep, "QFI on an (s, tau) grid"},
      {Command::Opt, "optimal interaction time and QFI per s"},
      {Command::Excess, "excess QFI at low temperature"},
      {Command::Simulate, "simulated estimation of s and Cramer-Rao check"},
  };
  std::vector<std::pair<CLI::App*, Command>> subcommands;
  for (const auto& [command, text] : descriptions) {
    CLI::App* sub = app.add_subcommand(to_string(command), text);
    sub->add_option("--s", config.s, "ohmicity s");
    sub->add_option("--tau", config.tau, "interaction time tau = omega_c t");
    sub->add_option("--T", config.T, "temperature in units of omega_c")->capture_default_str();
    sub->add_option("--s-range", s_range_text, "start:stop:count or log:start:stop:count");
    sub->add_option("--tau-range", tau_range_text, "start:stop:count or log:start:stop:count");
    sub->add_option("--b1", config.b1, "x component of the measurement axis")->capture_default_str();
    sub->add_option("--M", config.M, "measurements per record")->capture_default_str();
    sub->add_option("--trials", config.trials, "simulated records")->capture_default_str();
    sub->add_option("--seed", config.seed, "master seed")->capture_default_str();
    sub->add_option("--tau-max", config.tau_max, "search horizon for tau")->capture_default_str();
    sub->add_option("--format", format_text, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", config.output_path, "write the table to PATH instead of stdout");
    if (command == Command::Rate) {
      sub->add_option("--model", config.model, "auto, exact, low-T, low-T-quadratic or high-T")
          ->check(CLI::IsMember({"auto", "exact", "low-T", "low-T-quadratic", "high-T"}))
          ->capture_default_str();
    }
    if (command == Command::Simulate) {
      sub->add_option("--s-bounds", s_bounds_text, "estimator search interval lo:hi");
    }
    subcommands.emplace_back(sub, command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    std::ostringstream message;
    app.exit(e, message, message);
    err << message.str();
    return kExitInvalidConfig;
  }

  for (const auto& [sub, command] : subcommands) {
    if (sub->parsed()) config.command = command;
  }
  config.format = format_text == "json" ? OutputFormat::Json : OutputFormat::Csv;
  try {
    if (s_range_text) config.s_range = parse_range(*s_range_text);
    if (tau_range_text) config.tau_range = parse_range(*tau_range_text);
    if (s_bounds_text) {
      const auto colon = s_bounds_text->find(':');
      if (colon == std::string::npos) throw std::invalid_argument("--s-bounds expects lo:hi");
      config.s_lo = std::stod(s_bounds_text->substr(0, colon));
      config.s_hi = std::stod(s_bounds_text->substr(colon + 1));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  }
  return run(config, out, err);
}

}  // namespace dephaseprobe::cli
