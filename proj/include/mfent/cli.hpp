#pragma once

// Command-line front end. Kept in a header so tests can drive parse_args() and
// run() without spawning processes.
//
// Exit codes: 0 success, 2 validation error, 3 numerical/oracle error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mfent/crosscheck.hpp"
#include "mfent/error.hpp"
#include "mfent/io.hpp"
#include "mfent/scans.hpp"

namespace mfent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr double kOracleCheckTol = 1e-8;
inline constexpr double kSpectrumTol = 1e-9;

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  PointParams point;
  std::optional<Axis> axis1;
  std::optional<Axis> axis2;
  std::string out;  ///< empty = standard output
  Format format = Format::Csv;
  unsigned threads = 0;
  bool quiet = false;
  std::string help;  ///< non-empty when --help was requested

  // boundary
  AxisName control = AxisName::B;
  Range control_grid{0.0, 3.0, 61};
  double t_max = 3.0;

  // max-rescaled
  Range b_grid{0.0, 3.0, 200};
  Range t_grid{0.005, 2.0, 200};

  // max-rescaled / limit-curve
  std::vector<int> n_list;

  // limit-curve
  Range delta_grid{-4.0, 0.0, 81};

  // oracle-check
  int n_max = 10;
  std::uint64_t seed = 42;
  std::size_t points = 200;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"point", "scan", "boundary", "max-rescaled", "limit-curve", "oracle-check"};
  return c;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double parse_real(const std::string& s, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    throw UsageError(field + ": '" + s + "' is not a number");
  }
  if (used != s.size()) throw UsageError(field + ": '" + s + "' is not a number");
  if (!std::isfinite(v)) throw UsageError(field + ": value must be finite");
  return v;
}

inline long long parse_integer(const std::string& s, const std::string& field) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::logic_error&) {
    throw UsageError(field + ": '" + s + "' is not an integer");
  }
  if (used != s.size()) throw UsageError(field + ": '" + s + "' is not an integer");
  return v;
}

inline Range parse_range(const std::string& s, const std::string& field) {
  const auto f = split(s, ':');
  if (f.size() != 3) throw UsageError(field + ": expected lo:hi:steps, got '" + s + "'");
  Range r{parse_real(f[0], field), parse_real(f[1], field), static_cast<int>(parse_integer(f[2], field))};
  if (r.lo > r.hi) throw UsageError(field + ": lo must not exceed hi");
  if (r.steps < 1) throw UsageError(field + ": steps must be >= 1");
  return r;
}

inline Axis parse_axis(const std::string& s, const std::string& field) {
  const auto pos = s.find(':');
  if (pos == std::string::npos) throw UsageError(field + ": expected NAME:lo:hi:steps, got '" + s + "'");
  Axis a;
  try {
    a.name = parse_axis_name(s.substr(0, pos));
  } catch (const InvalidCluster& e) {
    throw UsageError(field + ": " + e.what());
  }
  a.range = parse_range(s.substr(pos + 1), field);
  return a;
}

// Comma-separated items; each is an integer, a:b (inclusive) or a:b:stride.
inline std::vector<int> parse_int_list(const std::string& s, const std::string& field) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    const auto f = split(item, ':');
    if (f.size() == 1) {
      out.push_back(static_cast<int>(parse_integer(f[0], field)));
    } else if (f.size() == 2 || f.size() == 3) {
      const long long a = parse_integer(f[0], field), b = parse_integer(f[1], field);
      const long long stride = f.size() == 3 ? parse_integer(f[2], field) : 1;
      if (stride < 1 || a > b) throw UsageError(field + ": bad range '" + item + "'");
      for (long long v = a; v <= b; v += stride) out.push_back(static_cast<int>(v));
    } else {
      throw UsageError(field + ": bad item '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(field + ": empty list");
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines become "--key value" arguments; '#' starts a comment.
inline std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config: line " + std::to_string(lineno) + " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config") throw UsageError("config: nested config files are not supported");
    if (key == "quiet") {
      if (value == "true" || value == "1") args.push_back("--quiet");
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

}  // namespace detail

/// Parses `args` (without the program name). Flags given on the command line
/// override values from --config.
inline RunConfig parse_args(std::vector<std::string> args) {
  if (args.empty()) throw UsageError("missing command (one of point, scan, boundary, max-rescaled, limit-curve, oracle-check)");
  const std::string command = args.front();
  if (command == "--help" || command == "-h" || command == "help") {
    RunConfig cfg;
    cfg.help = "usage: mfent <command> [options]\ncommands:";
    for (const auto& c : commands()) cfg.help += " " + c;
    cfg.help += "\nrun 'mfent <command> --help' for the options of a command\n";
    return cfg;
  }
  if (std::find(commands().begin(), commands().end(), command) == commands().end())
    throw UsageError("command: unknown command '" + command + "'");

  // Splice config-file arguments in front of the command-line flags.
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" || args[i].rfind("--config=", 0) == 0) {
      std::string path;
      std::size_t erase_count = 1;
      if (args[i] == "--config") {
        if (i + 1 >= args.size()) throw UsageError("config: missing path");
        path = args[i + 1];
        erase_count = 2;
      } else {
        path = args[i].substr(9);
      }
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i + erase_count));
      auto file_args = detail::config_file_args(path);
      args.insert(args.begin() + 1, file_args.begin(), file_args.end());
      break;
    }
  }

  RunConfig cfg;
  cfg.command = command;

  CLI::App app{"mfent " + command};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.allow_extras(false);

  std::string n_s, j_s, delta_s, b_s, t_s, axis1_s, axis2_s, fmt_s = "csv", control_s, control_grid_s, t_max_s,
      b_grid_s, t_grid_s, n_list_s, delta_grid_s;
  long long threads = 0, n_max = cfg.n_max, points = static_cast<long long>(cfg.points);
  std::uint64_t seed = cfg.seed;

  const bool needs_cluster = command == "point" || command == "scan" || command == "boundary";
  if (needs_cluster || command == "max-rescaled") app.add_option("--n", n_s, "cluster size N");
  if (needs_cluster) {
    app.add_option("--j", j_s, "coupling J (+1 anti-ferromagnetic, -1 ferromagnetic)");
    app.add_option("--delta", delta_s, "anisotropy Delta");
  }
  if (command == "point" || command == "scan") app.add_option("--b", b_s, "field B");
  if (command == "boundary") app.add_option("--b", b_s, "field B (when the control is delta)");
  if (command == "point" || command == "scan" || command == "limit-curve") app.add_option("--t", t_s, "temperature T (0 = ground manifold)");
  if (command == "scan") {
    app.add_option("--axis1", axis1_s, "NAME:lo:hi:steps, NAME in {B, delta, T, N}");
    app.add_option("--axis2", axis2_s, "NAME:lo:hi:steps");
  }
  if (command == "boundary") {
    app.add_option("--control", control_s, "B or delta");
    app.add_option("--control-grid", control_grid_s, "lo:hi:steps");
    app.add_option("--t-max", t_max_s, "upper end of the temperature search");
  }
  if (command == "max-rescaled") {
    app.add_option("--b-grid", b_grid_s, "lo:hi:steps");
    app.add_option("--t-grid", t_grid_s, "lo:hi:steps");
  }
  if (command == "max-rescaled" || command == "limit-curve") app.add_option("--n-list", n_list_s, "e.g. 2:40:2,41");
  if (command == "limit-curve") app.add_option("--delta-grid", delta_grid_s, "lo:hi:steps");
  if (command == "oracle-check") {
    app.add_option("--n-max", n_max, "largest cluster size (<= 12)");
    app.add_option("--seed", seed, "pseudo-random seed");
    app.add_option("--points", points, "number of random points");
  }
  app.add_option("--format", fmt_s, "csv or json");
  app.add_option("--out", cfg.out, "output path (default: standard output)");
  app.add_option("--threads", threads, "worker threads, 0 = auto");
  app.add_flag("--quiet", cfg.quiet, "suppress the summary");
  std::string config_path;  // consumed above; listed for --help
  app.add_option("--config", config_path, "key=value file; command-line flags override it");

  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    cfg.help = app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (!n_s.empty()) cfg.point.n = static_cast<int>(detail::parse_integer(n_s, "n"));
  if (!j_s.empty()) cfg.point.j = detail::parse_real(j_s, "j");
  if (!delta_s.empty()) cfg.point.delta = detail::parse_real(delta_s, "delta");
  if (!b_s.empty()) cfg.point.b = detail::parse_real(b_s, "b");
  if (!t_s.empty()) cfg.point.t = detail::parse_real(t_s, "t");
  if (cfg.point.t < 0.0) throw UsageError("t: temperature must be >= 0");
  if (cfg.point.n < 2 || cfg.point.n > kMaxClusterSize) throw UsageError("n: cluster size must lie in [2, 64]");
  if (cfg.point.j == 0.0) throw UsageError("j: coupling must be nonzero");

  if (fmt_s == "csv") cfg.format = Format::Csv;
  else if (fmt_s == "json") cfg.format = Format::Json;
  else throw UsageError("format: expected csv or json, got '" + fmt_s + "'");
  if (threads < 0) throw UsageError("threads: must be >= 0");
  cfg.threads = static_cast<unsigned>(threads);

  if (command == "scan") {
    if (axis1_s.empty()) throw UsageError("axis1: scan needs --axis1");
    cfg.axis1 = detail::parse_axis(axis1_s, "axis1");
    if (!axis2_s.empty()) {
      cfg.axis2 = detail::parse_axis(axis2_s, "axis2");
      if (cfg.axis2->name == cfg.axis1->name) throw UsageError("axis2: conflicts with axis1 (same axis name)");
    }
    for (const auto* ax : {&cfg.axis1, &cfg.axis2}) {
      if (!*ax) continue;
      const char* field = ax == &cfg.axis1 ? "axis1" : "axis2";
      if ((*ax)->name == AxisName::T && (*ax)->range.lo < 0.0) throw UsageError(std::string(field) + ": temperature must be >= 0");
      if ((*ax)->name == AxisName::N && ((*ax)->range.lo < 2 || (*ax)->range.hi > kMaxClusterSize))
        throw UsageError(std::string(field) + ": N must lie in [2, 64]");
    }
  }
  if (command == "boundary") {
    if (!control_s.empty()) {
      try {
        cfg.control = parse_axis_name(control_s);
      } catch (const InvalidCluster&) {
        throw UsageError("control: expected B or delta, got '" + control_s + "'");
      }
      if (cfg.control != AxisName::B && cfg.control != AxisName::Delta)
        throw UsageError("control: expected B or delta, got '" + control_s + "'");
    }
    if (!control_grid_s.empty()) cfg.control_grid = detail::parse_range(control_grid_s, "control-grid");
    if (!t_max_s.empty()) cfg.t_max = detail::parse_real(t_max_s, "t-max");
    if (cfg.t_max <= 0.0) throw UsageError("t-max: must be > 0");
  }
  if (command == "max-rescaled") {
    if (!b_grid_s.empty()) cfg.b_grid = detail::parse_range(b_grid_s, "b-grid");
    if (!t_grid_s.empty()) cfg.t_grid = detail::parse_range(t_grid_s, "t-grid");
    if (cfg.t_grid.lo <= 0.0) throw UsageError("t-grid: temperatures must be > 0");
  }
  if (command == "max-rescaled" || command == "limit-curve") {
    if (!n_list_s.empty()) cfg.n_list = detail::parse_int_list(n_list_s, "n-list");
    else if (command == "max-rescaled") cfg.n_list = {cfg.point.n};
    else {
      for (int n = 2; n <= 40; n += 2) cfg.n_list.push_back(n);
      for (int n = 3; n <= 41; n += 2) cfg.n_list.push_back(n);
    }
    for (int n : cfg.n_list)
      if (n < 2 || n > kMaxClusterSize) throw UsageError("n-list: cluster sizes must lie in [2, 64]");
  }
  if (command == "limit-curve") {
    if (!delta_grid_s.empty()) cfg.delta_grid = detail::parse_range(delta_grid_s, "delta-grid");
    if (t_s.empty()) cfg.point.t = kLowTemperature;
  }
  if (command == "oracle-check") {
    if (n_max < 2) throw UsageError("n-max: must be >= 2");
    if (n_max > oracle::kOracleMaxN) throw UsageError("n-max: oracle supports n <= 12");
    if (points < 1) throw UsageError("points: must be >= 1");
    cfg.n_max = static_cast<int>(n_max);
    cfg.seed = seed;
    cfg.points = static_cast<std::size_t>(points);
  }
  return cfg;
}

inline nlohmann::json range_json(const Range& r) { return {{"lo", r.lo}, {"hi", r.hi}, {"steps", r.steps}}; }

inline nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j{{"command", c.command}, {"format", c.format == Format::Csv ? "csv" : "json"}};
  const auto& p = c.point;
  if (c.command == "point" || c.command == "scan" || c.command == "boundary")
    j.update({{"n", p.n}, {"j", p.j}, {"delta", p.delta}, {"b", p.b}});
  if (c.command == "point" || c.command == "scan" || c.command == "limit-curve") j["t"] = p.t;
  auto axis_json = [](const Axis& a) {
    auto o = range_json(a.range);
    o["name"] = to_string(a.name);
    return o;
  };
  if (c.axis1) j["axis1"] = axis_json(*c.axis1);
  if (c.axis2) j["axis2"] = axis_json(*c.axis2);
  if (c.command == "boundary") {
    j["control"] = to_string(c.control);
    j["control_grid"] = range_json(c.control_grid);
    j["t_max"] = c.t_max;
  }
  if (c.command == "max-rescaled") {
    j["b_grid"] = range_json(c.b_grid);
    j["t_grid"] = range_json(c.t_grid);
  }
  if (!c.n_list.empty()) j["n_list"] = c.n_list;
  if (c.command == "limit-curve") j["delta_grid"] = range_json(c.delta_grid);
  if (c.command == "oracle-check") j.update({{"n_max", c.n_max}, {"seed", c.seed}, {"points", c.points}});
  return j;
}

namespace detail {

// Generic numeric table, written as CSV or as {"config", "records": [{col: value}]}.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline void write_table(std::ostream& os, const RunConfig& cfg, const Table& t) {
  if (cfg.format == Format::Csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << io::format_real(row[i]);
      os << '\n';
    }
    return;
  }
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = io::real_or_null(row[i]);
    recs.push_back(std::move(o));
  }
  os << nlohmann::json{{"config", config_json(cfg)}, {"records", std::move(recs)}}.dump(1) << '\n';
}

inline void write_records(std::ostream& os, const RunConfig& cfg, const std::vector<ScanRecord>& recs) {
  if (cfg.format == Format::Csv) io::write_csv(os, recs);
  else io::write_json(os, config_json(cfg), recs);
}

}  // namespace detail

/// Executes a parsed configuration. Data goes to `data`; the human-readable
/// summary goes to `summary` unless cfg.quiet. Returns the exit status.
inline int execute(const RunConfig& cfg, std::ostream& data, std::ostream& summary) {
  auto say = [&](const std::string& s) {
    if (!cfg.quiet) summary << s << '\n';
  };
  auto fmt = [](double x) { return io::format_real(x); };

  if (cfg.command == "point") {
    const ScanRecord r = evaluate_record(cfg.point);
    if (!r.valid) throw InvalidCluster(r.error);
    detail::write_records(data, cfg, {r});
    say("C=" + fmt(r.c) + " C_r=" + fmt(r.c_r) + " Eof=" + fmt(r.eof));
    return kExitOk;
  }

  if (cfg.command == "scan") {
    GridSpec grid{*cfg.axis1, cfg.axis2, cfg.point};
    const auto recs = scan(grid, cfg.threads);
    detail::write_records(data, cfg, recs);
    std::size_t entangled = 0, invalid = 0;
    double c_max = 0.0;
    for (const auto& r : recs) {
      if (!r.valid) {
        ++invalid;
        continue;
      }
      if (r.c > 0) ++entangled;
      c_max = std::max(c_max, r.c_r);
    }
    say(std::to_string(recs.size()) + " records, " + std::to_string(entangled) + " entangled, " +
        std::to_string(invalid) + " invalid, max C_r=" + fmt(c_max));
    return kExitOk;
  }

  if (cfg.command == "boundary") {
    const auto bd = boundary(cfg.control, cfg.control_grid.values(), cfg.point.spec(), cfg.t_max, cfg.threads);
    detail::Table t{{"control", "t_threshold"}, {}};
    std::size_t entangled = 0;
    double t_hi = 0.0;
    for (const auto& p : bd.points) {
      t.rows.push_back({p.control, p.t_threshold ? *p.t_threshold : std::nan("")});
      if (p.t_threshold) {
        ++entangled;
        t_hi = std::max(t_hi, *p.t_threshold);
      }
    }
    detail::write_table(data, cfg, t);
    say(std::to_string(entangled) + " of " + std::to_string(bd.points.size()) + " " + to_string(bd.control_name) +
        " values entangled, highest threshold T=" + fmt(t_hi));
    return kExitOk;
  }

  if (cfg.command == "max-rescaled") {
    detail::Table t{{"n", "c_r_max", "b", "t"}, {}};
    for (int n : cfg.n_list) {
      const auto m = max_rescaled(n, cfg.b_grid, cfg.t_grid, cfg.threads);
      t.rows.push_back({static_cast<double>(n), m.value, m.b, m.t});
      say("N=" + std::to_string(n) + " max C_r=" + fmt(m.value) + " at B=" + fmt(m.b) + " T=" + fmt(m.t));
    }
    detail::write_table(data, cfg, t);
    return kExitOk;
  }

  if (cfg.command == "limit-curve") {
    const auto pts = limit_curve(cfg.delta_grid.values(), cfg.point.t, cfg.n_list, cfg.threads);
    detail::Table t{{"delta", "n", "c_r"}, {}};
    for (const auto& p : pts) t.rows.push_back({p.delta, static_cast<double>(p.n), p.c_r});
    detail::write_table(data, cfg, t);
    say(std::to_string(pts.size()) + " points for " + std::to_string(cfg.n_list.size()) + " cluster sizes");
    return kExitOk;
  }

  if (cfg.command == "oracle-check") {
    const auto s = cross_check(random_points(cfg.n_max, cfg.points, cfg.seed), cfg.threads);
    detail::Table t{{"n", "j", "delta", "b", "t", "c_engine", "c_oracle", "abs_diff", "spectrum_dev"}, {}};
    for (const auto& p : s.points)
      t.rows.push_back({static_cast<double>(p.params.n), p.params.j, p.params.delta, p.params.b, p.params.t,
                        p.c_engine, p.c_oracle, p.c_diff(), p.spectrum_dev});
    detail::write_table(data, cfg, t);
    const bool ok = s.max_c_diff <= kOracleCheckTol && s.max_spectrum_dev <= kSpectrumTol;
    say(std::to_string(s.points.size()) + " points, max |dC|=" + fmt(s.max_c_diff) +
        ", max spectrum deviation=" + fmt(s.max_spectrum_dev) + (ok ? ", OK" : ", FAILED"));
    return ok ? kExitOk : kExitNumerical;
  }

  throw UsageError("command: unknown command '" + cfg.command + "'");
}

/// Full invocation: parse, open output, execute, map errors to exit codes.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  if (!cfg.help.empty()) {
    out << cfg.help;
    return kExitOk;
  }
  try {
    if (cfg.out.empty()) return execute(cfg, out, err);
    std::ofstream file(cfg.out);
    if (!file) {
      err << "error: out: cannot open '" << cfg.out << "'\n";
      return kExitValidation;
    }
    const int rc = execute(cfg, file, out);
    file.flush();
    if (!file) {
      err << "error: out: write failed for '" << cfg.out << "'\n";
      return kExitNumerical;
    }
    return rc;
  } catch (const InvalidCluster& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace mfent::cli
