#include "aim/cli/commands.hpp"

#include "aim/cli/output.hpp"
#include "aim/constcoeff/const_coeff.hpp"
#include "aim/numcore/parse.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>

namespace aim::cli {

using numcore::ParamRatFun;
using numcore::ParseMode;

namespace {

constexpr int kCsvDigits = 20;
constexpr int kJsonDigits = 30;

unsigned bits_or(const RunConfig& c, unsigned fallback) { return c.prec == 0 ? fallback : c.prec; }

ParamRatFun parse_required(const std::string& text, const char* name, ParseMode mode, unsigned bits) {
  if (text.empty()) throw ConfigError(std::string("--") + name + " is required");
  try {
    return numcore::parse_expr(text, mode, bits);
  } catch (const numcore::ParseError& e) {
    throw ConfigError(std::string("--") + name + ": " + e.what());
  }
}

BigScalar parse_constant(const std::string& text, const char* name, unsigned bits) {
  const ParamRatFun r = parse_required(text, name, ParseMode::plain, bits);
  if (!r.is_constant()) throw ConfigError(std::string("--") + name + " must be a constant");
  return r.constant_value();
}

void prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
  const auto probe = dir / ".aim-write-test";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory " + dir.string() + " is not writable");
  }
  std::filesystem::remove(probe, ec);
}

double to_double(const BigScalar& z, bool imag = false) { return imag ? z.im_double() : z.re_double(); }

void emit_plots(const engine::DiagnosticSeries& series, int nMax, const std::filesystem::path& dir) {
  PlotSeries re{"Re alpha", "#1f5fbf", {}}, im{"Im alpha", "#c03a2b", {}};
  PlotSeries metric{"log10 metric", "#1f5fbf", {}}, pert{"log10 |Delta|", "#2e8b57", {}};
  bool complex = false;
  for (const auto& e : series.entries) {
    if (e.n > nMax) break;
    const double n = e.n;
    re.points.emplace_back(n, to_double(e.alpha));
    im.points.emplace_back(n, to_double(e.alpha, true));
    if (im.points.back().second != 0.0) complex = true;
    const double m = std::abs(e.metric.to_complex_double());
    if (m > 0) metric.points.emplace_back(n, std::log10(m));
    const double d = std::abs(e.perturbation.to_complex_double());
    if (d > 0) pert.points.emplace_back(n, std::log10(d));
  }
  std::vector<PlotSeries> a{re};
  if (complex) a.push_back(im);
  write_file(dir / "alpha.svg", scatter_svg("alpha_n at x0", "n", "alpha_n", a));
  write_file(dir / "metric.svg", scatter_svg("perturbation and convergence metric at x0", "n", "log10", {pert, metric}));
}

/// Late metric maxima against earlier ones; the ladder counts as converging
/// when the last quarter sits well below the quarter before it.
bool metric_decreasing(const engine::DiagnosticSeries& s, int nMax) {
  auto window_max = [&](int lo, int hi) {
    double m = 0.0;
    for (const auto& e : s.entries) {
      if (e.n >= lo && e.n <= hi) m = std::max(m, std::abs(e.metric.to_complex_double()));
    }
    return m;
  };
  const int q = std::max(1, nMax / 4);
  const double late = window_max(nMax - q + 1, nMax);
  const double early = window_max(nMax - 2 * q + 1, nMax - q);
  return late == 0.0 || late < 0.5 * early;
}

void print_classification(const constcoeff::CharClass& c, std::ostream& out) {
  out << "classification: " << constcoeff::to_string(c.kind) << "\n";
  out << "r1: " << scalar_text(c.r1, 20) << "\n";
  out << "r2: " << scalar_text(c.r2, 20) << "\n";
  if (c.kind == constcoeff::CharKind::double_root) out << "double root: " << scalar_text(c.r, 20) << "\n";
  if (c.kind == constcoeff::CharKind::equal_moduli_distinct) {
    out << "common modulus: " << scalar_text(c.r, 20) << "\n";
    out << "theta: " << scalar_text(c.theta, 20) << "\n";
  }
}

std::string exp_text(const BigScalar& r) { return "exp((" + scalar_text(r, 20) + ")*x)"; }

}  // namespace

std::vector<std::string> config_file_args(const std::filesystem::path& file) {
  static const std::set<std::string> kFlags{"plot", "trace", "no-timing"};
  static const std::set<std::string> kValues{"lambda0", "s0", "n", "x0", "prec", "out", "A", "levels", "digits"};
  std::ifstream f(file);
  if (!f) throw ConfigError("cannot read config file " + file.string());
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(file.string() + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (kFlags.count(key)) {
      if (value == "true" || value == "1" || value == "yes") args.push_back("--" + key);
      else if (value != "false" && value != "0" && value != "no") {
        throw ConfigError(file.string() + ":" + std::to_string(lineno) + ": " + key + " takes true or false");
      }
    } else if (kValues.count(key)) {
      args.push_back("--" + key);
      args.push_back(value);
    } else {
      throw ConfigError(file.string() + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return args;
}

int cmd_diagnose(const RunConfig& c, std::ostream& out) {
  const unsigned bits = bits_or(c, 256);
  const ParamRatFun l0 = parse_required(c.lambda0Text, "lambda0", ParseMode::plain, bits);
  const ParamRatFun s0 = parse_required(c.s0Text, "s0", ParseMode::plain, bits);
  const BigScalar x0 = parse_constant(c.x0Text, "x0", bits);
  const int nMax = c.nMax == 0 ? 50 : c.nMax;
  if (nMax < 3) throw ConfigError("--n must be at least 3 for diagnose");
  prepare_out_dir(c.outDir);

  const auto problem = engine::AimProblem::make(l0, s0, engine::Mode::floating, bits);
  const auto series = engine::run_ladder(problem, nMax, x0);
  write_file(c.outDir / "diagnostics.csv", diagnostics_csv(series, nMax, kCsvDigits));
  if (c.emitPlot) emit_plots(series, nMax, c.outDir);
  if (series.shifts > 0) out << "x0 shifted " << series.shifts << " time(s) to " << scalar_text(series.x0, 20) << "\n";

  const auto& last = series.at(nMax);
  out << "alpha_" << nMax << ": " << scalar_text(last.alpha, 20) << "\n";
  out << "metric_" << nMax << ": " << scalar_text(last.metric, 6) << "\n";

  if (l0.is_constant() && s0.is_constant()) {
    const auto cls = constcoeff::classify(l0.constant_value(), s0.constant_value(), bits);
    print_classification(cls, out);
    switch (cls.kind) {
      case constcoeff::CharKind::equal_moduli_distinct:
        out << "verdict: EQUAL_MODULI_FAILURE\n";
        return exit_code::predicted_failure;
      case constcoeff::CharKind::double_root:
        out << "limits: alpha -> " << scalar_text(-cls.r, 20) << ", lambda0 + alpha -> " << scalar_text(cls.r, 20)
            << "\n";
        out << "note: solution pair exp(r x), x exp(r x) with r = " << scalar_text(cls.r, 20) << "\n";
        out << "verdict: CONVERGENT_SLOW\n";
        return exit_code::ok;
      case constcoeff::CharKind::distinct_moduli: {
        const BigScalar lim = -cls.r2;
        out << "limits: alpha -> " << scalar_text(lim, 20) << ", lambda0 + alpha -> " << scalar_text(cls.r1, 20)
            << "\n";
        out << "distance_" << nMax << ": |alpha - limit| = "
            << scalar_text(numcore::abs(last.alpha - lim, bits), 6) << ", |lambda0 + alpha - r1| = "
            << scalar_text(numcore::abs(l0.constant_value() + last.alpha - cls.r1, bits), 6) << "\n";
        out << "note: solution pair " << exp_text(cls.r2) << ", " << exp_text(cls.r1) << "\n";
        out << "verdict: CONVERGENT\n";
        return exit_code::ok;
      }
    }
  }
  if (series.terminated_at) {
    out << "verdict: TERMINATED at n = " << *series.terminated_at << "\n";
    return exit_code::ok;
  }
  if (metric_decreasing(series, nMax)) {
    out << "verdict: CONVERGING\n";
    return exit_code::ok;
  }
  out << "verdict: NOT_CONVERGING\n";
  return exit_code::predicted_failure;
}

int cmd_classify(const RunConfig& c, std::ostream& out) {
  const unsigned bits = bits_or(c, 256);
  const BigScalar l0 = parse_constant(c.lambda0Text, "lambda0", bits);
  const BigScalar s0 = parse_constant(c.s0Text, "s0", bits);
  if (l0.is_zero()) throw ConfigError("--lambda0 must not be zero");
  const auto cls = constcoeff::classify(l0, s0, bits);
  print_classification(cls, out);
  return cls.kind == constcoeff::CharKind::equal_moduli_distinct ? exit_code::predicted_failure : exit_code::ok;
}

int cmd_solve_eigen(const RunConfig& c, std::ostream& out) {
  const unsigned bits = bits_or(c, 512);
  if (c.levels < 1 || c.levels > 10) throw ConfigError("--levels must be between 1 and 10");
  if (c.digits < 1) throw ConfigError("--digits must be positive");
  eigen::EigenProblem p;
  nlohmann::json doc;
  if (!c.lambda0Text.empty() || !c.s0Text.empty()) {
    const ParamRatFun l0 = parse_required(c.lambda0Text, "lambda0", ParseMode::eigen, bits);
    const ParamRatFun s0 = parse_required(c.s0Text, "s0", ParseMode::eigen, bits);
    try {
      p = eigen::custom_problem(l0, s0);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    doc["lambda0"] = c.lambda0Text;
    doc["s0"] = c.s0Text;
  } else {
    if (c.AText.empty()) throw ConfigError("--A (or --lambda0 and --s0) is required");
    const BigScalar A = parse_constant(c.AText, "A", bits);
    if (!A.is_real() || A.re(64) < 0) throw ConfigError("--A must be real and non-negative");
    p = eigen::reduce_schrodinger(A);
    doc["A"] = scalar_text(A, kJsonDigits);
  }
  p.x0 = parse_constant(c.x0Text, "x0", bits);
  p.bits = bits;
  if (c.nMax > 0) p.n_max = c.nMax;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  prepare_out_dir(c.outDir);

  std::vector<eigen::EigenResult> results;
  try {
    results = eigen::solve_spectrum(p, c.levels - 1, c.digits);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  bool all = true;
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& r : results) {
    levels.push_back(eigen_result_json(r, c.digits, c.timing));
    all = all && r.stabilized;
    out << "E_" << r.k << " = " << numcore::decimal_string(r.E, c.digits + 2) << "  (n = " << r.iterations
        << ", stable digits " << r.stableDigits << (r.stabilized ? "" : ", NOT STABILIZED") << ")\n";
  }
  doc["levels"] = levels;
  doc["digits"] = c.digits;
  doc["x0"] = c.x0Text;
  doc["precisionBits"] = bits;
  doc["rounding"] = "truncated";
  write_file(c.outDir / "spectrum.json", json_text(doc));
  if (c.trace || !all) write_file(c.outDir / "escalation.csv", escalation_csv(results, c.digits));
  return all ? exit_code::ok : exit_code::non_stabilizing;
}

int cmd_chain(const RunConfig& c, std::ostream& out) {
  const unsigned bits = bits_or(c, 256);
  const ParamRatFun l0 = parse_required(c.lambda0Text, "lambda0", ParseMode::plain, bits);
  const ParamRatFun s0 = parse_required(c.s0Text, "s0", ParseMode::plain, bits);
  const int n = c.nMax == 0 ? 3 : c.nMax;
  if (n < 1) throw ConfigError("--n must be at least 1");
  prepare_out_dir(c.outDir);

  const auto problem = engine::AimProblem::make(l0, s0, engine::Mode::exact, bits);
  const auto links = chain::chain_links(problem, n);
  const auto points = chain::sample_points(10, 0.1, 2.0, bits);
  const Real tol = numcore::pow2(-static_cast<long>(bits / 2), bits) * 1000;

  bool all = true;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& link : links) {
    const BigScalar res = chain::residual(link, points);
    const bool pass = numcore::abs_real(res, bits) < tol;
    all = all && pass;
    std::optional<numcore::NumPoly> poly;
    if (link.perturb.is_zero() && link.alpha.is_exact()) {
      for (int m = 0; m <= link.level && !poly; ++m) {
        try {
          poly = chain::polynomial_solution(link.alpha, m);
        } catch (const std::runtime_error&) {
        }
      }
    }
    arr.push_back(chain_link_json(link, res, poly, kJsonDigits));
    out << "level " << link.level << ": Delta = " << numcore::to_string(link.perturb)
        << (link.perturb.is_zero() ? " (identically zero)" : "") << ", residual " << scalar_text(res, 6)
        << (pass ? "" : " ABOVE TOLERANCE") << "\n";
    if (poly) out << "  polynomial solution: " << numcore::to_string(numcore::lift(*poly)) << "\n";
  }
  nlohmann::json doc;
  doc["lambda0"] = c.lambda0Text;
  doc["s0"] = c.s0Text;
  doc["precisionBits"] = bits;
  doc["tolerance"] = numcore::decimal_string(tol, 6);
  doc["links"] = arr;
  write_file(c.outDir / "chain.json", json_text(doc));
  return all ? exit_code::ok : exit_code::failure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

  // Config-file arguments go in front of the command-line ones; the last
  // occurrence of an option wins.
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (path.empty()) continue;
      auto extra = config_file_args(path);
      if (!args.empty()) args.insert(args.begin() + 1, extra.begin(), extra.end());
      break;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  }

  CLI::App app{"Asymptotic iteration method: ladder diagnostics, exactly solvable chains and spectra", "aim"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string configPath;
  bool noTiming = false;

  auto common = [&](CLI::App* sc) {
    sc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sc->add_option("--prec", cfg.prec, "working precision in bits")->check(CLI::Range(64u, 65536u));
    sc->add_option("--x0", cfg.x0Text, "sampling point");
    sc->add_option("--out", cfg.outDir, "output directory");
    sc->add_flag("--plot", cfg.emitPlot, "write SVG plots");
    sc->add_option("--config", configPath, "key=value file; flags take precedence");
    sc->add_option("--lambda0", cfg.lambda0Text, "lambda0(x)");
    sc->add_option("--s0", cfg.s0Text, "s0(x)");
    sc->add_option("--n", cfg.nMax, "iteration depth");
    sc->add_option("--A", cfg.AText, "quartic coupling");
    sc->add_option("--levels", cfg.levels, "number of levels");
    sc->add_option("--digits", cfg.digits, "target digits");
    sc->add_flag("--trace", cfg.trace, "write escalation.csv");
    sc->add_flag("--no-timing", noTiming, "zero the seconds fields");
  };
  auto* diag = app.add_subcommand("diagnose", "alpha_n and Delta_n along the ladder at x0");
  auto* eig = app.add_subcommand("solve-eigen", "energy levels of -psi'' + (x^2 + A x^4) psi = E psi");
  auto* chn = app.add_subcommand("chain", "exactly solvable perturbed equations for levels 1..n");
  auto* cls = app.add_subcommand("classify", "characteristic roots of a constant-coefficient problem");
  for (auto* sc : {diag, eig, chn, cls}) common(sc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? exit_code::ok : exit_code::input_error;
  }
  cfg.timing = !noTiming;
  if (diag->parsed()) cfg.command = Command::diagnose;
  if (eig->parsed()) cfg.command = Command::solve_eigen;
  if (chn->parsed()) cfg.command = Command::chain;
  if (cls->parsed()) cfg.command = Command::classify;

  try {
    switch (cfg.command) {
      case Command::diagnose: return cmd_diagnose(cfg, out);
      case Command::solve_eigen: return cmd_solve_eigen(cfg, out);
      case Command::chain: return cmd_chain(cfg, out);
      case Command::classify: return cmd_classify(cfg, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  } catch (const engine::DegenerateLadder& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::degenerate;
  } catch (const eigen::NonStabilizing& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::non_stabilizing;
  } catch (const eigen::BracketNotFound& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::non_stabilizing;
  } catch (const eigen::MissedLevel& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::non_stabilizing;
  } catch (const engine::PoleCollision& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::failure;
  }
  return exit_code::failure;
}

}  // namespace aim::cli
