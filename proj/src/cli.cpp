#include "puw/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "puw/asymptotics.hpp"
#include "puw/errors.hpp"
#include "puw/format.hpp"
#include "puw/laurent.hpp"
#include "puw/report.hpp"
#include "puw/variance.hpp"
#include "puw/zonal.hpp"

namespace puw {

namespace {

using json = nlohmann::ordered_json;

enum class Format { json, csv };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string format;
  std::string output;
  std::string output_dir;
  double rel_tol = SeriesTruncation{}.rel_tol;
  std::int64_t min_terms = SeriesTruncation{}.min_terms;
  std::int64_t max_terms = SeriesTruncation{}.max_terms;

  SeriesTruncation truncation() const {
    SeriesTruncation t;
    t.rel_tol = rel_tol;
    t.min_terms = min_terms;
    t.max_terms = max_terms;
    try {
      t.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    return t;
  }

  Format resolved_format(Format fallback) const {
    if (format.empty()) {
      return fallback;
    }
    return format == "csv" ? Format::csv : Format::json;
  }
};

struct Config {
  CommonOptions common;
  int n = 0;
  int m = 1;
  double rho = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  int steps = 0;
  std::string expansion = "engine";
  int n_min = 2;
  int n_max = 10;
  int m_max = 8;
  std::optional<int> n_single;
  std::string target;
  int terms = 4;
  int extra_terms = 0;
};

void require_n(int n) {
  if (n < 2) {
    throw UsageError("n must be ≥ 2");
  }
}

void require_m(int m, int lowest = 1) {
  if (m < lowest) {
    throw UsageError("m must be ≥ " + std::to_string(lowest));
  }
}

void require_rho(double rho, const char* name) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw UsageError(std::string(name) + " must be a positive finite number");
  }
}

json truncation_json(const SeriesTruncation& t) {
  return {{"rel_tol", t.rel_tol}, {"min_terms", t.min_terms}, {"max_terms", t.max_terms}};
}

json meta_json(const std::string& command, json config) {
  return {{"tool", "puw"}, {"version", kVersion}, {"command", command}, {"config", std::move(config)}};
}

/// "# puw <version> <command> key=value ..." from a flat config object.
std::string meta_csv_line(const std::string& command, const json& config) {
  std::string line = std::string("# puw ") + kVersion + " " + command;
  for (const auto& [key, value] : config.items()) {
    line += " " + key + "=" + (value.is_string() ? value.get<std::string>() : value.dump());
  }
  return line + "\n";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    out += csv_field(fields[i]);
  }
  return out + "\n";
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

/// Writes the payload to the resolved destination (stdout when no file was
/// requested).
void emit(const std::string& payload, const CommonOptions& opts, const std::string& command,
          const std::string& extension, std::ostream& out) {
  namespace fs = std::filesystem;
  std::optional<fs::path> target;
  if (!opts.output.empty()) {
    fs::path p(opts.output);
    if (p.is_relative()) {
      if (!opts.output_dir.empty()) {
        p = fs::path(opts.output_dir) / p;
      } else if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        p = fs::path(env) / p;
      }
    }
    target = p;
  } else if (!opts.output_dir.empty()) {
    target = fs::path(opts.output_dir) / (command + "." + extension);
  }
  if (!target) {
    out << payload;
    out.flush();
    return;
  }
  if (target->has_parent_path()) {
    fs::create_directories(target->parent_path());
  }
  std::ofstream file(*target, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open output file " + target->string());
  }
  file << payload;
  if (!file) {
    throw std::runtime_error("failed writing output file " + target->string());
  }
}

int cmd_compute(const Config& cfg, std::ostream& out) {
  require_n(cfg.n);
  require_m(cfg.m);
  require_rho(cfg.rho, "rho");
  const SeriesTruncation trunc = cfg.common.truncation();
  const PoissonWaveletSpec spec = PoissonWaveletSpec::make(cfg.n, cfg.m, cfg.rho);
  const UncertaintyResult direct = uncertainty_product(poisson_wavelet_coefficients(spec), trunc);
  const UncertaintyResult via_s = poisson_uncertainty_via_s(spec, trunc);
  auto rel = [](double a, double b) {
    return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  };
  const double agreement = std::max({rel(direct.var_space, via_s.var_space),
                                     rel(direct.var_momentum, via_s.var_momentum),
                                     rel(direct.product, via_s.product)});
  const LimitValue lim = limit_uncertainty(cfg.n, cfg.m);

  json config{{"n", cfg.n}, {"m", cfg.m}, {"rho", cfg.rho}};
  config.update(truncation_json(trunc));
  const Format format = cfg.common.resolved_format(Format::json);
  std::string payload;
  if (format == Format::json) {
    json doc;
    doc["meta"] = meta_json("compute", config);
    doc["result"] = {{"n", cfg.n},
                     {"m", cfg.m},
                     {"rho", cfg.rho},
                     {"var_space", direct.var_space},
                     {"var_momentum", direct.var_momentum},
                     {"product", direct.product},
                     {"limit_value", lim.value},
                     {"limit_radicand", fraction_string(lim.radicand)},
                     {"bound", uncertainty_lower_bound(cfg.n)},
                     {"path_agreement", agreement},
                     {"diagnostics",
                      {{"path", std::string(to_string(direct.diagnostics.path))},
                       {"terms_used", direct.diagnostics.terms_used},
                       {"tail_estimate", direct.diagnostics.tail_estimate},
                       {"space_variance_clamped", direct.diagnostics.space_variance_clamped}}}};
    payload = json_text(doc);
  } else {
    payload = meta_csv_line("compute", config);
    payload += csv_row({"n", "m", "rho", "var_space", "var_momentum", "product", "limit_value", "limit_radicand",
                        "bound", "path_agreement"});
    payload += csv_row({std::to_string(cfg.n), std::to_string(cfg.m), format_real(cfg.rho),
                        format_real(direct.var_space), format_real(direct.var_momentum), format_real(direct.product),
                        format_real(lim.value), fraction_string(lim.radicand),
                        format_real(uncertainty_lower_bound(cfg.n)), format_real(agreement)});
  }
  emit(payload, cfg.common, "compute", format == Format::json ? "json" : "csv", out);
  return exit_ok;
}

int cmd_sweep(const Config& cfg, std::ostream& out) {
  require_n(cfg.n);
  require_m(cfg.m);
  require_rho(cfg.rho_min, "rho-min");
  require_rho(cfg.rho_max, "rho-max");
  if (!(cfg.rho_min < cfg.rho_max)) {
    throw UsageError("rho-min must be smaller than rho-max");
  }
  if (cfg.steps < 2) {
    throw UsageError("steps must be ≥ 2");
  }
  const SeriesTruncation trunc = cfg.common.truncation();
  const ExpansionSource source = cfg.expansion == "theorem" ? ExpansionSource::theorem : ExpansionSource::engine;
  const TwoTermExpansion asym = two_term_expansion(cfg.n, cfg.m, Quantity::product, source);

  struct Row {
    double rho;
    std::optional<UncertaintyResult> result;
    std::string status;
  };
  std::vector<Row> rows;
  const double ratio = std::pow(cfg.rho_max / cfg.rho_min, 1.0 / (cfg.steps - 1));
  for (int k = 0; k < cfg.steps; ++k) {
    const double rho = k == cfg.steps - 1 ? cfg.rho_max : cfg.rho_min * std::pow(ratio, k);
    Row row{rho, std::nullopt, "ok"};
    try {
      row.result = uncertainty_product(poisson_wavelet_coefficients(PoissonWaveletSpec::make(cfg.n, cfg.m, rho)),
                                       trunc);
    } catch (const DegenerateInputError&) {
      row.status = "error:degenerate";
    } catch (const TruncationError&) {
      row.status = "error:truncation";
    } catch (const BoundViolationError&) {
      row.status = "error:bound_violation";
    }
    rows.push_back(std::move(row));
  }

  json config{{"n", cfg.n},         {"m", cfg.m},         {"rho_min", cfg.rho_min},
              {"rho_max", cfg.rho_max}, {"steps", cfg.steps}, {"expansion", cfg.expansion}};
  config.update(truncation_json(trunc));
  const Format format = cfg.common.resolved_format(Format::csv);
  std::string payload;
  if (format == Format::csv) {
    payload = meta_csv_line("sweep", config);
    payload += csv_row({"rho", "var_space", "var_momentum", "product", "asymptotic_product", "residual", "status"});
    for (const Row& row : rows) {
      const double a = asym.evaluate(row.rho);
      if (row.result) {
        payload += csv_row({format_real(row.rho), format_real(row.result->var_space),
                            format_real(row.result->var_momentum), format_real(row.result->product), format_real(a),
                            format_real(row.result->product - a), row.status});
      } else {
        payload += csv_row({format_real(row.rho), "", "", "", format_real(a), "", row.status});
      }
    }
  } else {
    json doc;
    doc["meta"] = meta_json("sweep", config);
    doc["expansion"] = {{"source", cfg.expansion},
                        {"radicand", fraction_string(asym.first)},
                        {"slope", fraction_string(asym.second)}};
    json arr = json::array();
    for (const Row& row : rows) {
      const double a = asym.evaluate(row.rho);
      json r{{"rho", row.rho}};
      if (row.result) {
        r["var_space"] = row.result->var_space;
        r["var_momentum"] = row.result->var_momentum;
        r["product"] = row.result->product;
        r["asymptotic_product"] = a;
        r["residual"] = row.result->product - a;
      } else {
        r["asymptotic_product"] = a;
      }
      r["status"] = row.status;
      arr.push_back(std::move(r));
    }
    doc["rows"] = std::move(arr);
    payload = json_text(doc);
  }
  emit(payload, cfg.common, "sweep", format == Format::json ? "json" : "csv", out);
  return exit_ok;
}

int cmd_limits(const Config& cfg, std::ostream& out) {
  const int n_min = cfg.n_single.value_or(cfg.n_min);
  const int n_max = cfg.n_single.value_or(cfg.n_max);
  require_n(n_min);
  if (n_max < n_min) {
    throw UsageError("n-max must be ≥ n-min");
  }
  require_m(cfg.m_max);
  json config{{"n_min", n_min}, {"n_max", n_max}, {"m_max", cfg.m_max}};
  const Format format = cfg.common.resolved_format(Format::json);

  json rows = json::array();
  json minimizers = json::array();
  std::string csv = meta_csv_line("limits", config);
  csv += csv_row({"n", "m", "radicand", "value", "is_minimizer"});
  for (int n = n_min; n <= n_max; ++n) {
    const OrderMinimum mm = minimize_limit_over_order(n);
    for (int m = 1; m <= cfg.m_max; ++m) {
      const LimitValue lim = limit_uncertainty(n, m);
      rows.push_back({{"n", n}, {"m", m}, {"radicand", fraction_string(lim.radicand)}, {"value", lim.value}});
      csv += csv_row({std::to_string(n), std::to_string(m), fraction_string(lim.radicand), format_real(lim.value),
                      m == mm.m_star ? "true" : "false"});
    }
    minimizers.push_back({{"n", n},
                          {"m_star", mm.m_star},
                          {"radicand", fraction_string(mm.radicand)},
                          {"min_value", mm.min_value},
                          {"bound", uncertainty_lower_bound(n)}});
  }
  std::string payload;
  if (format == Format::json) {
    json doc;
    doc["meta"] = meta_json("limits", config);
    doc["rows"] = std::move(rows);
    doc["minimizers"] = std::move(minimizers);
    payload = json_text(doc);
  } else {
    payload = csv;
  }
  emit(payload, cfg.common, "limits", format == Format::json ? "json" : "csv", out);
  return exit_ok;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  VerifyReport report = build_verify_report();
  json doc;
  doc["meta"] = meta_json("verify", json::object());
  for (auto& [key, value] : report.json.items()) {
    doc[key] = std::move(value);
  }
  emit(json_text(doc), cfg.common, "verify", "json", out);
  for (const auto& w : report.warnings) {
    err << "warning: " << w << "\n";
  }
  for (const auto& f : report.failures) {
    err << "FAILED: " << f << "\n";
  }
  return report.passed ? exit_ok : exit_failure;
}

json series_json(const TruncatedLaurentSeries& s) {
  json coeffs = json::array();
  for (int e = s.lo(); e < s.order(); ++e) {
    coeffs.push_back({{"exponent", e}, {"value", fraction_string(s.coefficient(e))}});
  }
  return {{"lo", s.lo()}, {"order", s.order()}, {"coefficients", std::move(coeffs)}};
}

void series_csv(const TruncatedLaurentSeries& s, const std::string& part, std::string& csv) {
  for (int e = s.lo(); e < s.order(); ++e) {
    csv += csv_row({part, std::to_string(e), fraction_string(s.coefficient(e))});
  }
}

int cmd_expand(const Config& cfg, std::ostream& out) {
  static const std::vector<std::string> targets = {"F", "s0", "sm", "A", "B", "C", "var_space", "var_momentum",
                                                   "product"};
  if (std::find(targets.begin(), targets.end(), cfg.target) == targets.end()) {
    throw UsageError("unknown target '" + cfg.target + "'");
  }
  if (cfg.terms < 1) {
    throw UsageError("terms must be ≥ 1");
  }
  if (cfg.extra_terms < 0) {
    throw UsageError("extra-terms must be ≥ 0");
  }
  const bool needs_n = cfg.target != "F";
  if (needs_n) {
    require_n(cfg.n);
  }
  const bool is_sm = cfg.target == "sm";
  if (cfg.target != "F" && cfg.target != "s0") {
    require_m(cfg.m, is_sm ? 0 : 1);
  }

  json config{{"target", cfg.target}};
  if (needs_n) {
    config["n"] = cfg.n;
  }
  if (cfg.target != "F" && cfg.target != "s0") {
    config["m"] = cfg.m;
  }
  const bool variance_target =
      cfg.target == "var_space" || cfg.target == "var_momentum" || cfg.target == "product";
  if (variance_target) {
    config["extra_terms"] = cfg.extra_terms;
  } else {
    config["terms"] = cfg.terms;
  }

  std::optional<TruncatedLaurentSeries> series;
  std::optional<NormalizedRadicalSeries> radical;
  if (cfg.target == "F") {
    series = expand_F(-1 + cfg.terms);
  } else if (cfg.target == "s0") {
    series = expand_s0(cfg.n, -(cfg.n - 1) + cfg.terms);
  } else if (is_sm) {
    series = expand_sm(cfg.n, cfg.m, -(cfg.n + cfg.m - 1) + cfg.terms);
  } else if (cfg.target == "A" || cfg.target == "B" || cfg.target == "C") {
    const ABCSeries abc = derive_ABC(cfg.n, cfg.m, cfg.terms);
    series = cfg.target == "A" ? abc.A : cfg.target == "B" ? abc.B : abc.C;
  } else {
    const VarianceExpansions v = expand_variances(cfg.n, cfg.m, cfg.extra_terms);
    if (cfg.target == "var_space") {
      series = v.var_space;
    } else if (cfg.target == "var_momentum") {
      series = v.var_momentum;
    } else {
      radical = v.product;
    }
  }

  const Format format = cfg.common.resolved_format(Format::json);
  std::string payload;
  if (format == Format::json) {
    json doc;
    doc["meta"] = meta_json("expand", config);
    if (series) {
      doc["series"] = series_json(*series);
    } else {
      doc["product"] = {{"radicand", fraction_string(radical->radicand)},
                        {"shift", radical->shift},
                        {"tail", series_json(radical->tail)}};
    }
    payload = json_text(doc);
  } else {
    payload = meta_csv_line("expand", config);
    payload += csv_row({"part", "exponent", "value"});
    if (series) {
      series_csv(*series, "coefficient", payload);
      payload += csv_row({"order", std::to_string(series->order()), ""});
    } else {
      payload += csv_row({"radicand", "", fraction_string(radical->radicand)});
      payload += csv_row({"shift", std::to_string(radical->shift), ""});
      series_csv(radical->tail, "tail", payload);
      payload += csv_row({"order", std::to_string(radical->tail.order()), ""});
    }
  }
  emit(payload, cfg.common, "expand", format == Format::json ? "json" : "csv", out);
  return exit_ok;
}

void add_output_options(CLI::App* sub, CommonOptions& opts, bool with_format) {
  if (with_format) {
    sub->add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  }
  sub->add_option("--output,-o", opts.output, "Output file (default: standard output)");
  sub->add_option("--output-dir", opts.output_dir, "Directory for relative --output paths");
}

void add_truncation_options(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--rel-tol", opts.rel_tol, "Relative truncation tolerance of every series")
      ->capture_default_str();
  sub->add_option("--min-terms", opts.min_terms, "Minimum number of series terms")->capture_default_str();
  sub->add_option("--max-terms", opts.max_terms, "Maximum number of series terms")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uncertainty products of Poisson wavelets on spheres", "puw"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Config cfg;

  CLI::App* compute = app.add_subcommand("compute", "Variances and uncertainty product at one scale");
  compute->add_option("--n", cfg.n, "Sphere dimension")->required();
  compute->add_option("--m", cfg.m, "Wavelet order")->capture_default_str();
  compute->add_option("--rho", cfg.rho, "Scale")->required();
  add_output_options(compute, cfg.common, true);
  add_truncation_options(compute, cfg.common);

  CLI::App* sweep = app.add_subcommand("sweep", "Uncertainty product over a geometric grid of scales");
  sweep->add_option("--n", cfg.n, "Sphere dimension")->required();
  sweep->add_option("--m", cfg.m, "Wavelet order")->capture_default_str();
  sweep->add_option("--rho-min", cfg.rho_min, "Smallest scale")->required();
  sweep->add_option("--rho-max", cfg.rho_max, "Largest scale")->required();
  sweep->add_option("--steps", cfg.steps, "Number of grid points")->required();
  sweep->add_option("--expansion", cfg.expansion, "Two-term expansion used for the residual column")
      ->check(CLI::IsMember({"engine", "theorem"}))
      ->capture_default_str();
  add_output_options(sweep, cfg.common, true);
  add_truncation_options(sweep, cfg.common);

  CLI::App* limits = app.add_subcommand("limits", "Small-scale limits of the uncertainty product and minimisers");
  limits->add_option("--n", cfg.n_single, "Single dimension (overrides the range)");
  limits->add_option("--n-min", cfg.n_min, "Smallest dimension")->capture_default_str();
  limits->add_option("--n-max", cfg.n_max, "Largest dimension")->capture_default_str();
  limits->add_option("--m-max", cfg.m_max, "Largest order listed")->capture_default_str();
  add_output_options(limits, cfg.common, true);

  CLI::App* verify = app.add_subcommand("verify", "Run the full verification suite");
  add_output_options(verify, cfg.common, false);

  CLI::App* expand = app.add_subcommand("expand", "Exact Laurent coefficients of the small-scale expansions");
  expand->add_option("--target", cfg.target, "F, s0, sm, A, B, C, var_space, var_momentum or product")
      ->required();
  expand->add_option("--n", cfg.n, "Sphere dimension");
  expand->add_option("--m", cfg.m, "Wavelet order (derivative index for sm)")->capture_default_str();
  expand->add_option("--terms", cfg.terms, "Coefficients kept from the pole (F, s0, sm, A, B, C)")
      ->capture_default_str();
  expand->add_option("--extra-terms", cfg.extra_terms, "Extra powers for var_space, var_momentum, product")
      ->capture_default_str();
  add_output_options(expand, cfg.common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  try {
    if (compute->parsed()) {
      return cmd_compute(cfg, out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(cfg, out);
    }
    if (limits->parsed()) {
      return cmd_limits(cfg, out);
    }
    if (verify->parsed()) {
      return cmd_verify(cfg, out, err);
    }
    return cmd_expand(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return exit_usage;
  } catch (const DegenerateInputError& e) {
    err << "error: degenerate input: " << e.what() << "\n";
    return exit_degenerate;
  } catch (const TruncationError& e) {
    err << "error: truncation failure: " << e.what() << "\n";
    return exit_truncation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace puw
