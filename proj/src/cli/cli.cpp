#include "dualopa/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "dualopa/error.hpp"
#include "dualopa/gain.hpp"
#include "dualopa/herald.hpp"
#include "dualopa/output.hpp"
#include "dualopa/qkd.hpp"
#include "dualopa/scheme.hpp"

namespace dualopa::cli {

namespace {

using nlohmann::json;
using output::Document;
using output::Format;
using output::Section;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string format = "csv";
  std::string path = "-";
  int precision = 12;
  std::optional<int> cutoff;
  double cutoff_factor = 1.0;
};

double angle_or_throw(const std::string& text, const char* flag) {
  auto value = parse_angle(text);
  if (!value) throw UsageError(fmt::format("{}: cannot parse angle '{}'", flag, text));
  return *value;
}

// Flag, then environment variable, then the gain-based heuristic.
int resolve_cutoff(const GlobalOptions& g, double r, int seed_photons = 2) {
  if (g.cutoff) return *g.cutoff;
  if (const char* env = std::getenv(kCutoffEnvVar); env != nullptr && *env != '\0') {
    int value = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw UsageError(fmt::format("{}='{}' is not an integer", kCutoffEnvVar, text));
    }
    return value;
  }
  return default_cutoff(r, seed_photons, g.cutoff_factor);
}

json norm_report_json(const NormReport& report) {
  return {{"norm_before", report.norm_before}, {"leakage", report.leakage}};
}

void warn_heavy_tail(const SqueezeParams& p, std::ostream& err) {
  if (p.heavy_tail()) {
    err << fmt::format("warning: r = {} > {}; photon-number tails are heavy, check the cutoff\n", p.r(),
                       SqueezeParams::kHeavyTailGain);
  }
}

void emit(const Document& doc, const output::OutputSpec& spec, std::ostream& out,
          const std::string* svg = nullptr) {
  std::string text;
  switch (spec.format) {
    case Format::Csv: text = output::render_csv(doc, spec.precision); break;
    case Format::Json: text = output::render_json(doc, spec.precision); break;
    case Format::Svg:
      if (svg == nullptr) throw UsageError("svg output is only available for herald-table");
      text = *svg;
      break;
  }
  if (spec.path == "-") {
    out << text;
    return;
  }
  std::ofstream file(spec.path, std::ios::binary);
  if (!file) throw UsageError(fmt::format("cannot open '{}' for writing", spec.path));
  file << text;
}

output::OutputSpec make_spec(const GlobalOptions& g) {
  static const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}, {"svg", Format::Svg}};
  return {formats.at(g.format), g.path, g.precision};
}

}  // namespace

std::optional<double> parse_angle(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const auto pi_pos = text.find("pi");
  if (pi_pos == std::string_view::npos) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
    return value;
  }
  // [sign][integer]pi[/integer]
  std::string_view head = text.substr(0, pi_pos);
  std::string_view tail = text.substr(pi_pos + 2);
  double sign = 1.0;
  if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
    if (head.front() == '-') sign = -1.0;
    head.remove_prefix(1);
  }
  auto parse_int = [](std::string_view s) -> std::optional<long> {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  long numerator = 1;
  if (!head.empty()) {
    auto v = parse_int(head);
    if (!v) return std::nullopt;
    numerator = *v;
  }
  long denominator = 1;
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    auto v = parse_int(tail.substr(1));
    if (!v || *v == 0) return std::nullopt;
    denominator = *v;
  }
  return sign * std::numbers::pi * static_cast<double>(numerator) / static_cast<double>(denominator);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement-seeded dual OPA simulator: heralded states, N00N conversion and key distribution"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--output", g.path, "Output file, '-' for standard output");
  app.add_option("--precision", g.precision, "Significant digits")->check(CLI::Range(1, 17));
  app.add_option("--cutoff", g.cutoff,
                 fmt::format("Per-mode photon cutoff (default: ${} or a gain-based heuristic)", kCutoffEnvVar));
  app.add_option("--cutoff-factor", g.cutoff_factor, "Scale of the heuristic cutoff margin")
      ->check(CLI::PositiveNumber);

  // seed
  auto* seed = app.add_subcommand("seed", "Hong-Ou-Mandel seed (|2,0> + |0,2>)/sqrt2");
  seed->fallthrough();

  // output-state
  auto* output_state = app.add_subcommand("output-state", "Four-mode output of the dual amplifier");
  output_state->fallthrough();
  double os_r = 0.66;
  std::string os_phi = "0";
  std::string os_method = "closed_form";
  bool os_compare = false;
  output_state->add_option("--r", os_r, "Gain r")->check(CLI::NonNegativeNumber);
  output_state->add_option("--phi", os_phi, "Pump phase");
  output_state->add_option("--method", os_method, "closed_form or numeric")
      ->check(CLI::IsMember({"closed_form", "numeric"}));
  output_state->add_flag("--compare", os_compare, "Also report fidelity between the two methods");

  // herald-table
  auto* herald_table = app.add_subcommand("herald-table", "Herald probability table Prob(n, m)");
  herald_table->fallthrough();
  double ht_r = 1.08;
  int ht_n_max = 20;
  bool ht_diagonal = false;
  herald_table->add_option("--r", ht_r, "Gain r")->check(CLI::NonNegativeNumber);
  herald_table->add_option("--n-max", ht_n_max, "Largest n and m in the table")->check(CLI::NonNegativeNumber);
  herald_table->add_flag("--diagonal", ht_diagonal, "Only rows with n = m");

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Gain maximizing Prob(n, m)");
  optimize->fallthrough();
  int opt_n = 1;
  int opt_m = 1;
  double opt_r_min = 0.01;
  double opt_r_max = 2.0;
  double opt_tol = 1e-6;
  bool opt_compare = false;
  optimize->add_option("--n", opt_n, "Photons at detector A")->check(CLI::NonNegativeNumber);
  optimize->add_option("--m", opt_m, "Photons at detector D")->check(CLI::NonNegativeNumber);
  optimize->add_option("--r-min", opt_r_min, "Bracket lower end");
  optimize->add_option("--r-max", opt_r_max, "Bracket upper end");
  optimize->add_option("--tolerance", opt_tol, "Final bracket width");
  optimize->add_flag("--compare-linear", opt_compare, "Compare Prob(1,1) at the optimum with the 3/64 linear-optics rate");

  // noon
  auto* noon = app.add_subcommand("noon", "Convert the (1,1) herald into an N=4 N00N state");
  noon->fallthrough();
  double noon_r = 0.66;
  std::string noon_phi = "0";
  std::string noon_theta = "pi";
  std::string noon_fringe;
  int noon_points = 17;
  noon->add_option("--r", noon_r, "Gain r")->check(CLI::NonNegativeNumber);
  noon->add_option("--phi", noon_phi, "Pump phase");
  noon->add_option("--theta", noon_theta, "Beam-splitter phase");
  noon->add_option("--fringe", noon_fringe, "Emit 1+cos(N phi) samples, e.g. N=4");
  noon->add_option("--fringe-points", noon_points, "Fringe samples over [0, pi]")->check(CLI::Range(2, 100000));

  // qkd
  auto* qkd = app.add_subcommand("qkd", "Photon-number-difference key distribution");
  qkd->fallthrough();
  QkdConfig qcfg;
  bool qkd_keys = false;
  qkd->add_option("--r", qcfg.r, "Gain r")->check(CLI::NonNegativeNumber);
  qkd->add_option("--rounds", qcfg.rounds, "Protocol rounds")->check(CLI::PositiveNumber);
  qkd->add_option("--seed", qcfg.rng_seed, "RNG seed");
  qkd->add_option("--n-max", qcfg.n_max, "Sampling table size")->check(CLI::Range(2, 100000));
  qkd->add_option("--threads", qcfg.threads, "Worker threads")->check(CLI::Range(1, 256));
  qkd->add_flag("--emit-keys", qkd_keys, "Include both raw keys");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    const output::OutputSpec spec = make_spec(g);
    Document doc;

    if (seed->parsed()) {
      const int cutoff = g.cutoff.value_or(resolve_cutoff(g, 0.0));
      const State state = prepare_seed(cutoff);
      doc.metadata = {{"command", "seed"},
                      {"params", {{"cutoff", cutoff}}},
                      {"norm_report", norm_report_json({state.norm(), 0.0})}};
      doc.sections.push_back(output::state_section(state));
      emit(doc, spec, out);

    } else if (output_state->parsed()) {
      const SqueezeParams sq(os_r, angle_or_throw(os_phi, "--phi"));
      warn_heavy_tail(sq, err);
      const SchemeParams params{sq, resolve_cutoff(g, os_r)};
      State closed = output_closed_form(params);
      Evolved numeric = os_method == "numeric" || os_compare ? run_scheme_numeric(params)
                                                             : Evolved{State(kSchemeModes, params.cutoff), {}};
      const bool use_numeric = os_method == "numeric";
      const State& chosen = use_numeric ? numeric.state : closed;
      const NormReport report =
          use_numeric ? numeric.report : NormReport{closed.norm(), std::max(0.0, 1.0 - closed.norm_squared())};
      doc.metadata = {{"command", "output-state"},
                      {"params", {{"r", sq.r()}, {"phi", sq.phi()}, {"cutoff", params.cutoff}, {"method", os_method}}},
                      {"norm_report", norm_report_json(report)}};
      if (os_compare) {
        doc.metadata["fidelity_closed_form_vs_numeric"] =
            fidelity(normalize(closed).state, normalize(numeric.state).state);
      }
      doc.sections.push_back(output::state_section(chosen));
      emit(doc, spec, out);

    } else if (herald_table->parsed()) {
      const HeraldDistribution dist = herald_distribution(ht_r, ht_n_max);
      Section rows{"data", {"n", "m", "probability"}, {}};
      std::vector<output::HeatmapCell> cells;
      for (int n = 0; n <= dist.n_max; ++n) {
        for (int m = 0; m <= dist.n_max; ++m) {
          if (ht_diagonal && n != m) continue;
          rows.rows.push_back({n, m, dist.at(n, m)});
          cells.push_back({n, m, dist.at(n, m)});
        }
      }
      const HeraldOutcome best = ht_diagonal ? dist.argmax_diagonal() : dist.argmax();
      doc.metadata = {{"command", "herald-table"},
                      {"params", {{"r", ht_r}, {"n_max", ht_n_max}, {"diagonal", ht_diagonal}}},
                      {"table_sum", dist.table_sum()},
                      {"tail_mass", dist.tail_mass},
                      {"argmax", {{"n", best.n}, {"m", best.m}}}};
      doc.sections.push_back(std::move(rows));
      const std::string svg = output::render_heatmap_svg(
          cells, fmt::format("Prob(n, m) at r = {}", output::format_number(ht_r, spec.precision)), spec.precision);
      emit(doc, spec, out, &svg);

    } else if (optimize->parsed()) {
      const GainSearchConfig cfg{{opt_n, opt_m}, opt_r_min, opt_r_max, opt_tol};
      const GainOptimum best = optimize_gain(cfg);
      if (best.bracket_warning) {
        err << fmt::format("warning: optimum at bracket edge r = {}; objective may be monotone on [{}, {}]\n",
                           best.r_star, opt_r_min, opt_r_max);
      }
      Section row{"data", {"n", "m", "r_star", "p_star", "r_min", "r_max", "iterations", "bracket_warning"}, {}};
      row.rows.push_back({opt_n, opt_m, best.r_star, best.p_star, opt_r_min, opt_r_max, best.iterations,
                          best.bracket_warning});
      doc.metadata = {{"command", "optimize"},
                      {"params", {{"n", opt_n}, {"m", opt_m}, {"r_min", opt_r_min}, {"r_max", opt_r_max},
                                  {"tolerance", opt_tol}}}};
      if (opt_compare) {
        const LinearOpticsComparison cmp = linear_optics_comparison(best.r_star);
        row.columns.insert(row.columns.end(), {"dual_opa_rate", "linear_rate", "ratio"});
        row.rows.back().insert(row.rows.back().end(), {cmp.dual_opa_rate, cmp.linear_rate, cmp.ratio});
        doc.metadata["linear_comparison_note"] =
            "ratio is Prob(1,1) at r_star over 3/64; the herald probability formula caps it at 1024/729 "
            "(about 1.40), so a factor of about 5 is not reproduced";
      }
      doc.sections.push_back(std::move(row));
      emit(doc, spec, out);

    } else if (noon->parsed()) {
      const SqueezeParams sq(noon_r, angle_or_throw(noon_phi, "--phi"));
      const double theta = angle_or_throw(noon_theta, "--theta");
      const SchemeParams params{sq, resolve_cutoff(g, noon_r)};
      const HeraldedState hs = heralded_state(1, 1, params);
      const Evolved converted =
          apply_beam_splitter(hs.state, 0, 1, {theta, BeamSplitterConvention::Eq9});
      const NoonFidelity nf = noon_fidelity(converted.state, 4);
      doc.metadata = {{"command", "noon"},
                      {"params", {{"r", sq.r()}, {"phi", sq.phi()}, {"theta", theta}, {"cutoff", params.cutoff}}},
                      {"herald", {{"n", 1}, {"m", 1}, {"probability", hs.probability}}},
                      {"best_fidelity", nf.best_fidelity},
                      {"best_phase", nf.best_phase},
                      {"norm_report", norm_report_json(converted.report)}};
      doc.sections.push_back(output::state_section(converted.state));
      if (!noon_fringe.empty()) {
        std::string_view spec_text = noon_fringe;
        if (spec_text.starts_with("N=")) spec_text.remove_prefix(2);
        int order = 0;
        auto [ptr, ec] = std::from_chars(spec_text.data(), spec_text.data() + spec_text.size(), order);
        if (ec != std::errc{} || ptr != spec_text.data() + spec_text.size() || order < 1) {
          throw UsageError(fmt::format("--fringe: expected N=<order>, got '{}'", noon_fringe));
        }
        std::vector<double> grid;
        for (int k = 0; k < noon_points; ++k) grid.push_back(std::numbers::pi * k / (noon_points - 1));
        const auto quantum = fringe_pattern(order, grid);
        const auto classical = fringe_pattern(1, grid);
        Section fringe{"fringe", {"phi", "intensity", "classical"}, {}};
        for (std::size_t k = 0; k < grid.size(); ++k) fringe.rows.push_back({grid[k], quantum[k], classical[k]});
        doc.metadata["fringe_order"] = order;
        doc.sections.push_back(std::move(fringe));
      }
      emit(doc, spec, out);

    } else if (qkd->parsed()) {
      const QkdStats stats = run_protocol(qcfg);
      const double p = stats.analytic_sifted_fraction;
      const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(stats.rounds));
      doc.metadata = {{"command", "qkd"},
                      {"params", {{"r", qcfg.r}, {"rounds", qcfg.rounds}, {"seed", qcfg.rng_seed}, {"n_max", qcfg.n_max}}}};
      Section row{"data",
                  {"rounds", "sifted", "sifted_fraction", "analytic_sifted_fraction", "sifted_sigma", "agreement"},
                  {}};
      row.rows.push_back({stats.rounds, stats.sifted, stats.sifted_fraction, p, sigma, stats.agreement});
      doc.sections.push_back(std::move(row));
      if (qkd_keys) {
        Section keys{"keys", {"index", "alice", "bob"}, {}};
        for (std::size_t i = 0; i < stats.key_alice.size(); ++i) {
          keys.rows.push_back({i, stats.key_alice[i], stats.key_bob[i]});
        }
        doc.sections.push_back(std::move(keys));
      }
      emit(doc, spec, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ResourceLimit: return kResourceLimit;
      case ErrorKind::TruncationError: return kTruncation;
      default: return kUsageError;
    }
  }
  return kSuccess;
}

}  // namespace dualopa::cli
