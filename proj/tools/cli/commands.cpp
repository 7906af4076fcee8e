#include "commands.hpp"

#include "linepack/bounds.hpp"
#include "linepack/certify.hpp"
#include "linepack/delsarte.hpp"
#include "linepack/errors.hpp"
#include "linepack/ingest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace linepack::cli {

using nlohmann::json;

std::string format_number(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string text_value(const std::optional<double>& v) { return v ? format_number(*v) : "n/a"; }

json to_json(const BoundReport& r) {
  return {
      {"d", r.d},
      {"n", r.n},
      {"field", std::string(to_string(r.field))},
      {"welch", optional_json(r.welch)},
      {"bukh_cox", r.bukh_cox},
      {"orthoplex", optional_json(r.orthoplex)},
      {"levenshtein", optional_json(r.levenshtein)},
      {"best", r.best},
      {"achiever", std::string(to_string(r.achiever))},
  };
}

json to_json(const FeasibilityCertificate& c) {
  json checks = json::array();
  for (const auto& cc : c.checked_constraints) {
    checks.push_back({{"name", cc.name}, {"satisfied", cc.satisfied}, {"margin", cc.margin}});
  }
  return {{"grid_size", c.grid_size},
          {"min_slack", c.min_slack},
          {"argmin_x", c.argmin_x},
          {"passed", c.passed},
          {"checked_constraints", checks}};
}

json to_json(const LPSolution& s) {
  return {{"field", std::string(to_string(s.field))},
          {"k", s.k},
          {"c0", s.coeffs.c0},
          {"c1", s.coeffs.c1},
          {"c2", s.coeffs.c2},
          {"x_star", s.x_star},
          {"source", s.source == LpSource::Tangency ? "tangency" : "minimized"},
          {"refinement_rounds", s.refinement_rounds},
          {"feasibility", to_json(s.feasibility)}};
}

json to_json(const LemmaCertificate& c) {
  json chain = json::array();
  for (const auto& s : c.chain) {
    json step = {{"name", s.name}, {"left", s.left}, {"right", s.right}, {"slack", s.slack}};
    if (s.witness_index >= 0) step["column"] = s.witness_index;
    chain.push_back(step);
  }
  return {{"n", c.n},
          {"d", c.d},
          {"k", c.k},
          {"mu", c.mu},
          {"gamma_witness", c.gamma_witness},
          {"gamma_upper", c.gamma_upper},
          {"floor_witness", c.floor_witness},
          {"floor_theorem", c.floor_theorem},
          {"chain", chain},
          {"valid", c.valid}};
}

json to_json(const EqualityDiagnosis& d) {
  json conds = json::array();
  for (const auto& c : d.conditions) {
    conds.push_back({{"name", c.name}, {"holds", c.holds}, {"margin", c.margin}, {"note", c.note}});
  }
  return {{"conditions", conds},
          {"skipped_pairs", d.skipped_pairs},
          {"gram_one_norm", d.gram_one_norm},
          {"reference_bound", d.reference_bound},
          {"all_hold", d.all_hold()}};
}

json to_json(const FigureRow& r) {
  return {{"n", r.n},
          {"packing_coherence", optional_json(r.packing_coherence)},
          {"welch", optional_json(r.welch)},
          {"bukh_cox", optional_json(r.bukh_cox)},
          {"orthoplex", optional_json(r.orthoplex)},
          {"levenshtein", optional_json(r.levenshtein)},
          {"best_bound", r.best_bound},
          {"achiever", r.achiever}};
}

PackingLayout parse_layout(const std::string& text) {
  if (text == "auto") return PackingLayout::Auto;
  if (text == "vector-major") return PackingLayout::VectorMajor;
  if (text == "rows") return PackingLayout::RowPerVector;
  throw DomainError("unknown layout '" + text + "' (expected auto, vector-major or rows)");
}

struct BoundsArgs {
  int d = 0;
  int n = 0;
  std::string field = "real";
  bool orthoplex_inclusive = false;
  bool json = false;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
  const auto convention =
      a.orthoplex_inclusive ? ThresholdConvention::Inclusive : ThresholdConvention::Strict;
  const BoundReport r = bound_report(a.d, a.n, parse_field(a.field), convention);
  if (a.json) {
    out << to_json(r).dump(2) << "\n";
    return kExitOk;
  }
  out << "d " << r.d << "  n " << r.n << "  field " << to_string(r.field) << "\n"
      << "welch        " << text_value(r.welch) << "\n"
      << "bukh_cox     " << format_number(r.bukh_cox) << "\n"
      << "orthoplex    " << text_value(r.orthoplex) << "\n"
      << "levenshtein  " << text_value(r.levenshtein) << "\n"
      << "best         " << format_number(r.best) << "\n"
      << "achiever     " << to_string(r.achiever) << "\n";
  return kExitOk;
}

struct CertifyArgs {
  std::string input;
  std::optional<int> d;
  std::optional<int> n;
  std::string field = "real";
  std::string layout = "auto";
  bool lemma = false;
  bool theorem3 = false;
  bool welch_equality = false;
  double tol = 1e-8;
  bool json = false;
};

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  const int modes = int(a.lemma) + int(a.theorem3) + int(a.welch_equality);
  if (modes != 1) throw DomainError("choose exactly one of --lemma, --theorem3, --welch-equality");
  const ParseOptions opts{a.d, a.n, parse_field(a.field), parse_layout(a.layout)};
  const PackingRecord rec = load_packing(a.input, opts);
  const VectorConfiguration& x = rec.configuration;

  json report = {{"input", a.input},
                 {"d", rec.d},
                 {"n", rec.n},
                 {"field", std::string(to_string(rec.field))},
                 {"checksum", rec.checksum},
                 {"renormalized", rec.renormalized}};
  bool ok = false;
  if (a.lemma) {
    const LemmaCertificate cert = lemma_certificate(x);
    const EqualityDiagnosis eq =
        diagnose_lemma_equality(x, orthogonal_tight_complement(x), a.tol);
    report["certificate"] = "lemma";
    report["lemma"] = to_json(cert);
    report["equality"] = to_json(eq);
    ok = cert.valid;
  } else if (a.theorem3) {
    const EqualityDiagnosis eq = diagnose_theorem3_equality(x, a.tol);
    report["certificate"] = "theorem3";
    report["equality"] = to_json(eq);
    ok = eq.all_hold();
  } else {
    const WelchEqualityCheck w = welch_equality_check(x, a.tol);
    report["certificate"] = "welch-equality";
    report["welch_equality"] = {{"equal", w.equal},
                                {"etf", w.etf},
                                {"consistent", w.consistent},
                                {"one_norm", w.one_norm},
                                {"bound", w.bound},
                                {"norm_margin", w.norm_margin},
                                {"spread", w.spread},
                                {"unit_deviation", w.unit_deviation}};
    ok = w.equal && w.consistent;
  }
  report["passed"] = ok;
  out << report.dump(2) << "\n";
  return ok ? kExitOk : kExitCertificateFailed;
}

struct LpArgs {
  int k = 0;
  std::string field = "complex";
  bool minimize = false;
  int grid = kDefaultLpGrid;
  int verify_grid = kDefaultVerifyGrid;
  bool json = false;
};

int cmd_lp(const LpArgs& a, std::ostream& out) {
  if (a.k < 1) throw DimensionError("--k must be >= 1");
  const Field field = parse_field(a.field);
  LPSolution tangent = tangency_solve(a.k, field);
  tangent.feasibility = verify_feasible(tangent.coeffs, a.k, field, a.verify_grid);
  std::optional<LPSolution> minimized;
  if (a.minimize) minimized = minimize_c0(a.k, field, a.grid);

  if (a.json) {
    json j = {{"tangency", to_json(tangent)}};
    if (minimized) {
      j["minimized"] = to_json(*minimized);
      j["gap"] = std::abs(minimized->coeffs.c0 - tangent.coeffs.c0);
    }
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "k " << a.k << "  field " << to_string(field) << "\n"
      << "c0         " << format_number(tangent.coeffs.c0) << "\n"
      << "c1         " << format_number(tangent.coeffs.c1) << "\n"
      << "c2         " << format_number(tangent.coeffs.c2) << "\n"
      << "x_star     " << format_number(tangent.x_star) << "\n"
      << "min_slack  " << format_number(tangent.feasibility.min_slack) << " (grid "
      << tangent.feasibility.grid_size << ")\n";
  if (minimized) {
    out << "lp_c0      " << format_number(minimized->coeffs.c0) << " (grid " << a.grid
        << ", rounds " << minimized->refinement_rounds << ")\n"
        << "gap        " << format_number(std::abs(minimized->coeffs.c0 - tangent.coeffs.c0))
        << "\n";
  }
  return kExitOk;
}

struct FigureArgs {
  int d = 6;
  int n_min = 5;
  int n_max = 40;
  std::string field = "real";
  std::string packings;
  std::string out;
  bool orthoplex_inclusive = false;
  std::string fetch_template;
  std::string cache = ".linepack-cache";
  bool json = false;
};

int cmd_figure(const FigureArgs& a, std::ostream& out, std::ostream& err) {
  FigureOptions opts;
  opts.d = a.d;
  opts.n_min = a.n_min;
  opts.n_max = a.n_max;
  opts.field = parse_field(a.field);
  if (!a.packings.empty()) opts.packings_dir = a.packings;
  opts.orthoplex =
      a.orthoplex_inclusive ? ThresholdConvention::Inclusive : ThresholdConvention::Strict;
  if (!a.fetch_template.empty()) opts.fetch_template = a.fetch_template;
  opts.cache_dir = a.cache;

  const auto rows = figure_rows(opts, err);
  const std::string csv = figure_csv(rows);
  if (!a.out.empty()) {
    std::ofstream file(a.out, std::ios::binary);
    if (!file) throw Error("cannot write " + a.out);
    file << csv;
    if (!file.flush()) throw Error("cannot write " + a.out);
  }
  if (a.json) {
    json j = json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    out << j.dump(2) << "\n";
  } else if (a.out.empty()) {
    out << csv;
  }
  return kExitOk;
}

struct FetchArgs {
  std::string url;
  std::string cache = ".linepack-cache";
  std::optional<int> d;
  std::optional<int> n;
  std::string field = "real";
  std::string db_url;
  bool json = false;
};

int cmd_fetch(const FetchArgs& a, std::ostream& out) {
  if (!a.db_url.empty()) ::setenv(kDbUrlEnv, a.db_url.c_str(), 1);
  const std::string url = resolve_packing_url(a.url);
  const PackingRecord rec =
      fetch_packing(url, a.cache, ParseOptions{a.d, a.n, parse_field(a.field), PackingLayout::Auto});
  const double mu = packing_coherence(rec);
  if (a.json) {
    out << json{{"url", url},
                {"d", rec.d},
                {"n", rec.n},
                {"field", std::string(to_string(rec.field))},
                {"checksum", rec.checksum},
                {"renormalized", rec.renormalized},
                {"coherence", mu}}
               .dump(2)
        << "\n";
    return kExitOk;
  }
  out << "url        " << url << "\n"
      << "shape      " << rec.d << " x " << rec.n << " (" << to_string(rec.field) << ")\n"
      << "checksum   " << rec.checksum << "\n"
      << "coherence  " << format_number(mu) << "\n";
  return kExitOk;
}

}  // namespace

std::string packing_file_name(Field field, int d, int n) {
  return std::string(to_string(field)) + "-" + std::to_string(d) + "-" + std::to_string(n) + ".txt";
}

std::vector<FigureRow> figure_rows(const FigureOptions& options, std::ostream& warnings) {
  std::vector<FigureRow> rows;
  for (int n = options.n_min; n <= options.n_max; ++n) {
    if (n <= options.d) {
      warnings << "warning: skipping n=" << n << " (bounds need n > d=" << options.d << ")\n";
      continue;
    }
    const BoundReport r = bound_report(options.d, n, options.field, options.orthoplex);
    FigureRow row;
    row.n = n;
    row.welch = r.welch;
    row.bukh_cox = r.bukh_cox;
    row.orthoplex = r.orthoplex;
    row.levenshtein = r.levenshtein;
    row.best_bound = r.best;
    row.achiever = std::string(to_string(r.achiever));

    const ParseOptions parse{options.d, n, options.field, PackingLayout::Auto};
    const std::string name = packing_file_name(options.field, options.d, n);
    if (options.packings_dir && std::filesystem::exists(*options.packings_dir / name)) {
      row.packing_coherence = packing_coherence(load_packing(*options.packings_dir / name, parse));
    } else if (options.fetch_template) {
      std::string url = *options.fetch_template;
      if (const auto at = url.find("{n}"); at != std::string::npos) {
        url.replace(at, 3, std::to_string(n));
      }
      try {
        row.packing_coherence =
            packing_coherence(fetch_packing(resolve_packing_url(url), options.cache_dir, parse));
      } catch (const NetworkError& e) {
        warnings << "warning: n=" << n << ": " << e.what() << "\n";
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string figure_csv(const std::vector<FigureRow>& rows) {
  std::string csv = std::string(kFigureHeader) + "\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.n) + "," + cell(r.packing_coherence) + "," + cell(r.welch) + "," +
           cell(r.bukh_cox) + "," + cell(r.orthoplex) + "," + cell(r.levenshtein) + "," +
           format_number(r.best_bound) + "," + r.achiever + "\n";
  }
  return csv;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"linepack: coherence bounds and certificates for line packings"};
  app.require_subcommand(1);

  BoundsArgs bounds;
  auto* sb = app.add_subcommand("bounds", "Coherence lower bounds for (d, n, field)");
  sb->add_option("--d", bounds.d, "Ambient dimension")->required();
  sb->add_option("--n", bounds.n, "Number of lines")->required();
  sb->add_option("--field", bounds.field, "real or complex");
  sb->add_flag("--orthoplex-inclusive", bounds.orthoplex_inclusive,
               "Apply the orthoplex bound from n >= threshold instead of n > threshold");
  sb->add_flag("--json", bounds.json, "Machine-readable output");

  CertifyArgs certify;
  auto* sc = app.add_subcommand("certify", "Replay a certificate on a packing file");
  sc->add_option("input", certify.input, "Packing file")->required();
  sc->add_option("--d", certify.d, "Dimension (if the file has no header)");
  sc->add_option("--n", certify.n, "Vector count (if the file has no header)");
  sc->add_option("--field", certify.field, "real or complex");
  sc->add_option("--layout", certify.layout, "auto, vector-major or rows");
  sc->add_option("--tol", certify.tol, "Equality tolerance");
  sc->add_flag("--lemma", certify.lemma, "Coherence floor via the tight complement");
  sc->add_flag("--theorem3", certify.theorem3, "Equality conditions of the LP Gram bound");
  sc->add_flag("--welch-equality", certify.welch_equality, "Equality in the Welch Gram bound");
  sc->add_flag("--json", certify.json, "Machine-readable output (always on)");

  LpArgs lp;
  auto* sl = app.add_subcommand("lp", "Tangency triple and LP minimization of c0");
  sl->add_option("--k", lp.k, "LP dimension k = n - d")->required();
  sl->add_option("--field", lp.field, "real or complex");
  sl->add_flag("--minimize", lp.minimize, "Also solve the discretized LP");
  sl->add_option("--grid", lp.grid, "LP grid size");
  sl->add_option("--verify-grid", lp.verify_grid, "Feasibility verification grid size");
  sl->add_flag("--json", lp.json, "Machine-readable output");

  FigureArgs figure;
  auto* sf = app.add_subcommand("figure", "Bound comparison table as CSV");
  sf->add_option("--d", figure.d, "Ambient dimension");
  sf->add_option("--n-min", figure.n_min, "First n");
  sf->add_option("--n-max", figure.n_max, "Last n");
  sf->add_option("--field", figure.field, "real or complex");
  sf->add_option("--packings", figure.packings, "Directory of <field>-<d>-<n>.txt packing files");
  sf->add_option("--out", figure.out, "CSV output path (stdout when omitted)");
  sf->add_flag("--orthoplex-inclusive", figure.orthoplex_inclusive,
               "Apply the orthoplex bound from n >= threshold");
  sf->add_option("--fetch-template", figure.fetch_template,
                 "Url for missing packings, with {n} substituted");
  sf->add_option("--cache", figure.cache, "Download cache directory");
  sf->add_flag("--json", figure.json, "Print rows as JSON");

  FetchArgs fetch;
  auto* sg = app.add_subcommand("fetch", "Download (or read from cache) one packing file");
  sg->add_option("--url", fetch.url, "Absolute url, or a name relative to $LINEPACK_DB_URL")
      ->required();
  sg->add_option("--cache", fetch.cache, "Download cache directory");
  sg->add_option("--d", fetch.d, "Dimension (if the file has no header)");
  sg->add_option("--n", fetch.n, "Vector count (if the file has no header)");
  sg->add_option("--field", fetch.field, "real or complex");
  sg->add_option("--db-url", fetch.db_url, "Base url for relative names");
  sg->add_flag("--json", fetch.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (sb->parsed()) return cmd_bounds(bounds, out);
    if (sc->parsed()) return cmd_certify(certify, out);
    if (sl->parsed()) return cmd_lp(lp, out);
    if (sf->parsed()) return cmd_figure(figure, out, err);
    if (sg->parsed()) return cmd_fetch(fetch, out);
  } catch (const std::exception& e) {
    std::string message = e.what();
    for (char& c : message) {
      if (c == '\n') c = ' ';
    }
    err << "error: " << message << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace linepack::cli
