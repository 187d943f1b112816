// Command-line front end: ingest algebra / theta / H JSON, run the curvature
// pipeline, emit reports, and check the built-in model suite.
//
// Exit codes: 0 success, 1 verify-table failures, 2 input validation errors
// (including usage), 3 geometric degeneracies met while running a valid
// request.  JSON goes to stdout (or --out); diagnostics go to stderr, and no
// partial JSON is ever written on an error path.
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hak/json_io.hpp"

namespace {

using hak::json;

struct GlobalOpts {
  double tol = -1.0;  // <= 0: keep per-command defaults
  std::string out;    // empty: stdout
  bool quiet = false;
};

std::string slurp(const std::string& path) {
  if (path == "-")
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hak::InputError("cannot open input file: " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw hak::InputError(std::string("JSON parse: ") + e.what());
  }
}

// The whole payload is built before anything is written, so failed commands
// never leave partial output behind.
void write_output(const GlobalOpts& g, const std::string& payload) {
  if (g.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(g.out, std::ios::binary);
  if (!out) throw hak::InputError("cannot open output file: " + g.out);
  out << payload;
  if (!g.quiet) std::cerr << "wrote " << g.out << "\n";
}

int cmd_analyze(const GlobalOpts& g, const std::string& request_path) {
  hak::AnalysisRequest req = hak::request_from_json(parse_json(slurp(request_path)));
  if (g.tol > 0.0) req.special_tol = g.tol;
  const hak::AnalysisOutcome outcome = hak::run_analysis(req);
  write_output(g, hak::outcome_to_json(outcome).dump(2) + "\n");
  return 0;
}

int cmd_catalog_list(const GlobalOpts& g) {
  write_output(g, json(hak::catalog_names()).dump(2) + "\n");
  return 0;
}

int cmd_catalog_emit(const GlobalOpts& g, const std::string& name,
                     const hak::CatalogParams& params) {
  write_output(g, hak::entry_to_json(hak::catalog_entry(name, params)).dump(2) + "\n");
  return 0;
}

struct VerifyRow {
  std::string entry, field;
  double expected, computed;
  bool pass;
};

void verify_value(std::vector<VerifyRow>& rows, const std::string& entry,
                  const std::string& field, double expected, double computed, double tol) {
  const bool pass = std::abs(computed - expected) <= tol * std::max(1.0, std::abs(expected));
  rows.push_back({entry, field, expected, computed, pass});
}

int cmd_verify(const GlobalOpts& g, const std::string& suite, bool inject_fault) {
  if (suite.empty()) throw hak::InputError("verify: suite name must not be empty");
  if (suite != "paper")
    throw hak::InputError("verify: unknown suite '" + suite + "' (available: paper)");
  const double tol = g.tol > 0.0 ? g.tol : 1e-7;

  std::vector<VerifyRow> rows;
  for (const hak::CatalogEntry& entry : hak::verify_entries()) {
    const hak::ReductiveModel model = hak::model_from_entry(entry);
    hak::Matrix h;
    if (!entry.theta.empty())
      h = hak::special_H_from_blocks(model, hak::adV_blocks(model)).H;
    else if (!entry.h_hint.empty())
      h = hak::restrict_to_m(model, entry.h_hint);
    else
      h = hak::polar_H(model.sigma_m, hak::Matrix::identity(model.dim_m())).H;
    hak::CurvatureReport report = hak::curvature_report(model, h);
    if (inject_fault) report.lambda += 1e-3;  // test mode: every row pins lambda

    const std::string& name = entry.name;
    const hak::ExpectedValues& e = entry.expected;
    if (e.lambda) verify_value(rows, name, "lambda", *e.lambda, report.lambda, tol);
    if (e.s) verify_value(rows, name, "s", *e.s, report.s, tol);
    if (e.nijenhuis_sq)
      verify_value(rows, name, "nijenhuis_sq", *e.nijenhuis_sq, report.nijenhuis_sq, tol);
    if (e.scal) verify_value(rows, name, "scal", *e.scal, report.scal, tol);
    if (e.dim_m)
      verify_value(rows, name, "dim_m", static_cast<double>(*e.dim_m),
                   static_cast<double>(model.dim_m()), 0.0);
    if (e.dim_k)
      verify_value(rows, name, "dim_k", static_cast<double>(*e.dim_k),
                   static_cast<double>(model.dim_k()), 0.0);
    if (e.v_prime_scale && !model.V.empty() && !report.v_prime.empty()) {
      double vv = 0.0, pv = 0.0;
      for (std::size_t i = 0; i < model.V.size(); ++i) {
        vv += model.V[i] * model.V[i];
        pv += report.v_prime[i] * model.V[i];
      }
      verify_value(rows, name, "v_prime_scale", *e.v_prime_scale,
                   vv > 0.0 ? pv / vv : 0.0, tol);
    }
  }

  std::ostringstream table;
  table << std::left << std::setw(28) << "entry" << std::setw(16) << "field"
        << std::right << std::setw(14) << "expected" << std::setw(22) << "computed"
        << "  status\n";
  std::size_t failures = 0;
  for (const VerifyRow& r : rows) {
    table << std::left << std::setw(28) << r.entry << std::setw(16) << r.field
          << std::right << std::setw(14) << std::setprecision(6) << r.expected
          << std::setw(22) << std::setprecision(12) << r.computed << "  "
          << (r.pass ? "PASS" : "FAIL") << "\n";
    if (!r.pass) ++failures;
  }
  table << rows.size() << " checks, " << failures << " failures\n";
  write_output(g, table.str());
  return failures == 0 ? 0 : 1;
}

int cmd_search(const GlobalOpts& g, const std::string& request_path,
               const hak::SearchConfig& config, int starts) {
  hak::AnalysisRequest req = hak::request_from_json(parse_json(slurp(request_path)));
  if (g.tol > 0.0) req.special_tol = g.tol;
  const hak::AnalysisOutcome start = hak::run_analysis(req);
  const hak::CurvatureContext ctx(start.model);
  const hak::SearchResult result =
      starts <= 1 ? hak::search_special(ctx, start.structure.H, config)
                  : hak::search_multi(ctx, config, starts, start.structure.H);
  json out = hak::search_result_to_json(result);
  out["report"] = hak::report_to_json(
      hak::curvature_report(ctx, result.structure.H, req.special_tol));
  write_output(g, out.dump(2) + "\n");
  return 0;
}

template <typename Fn>
int guarded(const Fn& fn) {
  try {
    return fn();
  } catch (const hak::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const hak::Error& e) {
    std::cerr << "geometry error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature invariants of homogeneous almost-Kahler structures"};
  app.require_subcommand(1);
  app.fallthrough();  // let global flags appear after the subcommand too

  GlobalOpts g;
  app.add_option("--tol", g.tol, "override the specialness / verify tolerance");
  app.add_option("--out", g.out, "write output to this file instead of stdout");
  app.add_flag("--quiet", g.quiet, "suppress diagnostics on stderr");

  std::string analyze_path;
  CLI::App* analyze = app.add_subcommand("analyze", "run the pipeline on a request file");
  analyze->add_option("request", analyze_path, "request JSON path ('-' for stdin)")
      ->required();

  CLI::App* catalog = app.add_subcommand("catalog", "list or emit the built-in models");
  catalog->require_subcommand(1);
  CLI::App* list = catalog->add_subcommand("list", "print the entry names");
  std::string emit_name;
  hak::CatalogParams params;
  CLI::App* emit = catalog->add_subcommand("emit", "emit one entry as JSON");
  emit->add_option("name", emit_name, "entry name (see catalog list)")->required();
  emit->add_option("--n", params.n, "twistor size parameter");
  emit->add_option("--p", params.p, "period-domain p");
  emit->add_option("--q", params.q, "period-domain q");
  emit->add_option("--seed", params.seed, "two-step sampling seed");

  std::string suite = "paper";
  bool inject_fault = false;
  CLI::App* verify = app.add_subcommand("verify", "compare the model suite to expectations");
  verify->add_option("suite", suite, "suite name (default: paper)");
  verify->add_flag("--inject-fault", inject_fault, "test mode: perturb each row");

  std::string search_path;
  hak::SearchConfig config;
  int starts = 1;
  CLI::App* search = app.add_subcommand("search", "minimize the specialness residual");
  search->add_option("request", search_path, "request JSON path ('-' for stdin)")
      ->required();
  search->add_option("--max-iters", config.max_iters, "iteration cap");
  search->add_option("--step0", config.step0, "initial probe scale");
  search->add_option("--shrink", config.shrink, "backtracking factor in (0,1)");
  search->add_option("--target", config.residual_target, "residual target");
  search->add_option("--seed", config.seed, "seed for random starts");
  search->add_option("--starts", starts, "number of multi-start runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are validation failures
  }

  if (*analyze) return guarded([&] { return cmd_analyze(g, analyze_path); });
  if (*list) return guarded([&] { return cmd_catalog_list(g); });
  if (*emit) return guarded([&] { return cmd_catalog_emit(g, emit_name, params); });
  if (*verify) return guarded([&] { return cmd_verify(g, suite, inject_fault); });
  if (*search) return guarded([&] { return cmd_search(g, search_path, config, starts); });
  return 2;
}
