// Command-line surface: play games, run verification suites, emit systole
// profiles, badness constants and correspondence reports.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "bad3/suites.hpp"

namespace {

using namespace bad3;

RunConfig load_config(const std::string& path) {
  if (path.empty()) {
    RunConfig cfg;
    cfg.validate();
    return cfg;
  }
  return config_from_file(path);
}

Point parse_point(const std::string& text, size_t dim) {
  Point p;
  std::istringstream in(text);
  std::string coord;
  while (std::getline(in, coord, ',')) p.push_back(rat_parse(coord));
  if (p.size() != dim)
    throw std::invalid_argument("point '" + text + "': expected " + std::to_string(dim) +
                                " comma-separated rationals");
  return p;
}

void write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

int cmd_play(const std::string& config_path, const std::string& out_path) {
  RunConfig cfg = load_config(config_path);
  StageParams sp = cfg.stage_params();
  if (sp.mode == StageMode::paper) {
    StageCoverage cov = stage_coverage(sp);
    std::cout << "note: paper-mode constants keep every vector family empty below stage "
              << cov.first_nonempty << " and truncate enumeration at q_max from stage "
              << cov.first_truncated << " on\n";
  }
  PlayResult res = run_play(cfg);
  const json& log = res.transcript.evidence["strategy"];
  for (const auto& e : log) {
    std::cout << "round " << e["round"] << " stage ";
    if (e["stage"].is_null())
      std::cout << "- (gap)";
    else
      std::cout << e["stage"] << (e.value("safe", false) ? " safe" : " unsafe");
    if (e.contains("emitted") && e["emitted"].get<int>() > 0) {
      std::cout << " emitted " << e["emitted"] << " slabs";
      if (e.value("budget_trimmed", false)) std::cout << " (budget-trimmed)";
    }
    if (e.value("family_truncated", false)) std::cout << " [family truncated at q_max]";
    std::cout << "\n";
  }
  std::cout << "verdict: " << (res.certified ? "alice_certified" : "undetermined") << " ("
            << res.transcript.evidence.value("verdict_reason", std::string("none")) << ")\n";
  if (!out_path.empty()) {
    write_or_print(out_path, res.jsonl);
    std::cout << "transcript: " << out_path << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& config_path, const std::string& suite, const std::string& out_path) {
  RunConfig cfg = load_config(config_path);
  std::vector<std::string> names;
  if (suite == "all")
    names = suite_names();
  else
    names.push_back(suite);
  std::string report;
  bool all_pass = true;
  for (const auto& name : names) {
    SuiteResult r = run_suite(name, cfg);
    all_pass = all_pass && r.pass();
    report += suite_report_line(r) + "\n";
    for (const auto& n : r.notes) report += "  note: " + n + "\n";
  }
  write_or_print(out_path, report);
  if (!out_path.empty()) std::cout << (all_pass ? "all suites passed\n" : "suite failures\n");
  return all_pass ? 0 : 1;
}

int cmd_systole(const std::string& config_path, const std::string& point, const std::string& out_path,
                bool with_float) {
  RunConfig cfg = load_config(config_path);
  cfg.with_float = cfg.with_float || with_float;
  Point x = parse_point(point, 3);
  Weights w(cfg.lambda);
  auto rows = trajectory_profile(x[0], x[1], x[2], w, halving_grid(w, cfg.grid_exp));
  write_or_print(out_path, profile_to_csv(rows, cfg.with_float));
  return 0;
}

int cmd_badness(const std::string& config_path, const std::string& point, const std::string& z,
                long Q_override, bool with_float) {
  RunConfig cfg = load_config(config_path);
  cfg.with_float = cfg.with_float || with_float;
  Point xy = parse_point(point, 2);
  Rational zr = z.empty() ? rat(0) : rat_parse(z);
  long Q = Q_override > 0 ? Q_override : cfg.Q;
  PowExpr b = badness_constant(xy[0], xy[1], zr, Weights(cfg.lambda), Q);
  std::cout << "badness: " << powexpr_str(b);
  if (cfg.with_float) std::cout << " (~" << powexpr_approx(b) << ")";
  std::cout << "\n";
  return 0;
}

int cmd_dani(const std::string& config_path, const std::string& point, const std::string& out_path) {
  RunConfig cfg = load_config(config_path);
  Point x = parse_point(point, 3);
  Weights w(cfg.lambda);
  DaniReport r = dani_check(x[0], x[1], x[2], w, cfg.Q, halving_grid(w, cfg.grid_exp));
  write_or_print(out_path, dani_report_text(r));
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact game engine and verification toolkit for weighted badly-approximable sets"};
  app.require_subcommand(1);

  std::string config_path, out_path, point, suite = "all", zval;
  long Q_override = 0;
  bool with_float = false;

  auto* play = app.add_subcommand("play", "run the potential game: winning strategy vs configured Bob");
  play->add_option("--config", config_path, "key = value config file");
  play->add_option("--out", out_path, "transcript output path (jsonl)");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--config", config_path, "key = value config file");
  verify->add_option("--suite", suite, "suite name or 'all'")
      ->check(CLI::IsMember([] {
        auto v = bad3::suite_names();
        v.push_back("all");
        return v;
      }()));
  verify->add_option("--out", out_path, "report output path");

  auto* systole = app.add_subcommand("systole", "systole profile of the flow trajectory of a point");
  systole->add_option("--config", config_path, "key = value config file");
  systole->add_option("--point", point, "x,y,z as rationals")->required();
  systole->add_option("--out", out_path, "CSV output path");
  systole->add_flag("--float", with_float, "append approximate columns next to the exact ones");

  auto* badness = app.add_subcommand("badness", "exact finite-Q badness constant of a planar point");
  badness->add_option("--config", config_path, "key = value config file");
  badness->add_option("--point", point, "x,y as rationals")->required();
  badness->add_option("--z", zval, "shear coordinate (default 0)");
  badness->add_option("--Q", Q_override, "denominator bound override");
  badness->add_flag("--float", with_float, "append the approximate value");

  auto* dani = app.add_subcommand("dani", "truncated correspondence check for a point");
  dani->add_option("--config", config_path, "key = value config file");
  dani->add_option("--point", point, "x,y,z as rationals")->required();
  dani->add_option("--out", out_path, "report output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (play->parsed()) return cmd_play(config_path, out_path);
    if (verify->parsed()) return cmd_verify(config_path, suite, out_path);
    if (systole->parsed()) return cmd_systole(config_path, point, out_path, with_float);
    if (badness->parsed()) return cmd_badness(config_path, point, zval, Q_override, with_float);
    if (dani->parsed()) return cmd_dani(config_path, point, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
