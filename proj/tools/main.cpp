#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "dyadic_forge/errors.hpp"

using namespace dyadic_forge;
using namespace dyadic_forge::cli;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, std::string& window, std::string& format) {
  sub->add_option("--seed", cfg.seed, "Seed for all randomized inputs");
  sub->add_option("--trials", cfg.trials, "Number of trials or samples");
  sub->add_option("--depth", cfg.depth, "Grid or scale depth");
  sub->add_option("--window", window, "Window lo,hi as rationals");
  sub->add_option("--calibration", cfg.calibration_path, "Calibration JSON");
  sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", cfg.out, "Output path (default stdout)");
}

void finish_common(RunConfig& cfg, const std::string& window, const std::string& format) {
  if (!format.empty()) {
    cfg.format = format == "csv" ? Format::csv : Format::json;
    cfg.format_given = true;
  }
  if (!window.empty()) {
    auto comma = window.find(',');
    if (comma == std::string::npos) throw PreconditionError("--window needs lo,hi");
    cfg.window_lo = parse_rational(window.substr(0, comma));
    cfg.window_hi = parse_rational(window.substr(comma + 1));
    if (!(cfg.window_lo < cfg.window_hi)) throw PreconditionError("--window needs lo < hi");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic stopping-time, tree-rearrangement and wavelet-series verification driver"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string window, format;

  DecomposeArgs dec;
  auto* s_dec = app.add_subcommand("decompose", "Stopping-time split and layered decomposition of a collection");
  s_dec->add_option("input", dec.input, "Collection JSON")->required();
  s_dec->add_option("-n,--n", dec.n, "Level parameter n (level 2n)");

  T3Args t3;
  auto* s_t3 = app.add_subcommand("t3_sweep", "Seeded sweep of the square-function bound with sharpness rows");
  s_t3->add_option("--max-size", t3.max_size, "Largest random collection");

  T4Args t4;
  auto* s_t4 = app.add_subcommand("t4_demo", "Rearranged divergence growth report");
  s_t4->add_option("--multiplier", t4.multiplier, "family[:param], inline JSON or JSON file");
  s_t4->add_option("--s-max", t4.s_max, "Number of blocks");
  s_t4->add_option("--level-cap", t4.level_cap, "Highest level k");
  s_t4->add_option("--permutation", t4.permutation, "adversarial or identity (report only)");
  s_t4->add_flag("--control", t4.control, "Also measure the identity ordering");
  s_t4->add_option("--mother", t4.mother, "Mother wavelet JSON");

  HaarArgs hb;
  auto* s_hb = app.add_subcommand("haar_bound", "Exact indicator-sum norm bound for one collection");
  s_hb->add_option("input", hb.input, "Collection JSON with optional \"c\"")->required();

  TreeArgs tr;
  auto* s_tr = app.add_subcommand("tree_rearrange", "Tree system rearrangement bound");
  s_tr->add_option("input", tr.input, "Tree JSON; omitted runs a seeded sweep of built trees");
  s_tr->add_option("--permutation", tr.permutation, "adversarial, identity, random or a permutation JSON file");
  s_tr->add_option("--max-nodes", tr.max_nodes, "Node cap for random trees");

  WaveletArgs wc;
  auto* s_wc = app.add_subcommand("wavelet_check", "Mother axioms, truncation checks and grid identity");
  s_wc->add_option("--mother", wc.mother, "Mother wavelet JSON");
  s_wc->add_option("--epsilon", wc.epsilon, "Epsilon for the lambda scan");

  CalibrateArgs cl;
  auto* s_cl = app.add_subcommand("calibrate_lambda", "Measure and record the calibration constants");
  s_cl->add_option("--mother", cl.mother, "Mother wavelet JSON");
  s_cl->add_option("--epsilon", cl.epsilon, "Epsilon for the lambda scan");

  T1Args t1;
  auto* s_t1 = app.add_subcommand("t1_demo", "Absolute convergence tails under a convergent multiplier");
  s_t1->add_option("--multiplier", t1.multiplier, "family[:param], inline JSON or JSON file");
  s_t1->add_option("--n-max", t1.n_max, "Largest scale");

  RcArgs rc;
  auto* s_rc = app.add_subcommand("rc_demo", "Dyadic block maxima in the natural ordering");
  s_rc->add_option("--s", rc.s, "Exponent s of a_n = n^-s (ln n)^-t");
  s_rc->add_option("--t", rc.t, "Exponent t");
  s_rc->add_option("--single", rc.single, "Only a_single nonzero");
  s_rc->add_option("--k-max", rc.k_max, "Largest block index");

  for (auto* sub : app.get_subcommands({})) add_common(sub, cfg, window, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    finish_common(cfg, window, format);
    if (cfg.trials && *cfg.trials < 1) throw PreconditionError("--trials must be >= 1");
    if (*s_dec) return cmd_decompose(cfg, dec);
    if (*s_t3) return cmd_t3_sweep(cfg, t3);
    if (*s_t4) return cmd_t4_demo(cfg, t4);
    if (*s_hb) return cmd_haar_bound(cfg, hb);
    if (*s_tr) return cmd_tree_rearrange(cfg, tr);
    if (*s_wc) return cmd_wavelet_check(cfg, wc);
    if (*s_cl) return cmd_calibrate_lambda(cfg, cl);
    if (*s_t1) return cmd_t1_demo(cfg, t1);
    if (*s_rc) return cmd_rc_demo(cfg, rc);
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const PropertyViolation& e) {
    std::cerr << "violation: " << e.what() << "\n";
    return 3;
  } catch (const EnvironmentError& e) {
    std::cerr << "environment: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
