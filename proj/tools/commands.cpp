#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "dyadic_forge/dilation.hpp"
#include "dyadic_forge/errors.hpp"
#include "dyadic_forge/generators.hpp"
#include "dyadic_forge/json_io.hpp"
#include "dyadic_forge/series.hpp"
#include "dyadic_forge/stopping_time.hpp"
#include "dyadic_forge/tree.hpp"
#include "dyadic_forge/wavelet.hpp"

namespace dyadic_forge::cli {

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 3;

std::string fmt(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9Lg", x);
  return buf;
}

std::string fmt(const Rational& x) { return fmt(static_cast<long double>(x.get_d())); }
const char* yes(bool b) { return b ? "true" : "false"; }

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text_file(cfg.out, text);
  }
}

void emit(const RunConfig& cfg, const Json& j) { emit(cfg, j.dump(2) + "\n"); }

Format format_or(const RunConfig& cfg, Format fallback) { return cfg.format_given ? cfg.format : fallback; }

MotherWavelet load_mother(const std::string& path) {
  return path.empty() ? builtin_mother() : mother_from_json(read_json_file(path));
}

// "family[:param]", inline JSON, or a JSON file.
MultiplierSequence parse_multiplier(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') {
    try {
      return multiplier_from_json(Json::parse(spec));
    } catch (const Json::parse_error& e) {
      throw PreconditionError(std::string("multiplier: ") + e.what());
    }
  }
  if (std::ifstream(spec).good()) return multiplier_from_json(read_json_file(spec));
  const auto colon = spec.find(':');
  const std::string fam = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (fam == "power") return MultiplierSequence::power(parse_rational(arg.empty() ? "1" : arg));
  if (fam == "log") return MultiplierSequence::log(parse_rational(arg.empty() ? "1" : arg));
  if (fam == "constant") return MultiplierSequence::constant(parse_rational(arg.empty() ? "1" : arg));
  throw PreconditionError("unknown multiplier '" + spec + "'");
}

Calibration load_calibration(const RunConfig& cfg, const MotherWavelet& mother) {
  std::string path = cfg.calibration_path;
  if (path.empty())
    if (const char* env = std::getenv("DYADIC_FORGE_CALIBRATION")) path = env;
  if (path.empty())
    throw EnvironmentError("no calibration file: pass --calibration or set DYADIC_FORGE_CALIBRATION (see calibrate_lambda)");
  if (!std::ifstream(path).good()) throw EnvironmentError("calibration file '" + path + "' is not readable");
  Calibration cal = calibration_from_json(read_json_file(path));
  if (cal.mother_hash != mother_hash(mother))
    throw EnvironmentError("calibration was recorded for a different mother wavelet (hash " + cal.mother_hash + ")");
  return cal;
}

long smallest_level(std::size_t N) {
  long n = 1;
  while (n < 62 && (std::uint64_t{1} << n) < N) ++n;
  return n;
}

// Largest 2^-i not above x, i <= 40.
Rational power_floor(const Rational& x) {
  Rational p = 1;
  for (int i = 0; i < 40 && p > x; ++i) p /= 2;
  return p;
}

// Smallest 2^-i not below x, or 0 for x <= 0.
Rational power_ceil(const Rational& x) {
  if (x <= 0) return 0;
  Rational p = 1;
  while (p / 2 >= x) p /= 2;
  return p;
}

}  // namespace

int cmd_decompose(const RunConfig& cfg, const DecomposeArgs& a) {
  IntervalCollection U = collection_from_json(read_json_file(a.input));
  const long n = a.n.value_or(smallest_level(U.size()));
  SplitResult split = split_level(U, n);
  LayeredDecomposition dec = iterate_decomposition(U, n);
  if (format_or(cfg, Format::json) == Format::csv) {
    Csv csv({"layer", "m", "j", "left", "right"});
    for (std::size_t k = 0; k < dec.layers.size(); ++k)
      for (const auto& I : dec.layers[k].items)
        csv.row({std::to_string(k + 1), std::to_string(I.m), std::to_string(I.j), to_string(I.left()), to_string(I.right())});
    emit(cfg, csv.str());
  } else {
    emit(cfg, Json{{"n", n}, {"split", to_json(split)}, {"decomposition", to_json(dec)}});
  }
  return kOk;
}

int cmd_t3_sweep(const RunConfig& cfg, const T3Args& a) {
  const long trials = cfg.trials.value_or(100);
  const long depth = cfg.depth.value_or(10);
  if (trials < 1) throw PreconditionError("trials must be >= 1");
  if (depth < 2 || depth > 20) throw PreconditionError("sharpness depth must lie in [2, 20]");
  if (a.max_size < 2 || a.max_size > 4096) throw PreconditionError("max size must lie in [2, 4096]");

  Json rows = Json::array();
  bool ok = true;
  auto add = [&](const std::string& kind, long trial, std::size_t N, const std::string& lhs, const std::string& rhs,
                 long double ratio, long factor, bool row_ok) {
    ok = ok && row_ok;
    rows.push_back({{"kind", kind}, {"trial", trial}, {"N", N}, {"lhs_sq", lhs}, {"rhs_base", rhs},
                    {"ratio", fmt(ratio)}, {"factor", factor}, {"ok", row_ok}});
  };

  CollectionShape shape;
  shape.max_size = static_cast<std::size_t>(a.max_size);
  shape.min_scale = -6;
  shape.max_scale = 12;
  for (long t = 0; t < trials; ++t) {
    Rng rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    IntervalCollection U = random_collection(rng, shape);
    for (long m = 0; U.size() < 2; ++m) U.items.push_back({20 + m, 1});
    BoundReport b = haar_bound_report(U, random_coefficients(rng, U.size()));
    add("intervals", t, b.N, to_string(b.lhs_sq), to_string(b.rhs_base),
        static_cast<long double>(Rational(b.lhs_sq / b.rhs_base).get_d()), b.factor, b.bound_ok);

    Combination comb = random_combination(rng, static_cast<std::size_t>(std::min<long>(a.max_size, 64)), 6, 8);
    T3Report r = t3_report(comb);
    add("dilation", t, r.N, r.lhs_sq.to_string(), r.rhs_base.to_string(),
        static_cast<long double>(r.lhs_sq.to_double() / r.rhs_base.to_double()), r.factor, r.bound_ok);
  }
  for (long n = 2; n <= depth; ++n) {
    IntervalCollection U = full_tree(n);
    BoundReport b = haar_bound_report(U, std::vector<Rational>(U.size(), Rational(1)));
    const Rational ratio = b.lhs_sq / b.rhs_base;
    add("sharpness", n, b.N, to_string(b.lhs_sq), to_string(b.rhs_base), static_cast<long double>(ratio.get_d()),
        b.factor, b.bound_ok && ratio >= ceil_log2(b.N) - 1);
  }

  if (format_or(cfg, Format::csv) == Format::csv) {
    Csv csv({"kind", "trial", "N", "lhs_sq", "rhs_base", "ratio_float", "factor", "ok"});
    for (const auto& r : rows)
      csv.row({r["kind"], std::to_string(r["trial"].get<long>()), std::to_string(r["N"].get<std::size_t>()), r["lhs_sq"],
               r["rhs_base"], r["ratio"], std::to_string(r["factor"].get<long>()), yes(r["ok"].get<bool>())});
    emit(cfg, csv.str());
  } else {
    emit(cfg, Json{{"rows", rows}, {"ok", ok}});
  }
  return ok ? kOk : kViolation;
}

int cmd_t4_demo(const RunConfig& cfg, const T4Args& a) {
  if (a.permutation != "adversarial" && a.permutation != "identity")
    throw PreconditionError("--permutation must be adversarial or identity");
  MultiplierSequence w = parse_multiplier(a.multiplier);
  if (!w.reciprocal_diverges()) throw PreconditionError("sum 1/w(n) converges; the rearrangement demo needs divergence");
  WaveletSystem sys{load_mother(a.mother), Domain::unit_interval};
  Calibration cal = load_calibration(cfg, sys.mother);

  T4Options opt;
  opt.s_max = a.s_max;
  opt.grid_depth = cfg.depth.value_or(16);
  opt.level_cap = a.level_cap;
  opt.identity = a.permutation == "identity";
  opt.with_control = a.control;
  T4Report rep = t4_rearranged_divergence_demo(w, cal, sys, opt);

  if (format_or(cfg, Format::csv) == Format::csv) {
    std::vector<std::string> head = {"block_s", "threshold", "fraction", "fraction_float",
                                     "min_cell_max", "median_cell_max", "levels", "chain_ok"};
    if (opt.with_control) head.insert(head.end(), {"control_fraction", "control_float"});
    Csv csv(head);
    for (const auto& r : rep.rows) {
      std::string lv;
      for (long k : r.levels) lv += (lv.empty() ? "" : ";") + std::to_string(k);
      std::vector<std::string> cells = {std::to_string(r.s), to_string(r.threshold), to_string(r.measure), fmt(r.measure),
                                        fmt(r.min_cell_max), fmt(r.median_cell_max), lv, yes(r.chain_ok)};
      if (opt.with_control)
        cells.insert(cells.end(), {r.control_measure ? to_string(*r.control_measure) : "",
                                   r.control_measure ? fmt(*r.control_measure) : ""});
      csv.row(cells);
    }
    emit(cfg, csv.str());
  } else {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
      Json row = {{"block_s", r.s}, {"threshold", to_json(r.threshold)}, {"fraction", to_json(r.measure)},
                  {"min_cell_max", to_json(r.min_cell_max)}, {"median_cell_max", to_json(r.median_cell_max)},
                  {"levels", r.levels}, {"chain_ok", r.chain_ok}};
      if (r.control_measure) row["control_fraction"] = to_json(*r.control_measure);
      rows.push_back(row);
    }
    emit(cfg, Json{{"multiplier", to_json(w)}, {"permutation", a.permutation}, {"c0", to_json(cal.c0)},
                   {"slack", to_json(cal.slack)}, {"rows", rows}, {"fractions_ok", rep.fractions_ok},
                   {"slack_ok", rep.slack_ok}, {"chain_ok", rep.chain_ok}});
  }
  if (opt.identity) return kOk;
  return rep.ok() ? kOk : kViolation;
}

int cmd_haar_bound(const RunConfig& cfg, const HaarArgs& a) {
  Json in = read_json_file(a.input);
  IntervalCollection U = collection_from_json(in);
  std::vector<Rational> c(U.size(), Rational(1));
  if (in.is_object() && in.contains("c")) {
    if (!in["c"].is_array()) throw PreconditionError("json: 'c' must be an array");
    c.clear();
    for (const auto& x : in["c"]) c.push_back(rational_from_json(x));
  }
  BoundReport b = haar_bound_report(U, c);
  emit(cfg, Json{{"N", b.N}, {"lhs_sq", to_json(b.lhs_sq)}, {"rhs_base", to_json(b.rhs_base)}, {"factor", b.factor},
                 {"ratio_float", fmt(Rational(b.lhs_sq / b.rhs_base))}, {"bound_ok", b.bound_ok}});
  return b.bound_ok ? kOk : kViolation;
}

namespace {

struct TreeOutcome {
  Ordering order;
  OrderVerdict constraints;
  RearrangementReport bound;
};

TreeOutcome rearrange(const TreeSystem& sys, const std::string& how, Rng& rng) {
  TreeOutcome o;
  const std::size_t N = sys.nodes.size();
  if (how == "adversarial") {
    o.order = adversarial_permutation(sys);
  } else if (how == "identity" || how == "random") {
    o.order.resize(N);
    for (std::size_t i = 0; i < N; ++i) o.order[i] = i;
    if (how == "random") std::shuffle(o.order.begin(), o.order.end(), rng);
  } else {
    o.order = permutation_from_json(read_json_file(how), N);
  }
  o.constraints = verify_order_constraints(sys, o.order);
  o.bound = verify_rearrangement_bound(sys, o.order);
  return o;
}

}  // namespace

int cmd_tree_rearrange(const RunConfig& cfg, const TreeArgs& a) {
  const bool asserted = a.permutation == "adversarial";
  Rng rng(cfg.seed);
  if (!a.input.empty()) {
    TreeInput in = tree_from_json(read_json_file(a.input));
    if (in.nodes.empty()) throw PreconditionError("tree input has no nodes");
    TreeSystem sys = make_tree_system(in.nodes);
    TreeVerdict v = verify_tree_axioms(sys);
    if (!v.ok)
      throw PreconditionError("input is not a tree system: " + v.clause + " at (" + std::to_string(v.k) + "," +
                              std::to_string(v.n) + ")");
    TreeOutcome o = rearrange(sys, a.permutation, rng);
    Json j = {{"nodes", sys.nodes.size()},
              {"permutation", permutation_to_json(o.order)},
              {"order_ok", o.constraints.ok},
              {"order_clause", o.constraints.clause},
              {"bound_ok", o.bound.ok},
              {"prefix_ok", o.bound.prefix_ok},
              {"worst_ratio", fmt(o.bound.worst_ratio)},
              {"worst_prefix_ratio", fmt(o.bound.worst_prefix_ratio)}};
    if (o.bound.failing_x) j["failing_x"] = to_json(*o.bound.failing_x);
    emit(cfg, j);
    return !asserted || (o.constraints.ok && o.bound.ok && o.bound.prefix_ok) ? kOk : kViolation;
  }

  const long trials = cfg.trials.value_or(50);
  if (trials < 1) throw PreconditionError("trials must be >= 1");
  bool ok = true;
  Csv csv({"trial", "nodes", "order_ok", "bound_ok", "prefix_ok", "worst_ratio", "worst_prefix_ratio"});
  Json rows = Json::array();
  for (long t = 0; t < trials; ++t) {
    Rng trng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
    TreeInstance inst = random_tree_instance(trng, static_cast<std::size_t>(a.max_nodes));
    TreeSystem sys = build_tree(inst.F, inst.C, inst.entries);
    if (sys.nodes.empty()) continue;
    TreeOutcome o = rearrange(sys, a.permutation, trng);
    ok = ok && o.constraints.ok && o.bound.ok && o.bound.prefix_ok;
    csv.row({std::to_string(t), std::to_string(sys.nodes.size()), yes(o.constraints.ok), yes(o.bound.ok),
             yes(o.bound.prefix_ok), fmt(o.bound.worst_ratio), fmt(o.bound.worst_prefix_ratio)});
    rows.push_back({{"trial", t}, {"nodes", sys.nodes.size()}, {"order_ok", o.constraints.ok}, {"bound_ok", o.bound.ok},
                    {"prefix_ok", o.bound.prefix_ok}, {"worst_ratio", fmt(o.bound.worst_ratio)},
                    {"worst_prefix_ratio", fmt(o.bound.worst_prefix_ratio)}});
  }
  if (format_or(cfg, Format::csv) == Format::csv)
    emit(cfg, csv.str());
  else
    emit(cfg, Json{{"permutation", a.permutation}, {"rows", rows}, {"ok", ok}});
  return !asserted || ok ? kOk : kViolation;
}

int cmd_wavelet_check(const RunConfig& cfg, const WaveletArgs& a) {
  WaveletSystem sys{load_mother(a.mother), Domain::unit_interval};
  const long depth = cfg.depth.value_or(6);
  const long shifts = cfg.trials.value_or(16);
  if (depth < 0 || depth > 16) throw PreconditionError("depth must lie in [0, 16]");
  if (shifts < 1) throw PreconditionError("trials must be >= 1");

  AxiomReport ax = check_axioms(sys.mother, 4);
  Json j = {{"mother_hash", mother_hash(sys.mother)},
            {"axioms",
             {{"mean_zero", ax.mean_zero},
              {"integral", to_json(ax.integral)},
              {"size_ok", ax.size_ok},
              {"min_size_c", to_json(ax.min_size_c)},
              {"holder_ok", ax.holder_ok},
              {"holder_within_c", ax.holder_within_c},
              {"min_holder_c", ax.min_holder_c ? to_json(*ax.min_holder_c) : Json(nullptr)},
              {"failing_pair", ax.failing_pair}}}};
  if (!ax.ok()) {
    emit(cfg, j);
    return kViolation;
  }

  TruncationParams p;
  Rational c0 = 0;
  if (!cfg.calibration_path.empty() || std::getenv("DYADIC_FORGE_CALIBRATION")) {
    Calibration cal = load_calibration(cfg, sys.mother);
    p = cal.params();
    c0 = cal.c0;
  } else {
    LambdaChoice ch = choose_lambda(sys, parse_rational(a.epsilon));
    if (!ch.found) throw PropertyViolation("no admissible lambda down to 2^-40");
    p = ch.params;
  }
  j["params"] = {{"lambda", to_json(p.lambda)}, {"mu0", p.mu0}, {"nu0", p.nu0}, {"l", p.l}};

  bool ok = true;
  long sign_checks = 0, support_checks = 0;
  Rng rng(cfg.seed);
  for (long n = 0; n <= depth; ++n) {
    std::vector<Rational> taus = sample_shifts(rng, n, p.mu0 + 4, static_cast<std::size_t>(shifts));
    for (BigInt jj = 1; jj <= (BigInt(1) << static_cast<mp_bitcnt_t>(n)); ++jj)
      for (std::size_t i = 0; i < taus.size(); ++i) {
        const Rational support_tau = (i % 2 ? -1 : 1) * taus[i] * pow2(p.nu0 - 2);
        ok = ok && sign_preserving_truncation_check(n, jj, p.lambda, p.mu0, taus[i], sys);
        ok = ok && support_truncation_check(n, jj, p.lambda, p.nu0, support_tau, sys);
        ++sign_checks;
        ++support_checks;
      }
  }
  bool grid_ok = true;
  for (long k = 1; k <= 6; ++k) grid_ok = grid_ok && grid_identity_check(k, p);
  L12Report l12 = l12_measure_check(0, 2, {Rational(1), make_rational(1, 2)}, cfg.window_lo, cfg.window_hi, p, sys,
                                    c0 > 0 ? c0 : Rational(0));
  j["truncation"] = {{"sign_checks", sign_checks}, {"support_checks", support_checks}, {"ok", ok}};
  j["grid_identity_ok"] = grid_ok;
  j["l12"] = {{"window", {to_json(cfg.window_lo), to_json(cfg.window_hi)}},
              {"fraction", to_json(l12.fraction)},
              {"fraction_float", fmt(static_cast<long double>(l12.fraction_approx))},
              {"ok", l12.ok}};
  emit(cfg, j);
  return ok && grid_ok && (c0 == 0 || l12.ok) ? kOk : kViolation;
}

int cmd_calibrate_lambda(const RunConfig& cfg, const CalibrateArgs& a) {
  WaveletSystem sys{load_mother(a.mother), Domain::unit_interval};
  AxiomReport ax = check_axioms(sys.mother, 4);
  if (!ax.ok()) throw PropertyViolation("mother violates the wavelet axioms: " + ax.failing_pair);
  LambdaChoice ch = choose_lambda(sys, parse_rational(a.epsilon));
  if (!ch.found) throw PropertyViolation("no admissible lambda down to 2^-40");

  Calibration cal;
  cal.lambda = ch.lambda;
  cal.mu0 = ch.params.mu0;
  cal.nu0 = ch.params.nu0;
  cal.l = ch.params.l;
  cal.kappa = ch.kappa;
  cal.kappa_prime = ch.kappa_prime;
  cal.mother_hash = mother_hash(sys.mother);

  std::vector<Rational> fractions;
  L12Report one = l12_measure_check(0, 1, {Rational(1)}, 0, 1, ch.params, sys, 0);
  L12Report two = l12_measure_check(0, 2, {Rational(1), make_rational(1, 2)}, 0, 1, ch.params, sys, 0);
  // Quad2 fractions are bounded below by a rational at double precision.
  for (const auto& r : {one, two}) fractions.push_back(from_double(std::nextafter(r.fraction_approx, 0.0)));

  Calibration probe = cal;
  probe.c0 = pow2(-40);
  probe.slack = 1;
  T4Options opt;
  opt.grid_depth = cfg.depth.value_or(16);
  T4Report t4 = t4_rearranged_divergence_demo(MultiplierSequence::constant(1), probe, sys, opt);
  Rational max_drop = 0;
  for (std::size_t s = 0; s < t4.rows.size(); ++s) {
    fractions.push_back(t4.rows[s].measure);
    if (s > 0) max_drop = std::max(max_drop, Rational(t4.rows[s - 1].measure - t4.rows[s].measure));
  }
  cal.c0 = power_floor(*std::min_element(fractions.begin(), fractions.end()));
  cal.slack = power_ceil(max_drop);

  Json j = to_json(cal);
  Json t4_rows = Json::array();
  for (const auto& r : t4.rows) t4_rows.push_back(to_json(r.measure));
  j["measured"] = {{"epsilon", a.epsilon},
                   {"grid_depth", opt.grid_depth},
                   {"l12_fractions", {fmt(static_cast<long double>(one.fraction_approx)),
                                      fmt(static_cast<long double>(two.fraction_approx))}},
                   {"t4_fractions", t4_rows},
                   {"t4_max_drop", to_json(max_drop)}};
  emit(cfg, j);
  return kOk;
}

int cmd_t1_demo(const RunConfig& cfg, const T1Args& a) {
  MultiplierSequence w = parse_multiplier(a.multiplier);
  WaveletSystem sys{builtin_mother(), Domain::unit_interval};
  T1Report r = t1_abs_convergence_demo(w, CoefficientField::majorant(w, a.n_max), sys, cfg.depth.value_or(12));

  std::vector<long double> max_tail(r.scales.size(), 0);
  for (const auto& pt : r.points)
    for (std::size_t i = 0; i < pt.tail.size() && i < max_tail.size(); ++i) max_tail[i] = std::max(max_tail[i], pt.tail[i]);
  if (format_or(cfg, Format::csv) == Format::csv) {
    Csv csv({"scale", "tail_integral", "majorant", "max_point_tail"});
    for (std::size_t i = 0; i < r.scales.size(); ++i)
      csv.row({std::to_string(r.scales[i]), fmt(r.tail_integral[i]), fmt(r.majorant[i]), fmt(max_tail[i])});
    emit(cfg, csv.str());
  } else {
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.scales.size(); ++i)
      rows.push_back({{"scale", r.scales[i]}, {"tail_integral", fmt(r.tail_integral[i])}, {"majorant", fmt(r.majorant[i])},
                      {"max_point_tail", fmt(max_tail[i])}});
    emit(cfg, Json{{"multiplier", to_json(w)}, {"rows", rows}, {"monotone", r.monotone}, {"majorant_ok", r.majorant_ok}});
  }
  return r.ok() ? kOk : kViolation;
}

int cmd_rc_demo(const RunConfig& cfg, const RcArgs& a) {
  RcFamily fam;
  fam.s = parse_rational(a.s);
  fam.t = parse_rational(a.t);
  fam.single = a.single;
  WaveletSystem sys{builtin_mother(), Domain::unit_interval};
  RcReport r = rc_convergence_demo(fam, sys, a.k_max, cfg.depth.value_or(14));
  if (format_or(cfg, Format::csv) == Format::csv) {
    Csv csv({"k", "sup_delta", "l2_sq"});
    for (const auto& row : r.rows) csv.row({std::to_string(row.k), fmt(row.sup), fmt(row.l2_sq)});
    emit(cfg, csv.str());
  } else {
    Json rows = Json::array();
    for (const auto& row : r.rows) rows.push_back({{"k", row.k}, {"sup_delta", fmt(row.sup)}, {"l2_sq", fmt(row.l2_sq)}});
    emit(cfg, Json{{"rows", rows}, {"energy", fmt(r.energy)}, {"budget", fmt(r.budget)}, {"constant", fmt(r.constant)},
                   {"energy_ok", r.energy_ok}, {"edge_ok", r.edge_ok}});
  }
  return r.ok() ? kOk : kViolation;
}

}  // namespace dyadic_forge::cli
