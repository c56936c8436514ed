#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dyadic_forge/point_set.hpp"
#include "dyadic_forge/rational.hpp"
#include "dyadic_forge/wavelet.hpp"

namespace dyadic_forge {

// Positive nondecreasing w(n), n >= 1.
class MultiplierSequence {
 public:
  enum class Family { power, log, constant, table };

  static MultiplierSequence power(const Rational& p);         // n^p
  static MultiplierSequence log(const Rational& p);           // (1 + ln n)^p
  static MultiplierSequence constant(const Rational& v);
  static MultiplierSequence table(std::vector<Rational> v);   // last value repeats

  Family family() const { return family_; }
  const Rational& param() const { return p_; }
  const std::vector<Rational>& table_values() const { return table_; }

  // Exact for power with integer p, constant and table; otherwise rounded from long double.
  Rational value(long n) const;
  bool exact() const;
  // w(kl - nu0), clamped to n >= 1.
  Rational wbar(long k, const TruncationParams& p) const;

  // Closed-form certificate for sum 1/w(n).
  bool reciprocal_diverges() const;
  // Upper bound on sum_{n > N} 1/w(n) when convergent.
  std::optional<long double> reciprocal_tail_bound(long N) const;

  bool monotone_on(long n_max) const;
  std::string to_string() const;

 private:
  Family family_ = Family::constant;
  Rational p_ = 1;
  std::vector<Rational> table_;
};

// Subset of [0, 1): explicit, or translates of a pattern (see MeasSet::periodic).
class MeasSet {
 public:
  MeasSet() = default;
  static MeasSet explicit_set(PointSet s);
  // Union over j in [j_lo, j_hi] of (pattern + jP - 1) 2^-n; pattern inside [0, P).
  static MeasSet periodic(PointSet pattern, long n, long P, BigInt j_lo, BigInt j_hi);

  bool is_periodic() const { return periodic_; }
  Rational period() const;  // P 2^-n
  Rational measure_in(const Rational& lo, const Rational& hi) const;
  Rational measure() const { return measure_in(0, 1); }
  bool contains(const Rational& x) const;
  // Materialized parts; throws ResourceError beyond 2^20 translates.
  PointSet materialize() const;

 private:
  bool periodic_ = false;
  PointSet set_;
  long n_ = 0, P_ = 1;
  BigInt j_lo_ = 1, j_hi_ = 0;
  Rational pattern_measure_ = 0;
};

// Finite partition of [0, 1): explicit cells plus an optional run of equal translated cells.
struct CellPartition {
  std::vector<HalfOpen> cells;
  Rational start = 0, period = 0;
  BigInt count = 0;  // interior cells [start + i period, start + (i+1) period)

  static CellPartition explicit_cells(std::vector<HalfOpen> cells);
  // Cells U_{k,j} = [(j-1/2)h, (j+1/2)h) with h = 2^(nu0-kl), clipped to [0,1); the left sliver joins j = 1.
  static CellPartition ubar(long k, const TruncationParams& p);
  BigInt size() const { return BigInt(static_cast<unsigned long>(cells.size())) + count; }
  Rational mesh() const;
};

// ---- Lemma L9 square sum ----

struct XiSquareSum {
  long double lhs = 0;
  long double tail_bound = 0;
  Rational xi_l1;   // 2 / beta
  Rational c_xi;    // ||xi||_1^2 + 2 ||xi||_1
  long terms = 0;
  bool bound_ok = false;
};

XiSquareSum xi_square_sum_check(long n, const Rational& a, const Rational& beta);

// ---- coefficient fields ----

struct CoefficientBlock {
  long n = 0;
  BigInt j_lo, j_hi;
  Rational value;  // same a_{n,j} for every j in the block
};

struct CoefficientField {
  std::vector<CoefficientBlock> blocks;
  // a_{n,j} = f(n) for 1 <= j <= 2^n, n in [n_lo, n_hi].
  template <class F>
  static CoefficientField uniform(long n_lo, long n_hi, F&& f) {
    CoefficientField c;
    for (long n = n_lo; n <= n_hi; ++n)
      c.blocks.push_back({n, BigInt(1), BigInt(1) << static_cast<mp_bitcnt_t>(n), f(n)});
    return c;
  }
  // a_{n,j} = 1 / (w(n) 2^(n/2)) for n in [1, n_max], rounded to double precision at odd n.
  static CoefficientField majorant(const MultiplierSequence& w, long n_max);
  long max_scale() const;
  // sum a^2 w(n) over the window, exact when w is.
  Rational weighted_square_sum(const MultiplierSequence& w) const;
};

// ---- Theorem T1 ----

struct T1Point {
  Rational x;
  std::vector<long double> partial;  // cumulative by scale
  std::vector<long double> tail;     // partial(last) - partial(n)
  bool monotone = true;
};

struct T1Report {
  std::vector<long> scales;
  std::vector<T1Point> points;
  std::vector<long double> tail_integral;  // grid quadrature of the window tail over [0, 1)
  std::vector<long double> majorant;       // c sqrt(C_xi) (sum a^2 w)^(1/2) (sum 1/w)^(1/2) beyond each scale
  long double max_final_tail = 0;
  bool monotone = true;
  bool majorant_ok = true;
  bool ok() const { return monotone && majorant_ok; }
};

T1Report t1_abs_convergence_demo(const MultiplierSequence& w, const CoefficientField& coeffs, const WaveletSystem& sys,
                                 long grid_depth);

// ---- Abel-Dini ----

struct AbelDini {
  std::vector<Rational> q;
  std::vector<Rational> div_partial;   // sum 1/(wbar q)
  std::vector<Rational> conv_partial;  // sum 1/(wbar q^2)
  bool increasing = true;
  bool telescoping_ok = true;          // term_k <= 1/q_{k-1} - 1/q_k for k >= 2
};

AbelDini abel_dini(const std::vector<Rational>& wbar);

struct AbelDiniFloat {
  std::vector<long double> q, div_partial, conv_partial;
  bool increasing = true;
  bool telescoping_ok = true;
};

// Long double version for large windows; telescoping checked with tolerance 2^-30.
AbelDiniFloat abel_dini_float(const std::vector<long double>& wbar);

// ---- Theorem T4 ----

struct T4Coefficients {
  long K = 0;
  std::vector<Rational> wbar, q;
  std::vector<Rational> level_coeff;  // 1 / (wbar q): a_k 2^(kl/2)
  std::vector<Quad2> a;               // a_k = 2^(-kl/2) level_coeff
  Quad2 weighted_square_sum;          // sum_k |G_k| a_k^2 wbar
  Rational identity_rhs;              // 2^-nu0 sum 1/(wbar q^2)
  bool identity_ok = false;
};

T4Coefficients t4_coefficients(const MultiplierSequence& w, long K, const TruncationParams& p);

struct EkReport {
  MeasSet E;
  Rational first_cell, last_cell, interior_cell;  // relative measures |E ∩ U| / |U|
  Rational min_relative;
  bool covariance_ok = true;  // interior cells agree exactly
  bool bound_ok = true;       // |E ∩ U| >= kappa' 2^-kl on every cell
  long cells_checked = 0;
};

EkReport e_k_sets(long k, const TruncationParams& p, const WaveletSystem& sys, const Rational& kappa_prime);

struct L13Row {
  long K = 0;
  Rational min_cell, median_cell, max_cell;
};

struct L13Report {
  bool density_ok = true;
  std::optional<std::pair<long, std::string>> density_violation;
  bool monotone = true;
  std::vector<L13Row> rows;
  std::vector<std::pair<Rational, long>> thresholds;  // threshold, first K whose min cell sum exceeds it
  std::optional<long> crossed_at;                     // first K with min cell sum > threshold
  bool ok() const { return density_ok && monotone && crossed_at.has_value(); }
};

L13Report l13_divergence_check(const std::vector<CellPartition>& partitions, const std::vector<MeasSet>& E,
                               const std::vector<Rational>& a, const Rational& c, long grid_depth,
                               const Rational& threshold);

struct T4Options {
  long s_max = 3;
  long grid_depth = 16;
  long level_cap = 4;
  bool identity = false;      // report-only control ordering
  bool with_control = false;  // also compute the identity ordering
};

struct T4Row {
  long s = 0;
  std::vector<long> levels;
  Rational threshold;
  Rational measure;  // |{running max > s/8}|
  Rational min_cell_max, median_cell_max;
  bool chain_ok = true;  // 4 M >= sum|upper| - 4 sum|lower| at sampled points
  std::optional<Rational> control_measure;
};

struct T4Report {
  std::vector<T4Row> rows;
  bool identity = false;
  bool fractions_ok = true;
  bool slack_ok = true;
  bool chain_ok = true;
  bool ok() const { return fractions_ok && slack_ok && chain_ok; }
};

// Block levels by the sup budget: extend until sum_k sup|psi| / (wbar q_k) > s/8.
std::vector<std::vector<long>> t4_blocks(const T4Coefficients& coeffs, const WaveletSystem& sys, long s_max);

T4Report t4_rearranged_divergence_demo(const MultiplierSequence& w, const Calibration& cal, const WaveletSystem& sys,
                                       const T4Options& opt);

// ---- Corollary C2 ----

// a_n = n^-s (ln n)^-t for n >= 2.
struct RcFamily {
  Rational s = 1, t = 1;
  std::optional<long> single;  // only a_single nonzero
  long double a(long n) const;
  bool certificate() const;    // sum a_n^2 ln n < infinity
};

struct RcRow {
  long k = 0;
  long double sup = 0;
  long double l2_sq = 0;  // grid quadrature of delta_k^2
};

struct RcReport {
  std::vector<RcRow> rows;
  long double energy = 0;     // sum_k l2_sq
  long double budget = 0;     // sum a_n^2 ln n over the window
  long double constant = 0;   // 2 sup|psi|^2 / ln 2
  bool energy_ok = false;
  bool edge_ok = false;       // sup delta at the last k below tolerance
  bool ok() const { return energy_ok && edge_ok; }
};

RcReport rc_convergence_demo(const RcFamily& fam, const WaveletSystem& sys, long k_max, long grid_depth,
                             long double tolerance = 1e-2L);

}  // namespace dyadic_forge
