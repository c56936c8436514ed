#include "dyadic_forge/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dyadic_forge/errors.hpp"
#include "dyadic_forge/tree.hpp"

namespace dyadic_forge {

namespace {

long double to_ld(const Rational& x) {
  return static_cast<long double>(x.get_num().get_d()) / static_cast<long double>(x.get_den().get_d());
}

Rational from_ld(long double v) { return from_double(static_cast<double>(v)); }

Rational median_of(std::vector<Rational> v) {
  if (v.empty()) return 0;
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// Reject sums whose last dyadic block shrinks faster than 3/4 of the previous one.
template <class T>
bool condensation_diverges(const std::vector<T>& q) {
  std::size_t K = q.size();
  if (K < 8) return true;
  auto at = [&](std::size_t k) { return q[k - 1]; };
  T last = at(K) - at(K / 2), prev = at(K / 2) - at(K / 4);
  return last * 4 >= prev * 3;
}

// Long double nodes of a piecewise linear function, for fast evaluation.
struct FastPL {
  std::vector<long double> xs, st, en;
  explicit FastPL(const PLFunction& f) {
    for (const auto& x : f.xs()) xs.push_back(to_ld(x));
    for (std::size_t i = 0; i < f.pieces(); ++i) {
      st.push_back(static_cast<long double>(f.start()[i].to_double()));
      en.push_back(static_cast<long double>(f.end()[i].to_double()));
    }
  }
  long double operator()(long double x) const {
    if (st.empty() || x < xs.front() || x >= xs.back()) return 0;
    auto i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    long double s = (x - xs[i]) / (xs[i + 1] - xs[i]);
    return st[i] + (en[i] - st[i]) * s;
  }
};

}  // namespace

// ---- MultiplierSequence ----

MultiplierSequence MultiplierSequence::power(const Rational& p) {
  if (p < 0) throw PreconditionError("power multiplier needs p >= 0");
  MultiplierSequence w;
  w.family_ = Family::power;
  w.p_ = p;
  return w;
}

MultiplierSequence MultiplierSequence::log(const Rational& p) {
  if (p < 0) throw PreconditionError("log multiplier needs p >= 0");
  MultiplierSequence w;
  w.family_ = Family::log;
  w.p_ = p;
  return w;
}

MultiplierSequence MultiplierSequence::constant(const Rational& v) {
  if (v <= 0) throw PreconditionError("constant multiplier must be positive");
  MultiplierSequence w;
  w.family_ = Family::constant;
  w.p_ = v;
  return w;
}

MultiplierSequence MultiplierSequence::table(std::vector<Rational> v) {
  if (v.empty()) throw PreconditionError("table multiplier needs values");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] <= 0) throw PreconditionError("multiplier values must be positive");
    if (i > 0 && v[i] < v[i - 1]) throw PreconditionError("multiplier table must be nondecreasing");
  }
  MultiplierSequence w;
  w.family_ = Family::table;
  w.table_ = std::move(v);
  return w;
}

bool MultiplierSequence::exact() const {
  switch (family_) {
    case Family::power: return p_.get_den() == 1;
    case Family::log: return p_ == 0;
    default: return true;
  }
}

Rational MultiplierSequence::value(long n) const {
  if (n < 1) throw PreconditionError("multipliers are indexed from n = 1");
  switch (family_) {
    case Family::power:
      if (p_.get_den() == 1) {
        BigInt r;
        mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(n), p_.get_num().get_ui());
        return Rational(r);
      }
      return from_ld(std::pow(static_cast<long double>(n), to_ld(p_)));
    case Family::log:
      if (p_ == 0) return 1;
      return from_ld(std::pow(1.0L + std::log(static_cast<long double>(n)), to_ld(p_)));
    case Family::constant: return p_;
    case Family::table:
      return static_cast<std::size_t>(n) <= table_.size() ? table_[static_cast<std::size_t>(n - 1)] : table_.back();
  }
  return 1;
}

Rational MultiplierSequence::wbar(long k, const TruncationParams& p) const {
  return value(std::max<long>(1, k * p.l - p.nu0));
}

bool MultiplierSequence::reciprocal_diverges() const { return family_ != Family::power || p_ <= 1; }

std::optional<long double> MultiplierSequence::reciprocal_tail_bound(long N) const {
  if (reciprocal_diverges()) return std::nullopt;
  long double p = to_ld(p_);
  long double n = static_cast<long double>(std::max<long>(N, 1));
  return std::pow(n, 1 - p) / (p - 1);
}

bool MultiplierSequence::monotone_on(long n_max) const {
  Rational prev = 0;
  for (long n = 1; n <= std::min<long>(n_max, 100000); ++n) {
    Rational v = value(n);
    if (v <= 0 || v < prev) return false;
    prev = v;
  }
  return true;
}

std::string MultiplierSequence::to_string() const {
  switch (family_) {
    case Family::power: return "power(" + dyadic_forge::to_string(p_) + ")";
    case Family::log: return "log(" + dyadic_forge::to_string(p_) + ")";
    case Family::constant: return "constant(" + dyadic_forge::to_string(p_) + ")";
    case Family::table: return "table(" + std::to_string(table_.size()) + ")";
  }
  return "?";
}

// ---- MeasSet ----

MeasSet MeasSet::explicit_set(PointSet s) {
  MeasSet m;
  m.set_ = s.clip(0, 1);
  return m;
}

MeasSet MeasSet::periodic(PointSet pattern, long n, long P, BigInt j_lo, BigInt j_hi) {
  if (P < 1) throw PreconditionError("period must be positive");
  if (!pattern.empty() && (pattern.parts().front().a < 0 || pattern.parts().back().b > P))
    throw PreconditionError("pattern must lie inside [0, P)");
  MeasSet m;
  m.periodic_ = true;
  m.set_ = std::move(pattern);
  m.n_ = n;
  m.P_ = P;
  m.j_lo_ = std::move(j_lo);
  m.j_hi_ = std::move(j_hi);
  m.pattern_measure_ = m.set_.measure();
  return m;
}

Rational MeasSet::period() const { return periodic_ ? Rational(P_) * pow2(-n_) : Rational(0); }

Rational MeasSet::measure_in(const Rational& lo, const Rational& hi) const {
  if (!(lo < hi)) return 0;
  if (!periodic_) return set_.measure_in(lo, hi);
  Rational A = lo * pow2(n_), B = hi * pow2(n_);
  Rational P(P_);
  BigInt j1 = std::max(j_lo_, BigInt(floor_of((A + 1) / P - 1) + 1));
  BigInt j2 = std::min(j_hi_, BigInt(ceil_of((B + 1) / P) - 1));
  if (j1 > j2) return 0;
  BigInt f1 = std::max(j1, BigInt(ceil_of((A + 1) / P)));
  BigInt f2 = std::min(j2, BigInt(floor_of((B + 1) / P - 1)));
  Rational total = 0;
  auto partial = [&](const BigInt& j) {
    Rational t(j * P_ - 1);
    total += set_.measure_in(A - t, B - t);
  };
  if (f1 > f2) {
    for (BigInt j = j1; j <= j2; ++j) partial(j);
  } else {
    for (BigInt j = j1; j < f1; ++j) partial(j);
    total += Rational(f2 - f1 + 1) * pattern_measure_;
    for (BigInt j = f2 + 1; j <= j2; ++j) partial(j);
  }
  return total * pow2(-n_);
}

bool MeasSet::contains(const Rational& x) const {
  if (!periodic_) return set_.contains_point(x);
  Rational s = x * pow2(n_);
  BigInt j = floor_of((s + 1) / P_);
  if (j < j_lo_ || j > j_hi_) return false;
  return set_.contains_point(s - Rational(j * P_ - 1));
}

PointSet MeasSet::materialize() const {
  if (!periodic_) return set_;
  if (j_hi_ - j_lo_ > (1L << 20)) throw ResourceError("periodic set has too many translates to materialize");
  std::vector<HalfOpen> parts;
  Rational h = pow2(-n_);
  for (BigInt j = j_lo_; j <= j_hi_; ++j) {
    Rational t(j * P_ - 1);
    for (const auto& p : set_.parts()) parts.push_back({(p.a + t) * h, (p.b + t) * h});
  }
  return PointSet::from_intervals(std::move(parts));
}

// ---- CellPartition ----

CellPartition CellPartition::explicit_cells(std::vector<HalfOpen> cells) {
  std::sort(cells.begin(), cells.end(), [](const HalfOpen& x, const HalfOpen& y) { return x.a < y.a; });
  Rational at = 0;
  for (const auto& c : cells) {
    if (c.a != at || !(c.a < c.b)) throw PreconditionError("cells must tile [0, 1) without gaps");
    at = c.b;
  }
  if (at != 1) throw PreconditionError("cells must tile [0, 1) without gaps");
  CellPartition P;
  P.cells = std::move(cells);
  return P;
}

CellPartition CellPartition::ubar(long k, const TruncationParams& p) {
  BigInt G = g_k_size(k, p);
  CellPartition P;
  if (G == 1) {
    P.cells.push_back({0, 1});
    return P;
  }
  Rational h = pow2(p.nu0 - k * p.l);
  Rational half = h / 2;
  P.cells.push_back({0, h + half});
  P.cells.push_back({1 - half, 1});
  if (G > 2) {
    P.start = h + half;
    P.period = h;
    P.count = G - 2;
  }
  return P;
}

Rational CellPartition::mesh() const {
  Rational m = count > 0 ? period : Rational(0);
  for (const auto& c : cells) m = std::max(m, Rational(c.b - c.a));
  return m;
}

// ---- Lemma L9 ----

XiSquareSum xi_square_sum_check(long n, const Rational& a, const Rational& beta) {
  if (beta <= 0 || beta > 1) throw PreconditionError("beta must lie in (0, 1]");
  if (a <= 0) throw PreconditionError("a must be positive");
  const BigInt &num = a.get_num(), &den = a.get_den();
  bool pow2_num = mpz_popcount(num.get_mpz_t()) == 1, pow2_den = mpz_popcount(den.get_mpz_t()) == 1;
  if (!pow2_num || !pow2_den) throw PreconditionError("a must be a power of two");
  long m = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  if (m < -n) throw PreconditionError("need a = 2^m with m >= -n");

  long double b = to_ld(beta);
  long double A = std::ldexp(1.0L, static_cast<int>(n + m));
  auto H = [b](long double x) { return (1 - std::pow(1 + x, -b)) / b; };  // x >= 0
  auto I = [&](long double j) {
    if (j <= A) return H(A - j) + H(A + j);
    return (std::pow(1 + j - A, -b) - std::pow(1 + j + A, -b)) / b;
  };
  auto tail = [&](long double J) {
    return 2 * 4 * A * A * std::pow(1 + J - A, -1 - 2 * b) / (1 + 2 * b) * std::ldexp(1.0L, static_cast<int>(-n));
  };
  long double J = std::ceil(A) + 16;
  while (tail(J) >= std::ldexp(1.0L, -40)) {
    J *= 2;
    if (J > std::ldexp(1.0L, 27)) throw ResourceError("xi square sum needs too many terms");
  }

  XiSquareSum r;
  long double s = I(0) * I(0);
  long long Jn = static_cast<long long>(J);
  for (long long j = 1; j <= Jn; ++j) {
    long double v = I(static_cast<long double>(j));
    s += 2 * v * v;
  }
  r.terms = static_cast<long>(2 * Jn + 1);
  r.lhs = s * std::ldexp(1.0L, static_cast<int>(-n));
  r.tail_bound = tail(J);
  r.xi_l1 = 2 / beta;
  r.c_xi = r.xi_l1 * r.xi_l1 + 2 * r.xi_l1;
  r.bound_ok = r.lhs + r.tail_bound <= to_ld(r.c_xi * a);
  return r;
}

// ---- coefficient fields and T1 ----

CoefficientField CoefficientField::majorant(const MultiplierSequence& w, long n_max) {
  if (n_max < 1 || n_max > 40) throw PreconditionError("n_max must lie in [1, 40]");
  CoefficientField c;
  for (long n = 1; n <= n_max; ++n) {
    Rational a = pow2(-(n / 2)) / w.value(n);
    if (n % 2 == 1) a = from_double(static_cast<double>(a.get_d() / std::sqrt(2.0)));
    c.blocks.push_back({n, BigInt(1), BigInt(1) << static_cast<mp_bitcnt_t>(n), a});
  }
  return c;
}

long CoefficientField::max_scale() const {
  long m = 0;
  for (const auto& b : blocks) m = std::max(m, b.n);
  return m;
}

Rational CoefficientField::weighted_square_sum(const MultiplierSequence& w) const {
  Rational s = 0;
  for (const auto& b : blocks) {
    if (b.j_hi < b.j_lo) continue;
    s += Rational(b.j_hi - b.j_lo + 1) * b.value * b.value * w.value(b.n);
  }
  return s;
}

T1Report t1_abs_convergence_demo(const MultiplierSequence& w, const CoefficientField& coeffs, const WaveletSystem& sys,
                                 long grid_depth) {
  if (w.reciprocal_diverges()) throw PreconditionError("sum 1/w(n) diverges; T1 needs a convergent certificate");
  if (grid_depth < 0 || grid_depth > 16) throw PreconditionError("grid depth must lie in [0, 16]");
  for (const auto& b : coeffs.blocks) {
    if (b.n < 1) throw PreconditionError("scales start at n = 1");
    if (b.n > 24 || b.j_hi - b.j_lo > (1L << 24)) throw ResourceError("coefficient window too large");
  }
  if (!w.monotone_on(coeffs.max_scale())) throw PreconditionError("multiplier must be positive nondecreasing");

  T1Report rep;
  for (const auto& b : coeffs.blocks) rep.scales.push_back(b.n);
  std::sort(rep.scales.begin(), rep.scales.end());
  rep.scales.erase(std::unique(rep.scales.begin(), rep.scales.end()), rep.scales.end());
  const std::size_t S = rep.scales.size();

  long double c = to_ld(sys.mother.c);
  long double beta = to_ld(sys.mother.beta);
  bool beta_one = sys.mother.beta == 1;
  auto xi_ld = [&](long double y) {
    long double t = 1 + std::fabs(y);
    return beta_one ? 1 / (t * t) : std::pow(t, -1 - beta);
  };

  long cells = 1L << grid_depth;
  rep.tail_integral.assign(S, 0);
  for (long i = 0; i < cells; ++i) {
    T1Point pt;
    pt.x = make_rational(2 * i + 1, 2 * cells);
    long double x = to_ld(pt.x);
    std::vector<long double> level(S, 0);
    for (const auto& b : coeffs.blocks) {
      auto si = static_cast<std::size_t>(std::lower_bound(rep.scales.begin(), rep.scales.end(), b.n) - rep.scales.begin());
      long double y = std::ldexp(x, static_cast<int>(b.n));
      long double acc = 0;
      for (long j = b.j_lo.get_si(); j <= b.j_hi.get_si(); ++j) acc += xi_ld(y - static_cast<long double>(j));
      level[si] += std::fabs(to_ld(b.value)) * c * std::sqrt(std::ldexp(1.0L, static_cast<int>(b.n))) * acc;
    }
    long double run = 0;
    for (std::size_t s = 0; s < S; ++s) {
      run += level[s];
      pt.partial.push_back(run);
    }
    for (std::size_t s = 0; s < S; ++s) {
      pt.tail.push_back(run - pt.partial[s]);
      if (s > 0 && (pt.tail[s] > pt.tail[s - 1] || pt.partial[s] < pt.partial[s - 1])) pt.monotone = false;
      rep.tail_integral[s] += pt.tail[s] / static_cast<long double>(cells);
    }
    if (!pt.monotone) rep.monotone = false;
    rep.max_final_tail = std::max(rep.max_final_tail, pt.tail.empty() ? 0.0L : pt.tail.back());
    rep.points.push_back(std::move(pt));
  }

  // Cauchy-Schwarz chain over [-1, 1] restricted to the window scales beyond each s.
  long double cxi = to_ld(Rational(2 / sys.mother.beta) * (2 / sys.mother.beta) + 4 / sys.mother.beta);
  for (std::size_t s = 0; s < S; ++s) {
    long double sq = 0, rec = 0;
    for (std::size_t t = s + 1; t < S; ++t) {
      long n = rep.scales[t];
      rec += 1 / to_ld(w.value(n));
      for (const auto& b : coeffs.blocks)
        if (b.n == n) sq += to_ld(Rational(b.j_hi - b.j_lo + 1) * b.value * b.value * w.value(n));
    }
    long double maj = c * std::sqrt(cxi) * std::sqrt(sq) * std::sqrt(rec);
    rep.majorant.push_back(maj);
    if (rep.tail_integral[s] > maj * (1 + 1e-12L)) rep.majorant_ok = false;
  }
  return rep;
}

// ---- Abel-Dini ----

AbelDini abel_dini(const std::vector<Rational>& wbar) {
  if (wbar.empty()) throw PreconditionError("need at least one multiplier value");
  for (std::size_t k = 0; k < wbar.size(); ++k) {
    if (wbar[k] <= 0) throw PreconditionError("multiplier values must be positive");
    if (k > 0 && wbar[k] < wbar[k - 1]) throw PreconditionError("multiplier values must be nondecreasing");
  }
  AbelDini r;
  Rational q = 0, d = 0, c = 0;
  for (std::size_t k = 0; k < wbar.size(); ++k) {
    q += 1 / wbar[k];
    Rational term = 1 / (wbar[k] * q);
    d += term;
    Rational t2 = term / q;
    c += t2;
    if (k > 0) {
      if (!(q > r.q.back())) r.increasing = false;
      if (t2 > 1 / r.q.back() - 1 / q) r.telescoping_ok = false;
    }
    r.q.push_back(q);
    r.div_partial.push_back(d);
    r.conv_partial.push_back(c);
  }
  if (!condensation_diverges(r.q)) throw PreconditionError("sum 1/wbar shows no divergence on the window");
  return r;
}

AbelDiniFloat abel_dini_float(const std::vector<long double>& wbar) {
  if (wbar.empty()) throw PreconditionError("need at least one multiplier value");
  AbelDiniFloat r;
  r.q.reserve(wbar.size());
  r.div_partial.reserve(wbar.size());
  r.conv_partial.reserve(wbar.size());
  const long double tol = std::ldexp(1.0L, -30);
  long double q = 0, d = 0, c = 0;
  for (std::size_t k = 0; k < wbar.size(); ++k) {
    if (!(wbar[k] > 0)) throw PreconditionError("multiplier values must be positive");
    if (k > 0 && wbar[k] < wbar[k - 1]) throw PreconditionError("multiplier values must be nondecreasing");
    q += 1 / wbar[k];
    long double term = 1 / (wbar[k] * q);
    d += term;
    c += term / q;
    if (k > 0) {
      if (!(q > r.q.back())) r.increasing = false;
      if (term / q > 1 / r.q.back() - 1 / q + tol) r.telescoping_ok = false;
    }
    r.q.push_back(q);
    r.div_partial.push_back(d);
    r.conv_partial.push_back(c);
  }
  if (r.conv_partial.back() - r.conv_partial.front() > 1 / r.q.front() + tol) r.telescoping_ok = false;
  if (!condensation_diverges(r.q)) throw PreconditionError("sum 1/wbar shows no divergence on the window");
  return r;
}

// ---- Theorem T4 ----

T4Coefficients t4_coefficients(const MultiplierSequence& w, long K, const TruncationParams& p) {
  if (K < 1) throw PreconditionError("K must be >= 1");
  if (!w.reciprocal_diverges()) throw PreconditionError("sum 1/w(n) converges; T4 needs the divergent regime");
  T4Coefficients r;
  r.K = K;
  for (long k = 1; k <= K; ++k) r.wbar.push_back(w.wbar(k, p));
  // Short windows cannot show divergence; the closed-form certificate above covers them.
  AbelDini ad = r.wbar.size() >= 8 ? abel_dini(r.wbar) : AbelDini{};
  if (r.wbar.size() < 8) {
    Rational q = 0;
    for (const auto& v : r.wbar) {
      if (!r.q.empty() && v < r.wbar[r.q.size() - 1]) throw PreconditionError("wbar must be nondecreasing");
      q += 1 / v;
      r.q.push_back(q);
    }
  } else {
    r.q = ad.q;
  }
  Rational rhs = 0;
  Quad2 lhs;
  for (long k = 1; k <= K; ++k) {
    const Rational& wb = r.wbar[static_cast<std::size_t>(k - 1)];
    const Rational& q = r.q[static_cast<std::size_t>(k - 1)];
    Rational lc = 1 / (wb * q);
    r.level_coeff.push_back(lc);
    Quad2 a = sqrt2_pow(-k * p.l) * lc;
    r.a.push_back(a);
    lhs += a * a * Rational(g_k_size(k, p)) * wb;
    rhs += 1 / (wb * q * q);
  }
  r.weighted_square_sum = lhs;
  r.identity_rhs = rhs * pow2(-p.nu0);
  r.identity_ok = lhs == Quad2(r.identity_rhs);
  return r;
}

EkReport e_k_sets(long k, const TruncationParams& p, const WaveletSystem& sys, const Rational& kappa_prime) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  if (sys.domain != Domain::unit_interval) throw PreconditionError("E_k sets live on the unit interval");
  PLFunction upper = sys.mother.pl().truncate(p.lambda).first;
  PointSet pattern = upper.level_set(p.lambda);
  long n = k * p.l;
  BigInt G = g_k_size(k, p);
  EkReport r;
  r.E = MeasSet::periodic(pattern, n, 1L << p.nu0, 1, G);

  CellPartition U = CellPartition::ubar(k, p);
  Rational floor_measure = kappa_prime * pow2(-n);
  bool first = true;
  auto visit = [&](const Rational& lo, const Rational& hi) {
    Rational in = r.E.measure_in(lo, hi);
    Rational rel = in / (hi - lo);
    if (first || rel < r.min_relative) r.min_relative = rel;
    first = false;
    if (in < floor_measure) r.bound_ok = false;
    ++r.cells_checked;
    return rel;
  };
  r.first_cell = visit(U.cells.front().a, U.cells.front().b);
  r.last_cell = U.cells.size() > 1 ? visit(U.cells.back().a, U.cells.back().b) : r.first_cell;
  if (U.count > 0) {
    auto cell = [&](const BigInt& i) {
      Rational a = U.start + Rational(i) * U.period;
      return visit(a, a + U.period);
    };
    r.interior_cell = cell(0);
    // Exhaustive up to 2^16 cells, otherwise both ends and an even stride.
    BigInt step = U.count <= 65536 ? BigInt(1) : BigInt(U.count / 4096);
    for (BigInt i = 1; i < U.count; i += step)
      if (cell(i) != r.interior_cell) r.covariance_ok = false;
    if (cell(U.count - 1) != r.interior_cell) r.covariance_ok = false;
  } else {
    r.interior_cell = r.first_cell;
  }
  return r;
}

L13Report l13_divergence_check(const std::vector<CellPartition>& partitions, const std::vector<MeasSet>& E,
                               const std::vector<Rational>& a, const Rational& c, long grid_depth,
                               const Rational& threshold) {
  const std::size_t K = partitions.size();
  if (K == 0 || E.size() != K || a.size() != K) throw PreconditionError("need matching partitions, sets and coefficients");
  if (grid_depth < 0 || grid_depth > 20) throw PreconditionError("grid depth must lie in [0, 20]");
  for (const auto& x : a)
    if (x <= 0) throw PreconditionError("coefficients must be positive");
  L13Report rep;

  for (std::size_t k = 0; k < K && rep.density_ok; ++k) {
    const auto& P = partitions[k];
    auto check = [&](const Rational& lo, const Rational& hi) {
      if (!rep.density_ok) return;
      if (E[k].measure_in(lo, hi) < c * (hi - lo)) {
        rep.density_ok = false;
        rep.density_violation = {static_cast<long>(k + 1), "[" + to_string(lo) + ", " + to_string(hi) + ")"};
      }
    };
    for (const auto& cell : P.cells) check(cell.a, cell.b);
    if (P.count == 0) continue;
    if (P.count <= 65536) {
      for (BigInt i = 0; i < P.count; ++i) check(P.start + Rational(i) * P.period, P.start + Rational(i + 1) * P.period);
    } else if (E[k].is_periodic() && E[k].period() == P.period) {
      // Translation covariance: interior cells see identical copies of the pattern.
      for (BigInt i : {BigInt(0), BigInt(1), BigInt(P.count / 2), BigInt(P.count - 2), BigInt(P.count - 1)})
        check(P.start + Rational(i) * P.period, P.start + Rational(i + 1) * P.period);
    } else {
      throw ResourceError("partition too large to check cell by cell");
    }
  }
  if (!rep.density_ok) return rep;

  const long cells = 1L << grid_depth;
  const Rational width = pow2(-grid_depth);
  std::vector<Rational> sum(static_cast<std::size_t>(cells), Rational(0));
  for (std::size_t k = 0; k < K; ++k) {
    for (long i = 0; i < cells; ++i) {
      Rational lo = Rational(i) * width;
      Rational add = a[k] * E[k].measure_in(lo, lo + width) / width;
      if (add < 0) rep.monotone = false;
      sum[static_cast<std::size_t>(i)] += add;
    }
    L13Row row;
    row.K = static_cast<long>(k + 1);
    row.min_cell = *std::min_element(sum.begin(), sum.end());
    row.max_cell = *std::max_element(sum.begin(), sum.end());
    row.median_cell = median_of(sum);
    if (!rep.rows.empty() && row.min_cell < rep.rows.back().min_cell) rep.monotone = false;
    if (!rep.crossed_at && row.min_cell > threshold) rep.crossed_at = row.K;
    rep.rows.push_back(std::move(row));
  }
  for (Rational t = make_rational(1, 4); t <= rep.rows.back().min_cell; t *= 2) {
    for (const auto& row : rep.rows)
      if (row.min_cell > t) {
        rep.thresholds.emplace_back(t, row.K);
        break;
      }
  }
  return rep;
}

std::vector<std::vector<long>> t4_blocks(const T4Coefficients& coeffs, const WaveletSystem& sys, long s_max) {
  if (s_max < 1) throw PreconditionError("need at least one block");
  Quad2 sup = sys.mother.pl().sup_abs();
  if (!sup.is_rational()) throw PreconditionError("mother values must be rational");
  std::vector<std::vector<long>> blocks;
  long k = 1;
  for (long s = 1; s <= s_max; ++s) {
    std::vector<long> levels;
    Rational budget = 0;
    Rational target = make_rational(s, 8);
    while (budget <= target) {
      if (k > coeffs.K)
        throw PreconditionError("block " + std::to_string(s) + " needs levels beyond the cap " + std::to_string(coeffs.K));
      budget += sup.a * coeffs.level_coeff[static_cast<std::size_t>(k - 1)];
      levels.push_back(k++);
    }
    blocks.push_back(std::move(levels));
  }
  return blocks;
}

namespace {

struct BlockEval {
  Rational measure = 0;
  Rational min_cell_max, median_cell_max;
  bool chain_ok = true;
};

// Appends the parts of [0, 1) where abs(v + (u - v)s) > t.
void above(const Rational& v, const Rational& u, const Rational& t, std::vector<std::pair<Rational, Rational>>& out) {
  std::vector<Rational> cut = {Rational(0)};
  Rational d = u - v;
  if (d != 0) {
    for (const Rational& level : {t, Rational(-t)}) {
      Rational s = (level - v) / d;
      if (s > 0 && s < 1) cut.push_back(s);
    }
  }
  std::sort(cut.begin(), cut.end());
  cut.push_back(1);
  for (std::size_t i = 0; i + 1 < cut.size(); ++i) {
    Rational mid = v + d * ((cut[i] + cut[i + 1]) / 2);
    if (::abs(mid) > t) out.emplace_back(cut[i], cut[i + 1]);
  }
}

Rational union_length(std::vector<std::pair<Rational, Rational>>& iv) {
  std::sort(iv.begin(), iv.end());
  Rational total = 0, a = 0, b = 0;
  bool open = false;
  for (const auto& [x, y] : iv) {
    if (open && x <= b) {
      b = std::max(b, y);
      continue;
    }
    if (open) total += b - a;
    a = x;
    b = y;
    open = true;
  }
  if (open) total += b - a;
  return total;
}

// pos[node] is the position of the node in the ordering; nodes are numbered by level, then j.
BlockEval evaluate_block(const std::vector<long>& levels, const std::vector<std::size_t>& pos, const T4Coefficients& co,
                         const TruncationParams& p, const PLFunction& mother, const PLFunction& upper,
                         const PLFunction& lower, const Rational& threshold, long depth, bool chain) {
  BlockEval ev;
  const long cells = 1L << depth;
  const Rational width = pow2(-depth);
  const long P = 1L << p.nu0;
  const Rational m_lo = mother.xs().front(), m_hi = mother.xs().back();
  std::vector<long> offset;
  long acc = 0;
  for (long k : levels) {
    offset.push_back(acc);
    acc += g_k_size(k, p).get_si();
  }
  std::vector<Rational> cell_max(static_cast<std::size_t>(cells));

  struct Item {
    std::size_t pos;
    Rational scale;  // 2^n
    Rational shift;
    Rational coeff;
  };
  // Value of item at x: right value, or left limit when left is set.
  auto value = [](const PLFunction& f, const Item& it, const Rational& x, bool left) -> Rational {
    Rational y = x * it.scale - it.shift;
    return (left ? f.left_limit(y) : f.eval(y)).a * it.coeff;
  };
  std::vector<Item> items;
  std::vector<Rational> xs;
  std::vector<std::pair<Rational, Rational>> iv;
  std::vector<std::pair<Rational, Rational>> vals;
  std::vector<std::vector<std::size_t>> active;
  for (long i = 0; i < cells; ++i) {
    Rational c0 = Rational(i) * width, c1 = c0 + width;
    items.clear();
    for (std::size_t li = 0; li < levels.size(); ++li) {
      long k = levels[li];
      long n = k * p.l;
      long G = g_k_size(k, p).get_si();
      Rational sc = pow2(n);
      long ja = std::max<long>(1, floor_of((c0 * sc - m_hi + 1) / P).get_si() + 1);
      long jb = std::min<long>(G, ceil_of((c1 * sc - m_lo + 1) / P).get_si() - 1);
      const Rational& coeff = co.level_coeff[static_cast<std::size_t>(k - 1)];
      for (long j = ja; j <= jb; ++j)
        items.push_back({pos[static_cast<std::size_t>(offset[li] + j - 1)], sc, Rational(j * P - 1), coeff});
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.pos < y.pos; });

    xs = {c0, c1};
    for (const auto& it : items)
      for (const auto& y : mother.xs()) {
        Rational x = (y + it.shift) / it.scale;
        if (x > c0 && x < c1) xs.push_back(x);
      }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // Sub-intervals covered by each item's support, filled in position order.
    const std::size_t pieces = xs.size() - 1;
    for (auto& a : active) a.clear();
    active.resize(pieces);
    for (std::size_t t = 0; t < items.size(); ++t) {
      const auto& it = items[t];
      Rational xa = (m_lo + it.shift) / it.scale, xb = (m_hi + it.shift) / it.scale;
      auto s0 = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), xa) - xs.begin());
      s0 = s0 == 0 ? 0 : s0 - 1;
      for (std::size_t s = s0; s < pieces && xs[s] < xb; ++s) active[s].push_back(t);
    }

    Rational best = 0, measure = 0;
    for (std::size_t s = 0; s < pieces; ++s) {
      const Rational &x0 = xs[s], &x1 = xs[s + 1];
      vals.clear();
      for (std::size_t t : active[s]) {
        Rational v = value(mother, items[t], x0, false), u = value(mother, items[t], x1, true);
        if (v != 0 || u != 0) vals.emplace_back(std::move(v), std::move(u));
      }
      iv.clear();
      Rational v = 0, u = 0;
      for (const auto& [a, b] : vals) {
        v += a;
        u += b;
        best = std::max({best, Rational(::abs(v)), Rational(::abs(u))});
        above(v, u, threshold, iv);
      }
      measure += union_length(iv) * (x1 - x0);
    }

    if (chain) {
      for (const Rational& x : {c0, Rational(c0 + width / 2)}) {
        Rational S = 0, M = 0, up = 0, lo = 0;
        for (const auto& it : items) {
          S += value(mother, it, x, false);
          M = std::max(M, Rational(::abs(S)));
          up += ::abs(value(upper, it, x, false));
          lo += ::abs(value(lower, it, x, false));
        }
        if (4 * M < up - 4 * lo) ev.chain_ok = false;
      }
    }
    ev.measure += measure;
    cell_max[static_cast<std::size_t>(i)] = best;
  }
  ev.min_cell_max = *std::min_element(cell_max.begin(), cell_max.end());
  ev.median_cell_max = median_of(std::move(cell_max));
  return ev;
}

std::vector<std::size_t> identity_positions(std::size_t N) {
  std::vector<std::size_t> pos(N);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  return pos;
}

}  // namespace

T4Report t4_rearranged_divergence_demo(const MultiplierSequence& w, const Calibration& cal, const WaveletSystem& sys,
                                       const T4Options& opt) {
  if (opt.grid_depth < 1 || opt.grid_depth > 20) throw PreconditionError("grid depth must lie in [1, 20]");
  if (cal.c0 <= 0) throw PreconditionError("calibration constant c0 must be positive");
  TruncationParams p = cal.params();
  if (opt.level_cap * p.l > 40) throw ResourceError("level cap too large for desk-scale evaluation");
  T4Coefficients co = t4_coefficients(w, opt.level_cap, p);
  auto blocks = t4_blocks(co, sys, opt.s_max);

  PLFunction mother = sys.mother.pl();
  auto [upper, lower] = mother.truncate(p.lambda);

  T4Report rep;
  rep.identity = opt.identity;
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    const auto& lv = blocks[s];
    std::size_t N = 0;
    for (long k : lv) N += g_k_size(k, p).get_ui();
    T4Row row;
    row.s = static_cast<long>(s + 1);
    row.levels = lv;
    row.threshold = make_rational(row.s, 8);

    std::vector<std::size_t> pos;
    if (opt.identity) {
      pos = identity_positions(N);
    } else {
      PsiTree tree = psi_tree(lv.front(), lv.back(), p, sys);
      Ordering order = adversarial_permutation(tree.system);
      pos.assign(N, 0);
      for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    }
    BlockEval ev = evaluate_block(lv, pos, co, p, mother, upper, lower, row.threshold, opt.grid_depth, !opt.identity);
    row.measure = ev.measure;
    row.min_cell_max = ev.min_cell_max;
    row.median_cell_max = ev.median_cell_max;
    row.chain_ok = ev.chain_ok;
    if (opt.with_control && !opt.identity) {
      BlockEval ctl = evaluate_block(lv, identity_positions(N), co, p, mother, upper, lower, row.threshold,
                                     opt.grid_depth, false);
      row.control_measure = ctl.measure;
    }
    if (row.measure < cal.c0) rep.fractions_ok = false;
    if (!row.chain_ok) rep.chain_ok = false;
    if (!rep.rows.empty() && row.measure < rep.rows.back().measure - cal.slack) rep.slack_ok = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---- Corollary C2 ----

long double RcFamily::a(long n) const {
  if (single) return n == *single ? 1.0L : 0.0L;
  if (n < 2) return 0;
  long double x = static_cast<long double>(n);
  return std::pow(x, -to_ld(s)) * std::pow(std::log(x), -to_ld(t));
}

bool RcFamily::certificate() const {
  if (single) return true;
  return 2 * s > 1 || (2 * s == 1 && 2 * t > 2);
}

RcReport rc_convergence_demo(const RcFamily& fam, const WaveletSystem& sys, long k_max, long grid_depth,
                             long double tolerance) {
  if (!fam.certificate()) throw PreconditionError("sum a_n^2 log n diverges for this family");
  if (sys.domain != Domain::unit_interval) throw PreconditionError("natural ordering needs the unit-interval system");
  if (k_max < 0 || k_max > 20) throw PreconditionError("k_max must lie in [0, 20]");
  if (grid_depth < k_max + 1 || grid_depth > 20) throw PreconditionError("grid depth must lie in [k_max + 1, 20]");
  PLFunction mother = sys.mother.pl();
  FastPL psi(mother);
  long double s_lo = psi.xs.front(), s_hi = psi.xs.back();

  RcReport rep;
  for (long n = 2; n <= (2L << k_max); ++n) {
    long double v = fam.a(n);
    rep.budget += v * v * std::log(static_cast<long double>(n));
  }
  long double sup_psi = static_cast<long double>(mother.sup_abs().to_double());
  rep.constant = 8 * sup_psi * sup_psi / std::log(2.0L);

  const long cells = 1L << grid_depth;
  // phi_n with n = 2^k + j - 1 is phi_{k,j}; value at x.
  auto term = [&](long n, long double x) {
    long k = 63 - __builtin_clzl(static_cast<unsigned long>(n));
    long j = n - (1L << k) + 1;
    long double y = std::ldexp(x, static_cast<int>(k)) - static_cast<long double>(j - 1);
    return fam.a(n) * std::sqrt(std::ldexp(1.0L, static_cast<int>(k))) * psi(y);
  };
  for (long k = 0; k <= k_max; ++k) {
    RcRow row;
    row.k = k;
    long first = 1L << k, last = 2L << k;
    for (long i = 0; i < cells; ++i) {
      long double x = (static_cast<long double>(i) + 0.5L) / static_cast<long double>(cells);
      // Nonzero level-k terms at x, then the first term of level k + 1.
      long double y = std::ldexp(x, static_cast<int>(k));
      long ja = std::max<long>(1, static_cast<long>(std::floor(y - s_hi)) + 1);
      long jb = std::min<long>(1L << k, static_cast<long>(std::ceil(y - s_lo)) + 1);
      std::vector<long> idx = {first, last};
      for (long j = ja; j <= jb; ++j) idx.push_back(first + j - 1);
      std::sort(idx.begin(), idx.end());
      idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
      long double cum = 0, best = 0;
      for (std::size_t t = 0; t < idx.size(); ++t) {
        cum += term(idx[t], x);
        // This prefix value holds for m in [idx[t], idx[t+1]); only m > first counts.
        long reach = t + 1 < idx.size() ? idx[t + 1] - 1 : last;
        if (reach > first) best = std::max(best, std::fabs(cum));
      }
      row.sup = std::max(row.sup, best);
      row.l2_sq += best * best / static_cast<long double>(cells);
    }
    rep.energy += row.l2_sq;
    rep.rows.push_back(row);
  }
  rep.energy_ok = rep.energy <= rep.constant * rep.budget;
  rep.edge_ok = rep.rows.back().sup < tolerance;
  return rep;
}

}  // namespace dyadic_forge
