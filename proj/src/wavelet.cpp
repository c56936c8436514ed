#include "dyadic_forge/wavelet.hpp"

#include <algorithm>
#include <cmath>

#include "dyadic_forge/errors.hpp"

namespace dyadic_forge {

namespace {

long double to_ld(const Rational& x) {
  return static_cast<long double>(x.get_num().get_d()) / static_cast<long double>(x.get_den().get_d());
}

std::optional<BigInt> exact_root(const BigInt& v, unsigned long q) {
  BigInt r;
  if (mpz_root(r.get_mpz_t(), v.get_mpz_t(), q) == 0) return std::nullopt;
  return r;
}

Rational rpow(const Rational& x, unsigned long e) {
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), x.get_num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), x.get_den().get_mpz_t(), e);
  return make_rational(n, d);
}

void require_exponent(const Rational& e, const char* name) {
  if (e <= 0 || e > 1) throw PreconditionError(std::string(name) + " must lie in (0, 1]");
}

unsigned long ul(const BigInt& z) {
  if (!z.fits_ulong_p()) throw PreconditionError("exponent too large");
  return z.get_ui();
}

void validate_mother(const MotherWavelet& m) {
  if (m.breakpoints.size() != m.values.size() || m.breakpoints.size() < 2)
    throw PreconditionError("mother wavelet needs matching breakpoints and values");
  if (m.c <= 0) throw PreconditionError("mother constant c must be positive");
  require_exponent(m.alpha, "alpha");
  require_exponent(m.beta, "beta");
}

// Mother truncations at lambda, cached per call site.
struct TruncationCache {
  bool valid = false;
  std::vector<Rational> breakpoints, values;
  Rational lambda;
  std::pair<PLFunction, PLFunction> parts;
  PointSet positive, negative, support;
};

// Sweeps call this once per (n, j, tau) with the same mother and lambda.
const TruncationCache& cached_truncation(const WaveletSystem& sys, const Rational& lambda) {
  if (lambda <= 0) throw PreconditionError("lambda must be positive");
  thread_local TruncationCache c;
  if (c.valid && c.lambda == lambda && c.breakpoints == sys.mother.breakpoints && c.values == sys.mother.values) return c;
  c.valid = false;
  c.parts = sys.mother.pl().truncate(lambda);
  c.positive = c.parts.first.positive_set();
  c.negative = c.parts.first.negative_set();
  c.support = c.parts.first.support();
  c.breakpoints = sys.mother.breakpoints;
  c.values = sys.mother.values;
  c.lambda = lambda;
  c.valid = true;
  return c;
}

std::pair<PLFunction, PLFunction> mother_truncation(const WaveletSystem& sys, const Rational& lambda) {
  return cached_truncation(sys, lambda).parts;
}

// [first cell, last cell] of each part of S on the grid tau + D_m.
std::vector<std::pair<BigInt, BigInt>> grid_ranges(const PointSet& S, long m, const Rational& tau) {
  std::vector<std::pair<BigInt, BigInt>> out;
  Rational s = pow2(m);
  for (const auto& p : S.parts()) out.emplace_back(floor_of((p.a - tau) * s) + 1, ceil_of((p.b - tau) * s));
  return out;
}

PointSet map_set(const PointSet& S, long n, const Rational& shift) {
  std::vector<HalfOpen> parts;
  Rational h = pow2(-n);
  for (const auto& p : S.parts()) parts.push_back({(p.a + shift) * h, (p.b + shift) * h});
  return PointSet::from_intervals(std::move(parts));
}

}  // namespace

XiValue xi(const Rational& x, const Rational& beta) {
  require_exponent(beta, "beta");
  Rational base = 1 + ::abs(x);
  XiValue r;
  r.approx = std::pow(to_ld(base), -(1.0L + to_ld(beta)));
  // base^(1 + p/q) is rational iff base is a q-th power.
  unsigned long p = ul(beta.get_num()), q = ul(beta.get_den());
  auto rn = exact_root(base.get_num(), q), rd = exact_root(base.get_den(), q);
  if (rn && rd) r.exact = 1 / rpow(make_rational(*rn, *rd), p + q);
  return r;
}

PLFunction MotherWavelet::pl() const {
  validate_mother(*this);
  std::vector<Quad2> ys(values.begin(), values.end());
  return PLFunction::from_nodes(breakpoints, ys);
}

MotherWavelet builtin_mother() {
  MotherWavelet m;
  m.breakpoints = {0, make_rational(1, 4), make_rational(3, 4), 1};
  m.values = {0, 1, -1, 0};
  m.c = 4;
  m.alpha = 1;
  m.beta = 1;
  return m;
}

MotherWavelet haar_mother() {
  MotherWavelet m;
  m.breakpoints = {0, 0, make_rational(1, 2), make_rational(1, 2), 1, 1};
  m.values = {0, 1, 1, -1, -1, 0};
  m.c = 4;
  m.alpha = 1;
  m.beta = 1;
  return m;
}

bool in_index_set(long n, const BigInt& j, const WaveletSystem& sys) {
  if (n < 0) return false;
  if (sys.domain == Domain::real_line) return true;
  if (n > 4096) return false;
  return j >= 1 && j <= (BigInt(1) << static_cast<mp_bitcnt_t>(n));
}

PLFunction phi(long n, const BigInt& j, const WaveletSystem& sys) {
  if (!in_index_set(n, j, sys))
    throw PreconditionError("index (" + std::to_string(n) + ", " + j.get_str() + ") outside the system");
  return sys.mother.pl().affine(n, Rational(j - 1), sqrt2_pow(n));
}

AxiomReport check_axioms(const MotherWavelet& mother, long depth) {
  validate_mother(mother);
  if (depth < 0) throw PreconditionError("depth must be nonnegative");
  AxiomReport rep;
  PLFunction f = mother.pl();
  Quad2 I = f.integral();
  rep.integral = I.a;
  rep.mean_zero = I.is_zero();

  const auto& xs = mother.breakpoints;
  const auto& vs = mother.values;
  std::vector<XiValue> xis;
  for (const auto& x : xs) xis.push_back(xi(x, mother.beta));

  // Dilations rescale both sides by 2^(n/2), so every n <= depth reduces to the mother's nodes.
  rep.size_ok = true;
  rep.min_size_c = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Rational need = xis[i].exact ? ::abs(vs[i]) / *xis[i].exact
                                 : from_double(static_cast<double>(to_ld(::abs(vs[i])) / xis[i].approx));
    rep.min_size_c = std::max(rep.min_size_c, need);
  }
  rep.size_ok = rep.min_size_c <= mother.c;

  rep.holder_ok = true;
  Rational best_exact = 0;
  long double best = 0;
  bool exact = mother.alpha == 1;
  bool jump = false;
  for (std::size_t i = 0; i < xs.size() && !jump; ++i) {
    for (std::size_t k = i + 1; k < xs.size(); ++k) {
      Rational d = xs[k] - xs[i];
      if (d > 1) break;
      Rational dv = ::abs(vs[k] - vs[i]);
      if (dv == 0) continue;
      std::string pair = "(" + to_string(xs[i]) + ", " + to_string(xs[k]) + ")";
      if (d == 0) {
        jump = true;
        rep.holder_ok = false;
        rep.failing_pair = pair;
        break;
      }
      long double den_ld = std::pow(to_ld(d), to_ld(mother.alpha)) * std::max(xis[i].approx, xis[k].approx);
      long double r = to_ld(dv) / den_ld;
      if (exact && xis[i].exact && xis[k].exact) {
        Rational re = dv / (d * std::max(*xis[i].exact, *xis[k].exact));
        if (re > best_exact) best_exact = re;
        if (re > mother.c && rep.failing_pair.empty()) rep.failing_pair = pair;
      } else {
        exact = false;
        if (r > to_ld(mother.c) * (1 + 1e-15L) && rep.failing_pair.empty()) rep.failing_pair = pair;
      }
      best = std::max(best, r);
    }
  }
  if (!jump) {
    rep.min_holder_c_approx = best;
    rep.min_holder_c = exact ? best_exact : from_double(static_cast<double>(best));
    rep.holder_within_c = *rep.min_holder_c <= mother.c;
  } else {
    rep.min_holder_c_approx = INFINITY;
  }
  return rep;
}

std::pair<PLFunction, PLFunction> truncate(long n, const BigInt& j, const Rational& lambda, const WaveletSystem& sys) {
  if (!in_index_set(n, j, sys))
    throw PreconditionError("index (" + std::to_string(n) + ", " + j.get_str() + ") outside the system");
  auto [up, lo] = mother_truncation(sys, lambda);
  Rational shift = Rational(j - 1);
  Quad2 s = sqrt2_pow(n);
  return {up.affine(n, shift, s), lo.affine(n, shift, s)};
}

TruncationParams derive_constants(const Rational& c, const Rational& alpha, const Rational& beta,
                                  const Rational& lambda) {
  if (c <= 0 || lambda <= 0) throw PreconditionError("c and lambda must be positive");
  require_exponent(alpha, "alpha");
  require_exponent(beta, "beta");
  Rational r = c / lambda;
  TruncationParams p;
  p.lambda = lambda;

  // 2^mu0 > r^(q/p) with alpha = p/q.
  unsigned long ap = ul(alpha.get_num()), aq = ul(alpha.get_den());
  Rational rq = rpow(r, aq);
  p.mu0 = 1;
  while (pow2(p.mu0 * static_cast<long>(ap)) <= rq) ++p.mu0;

  // 2^(nu0+2) > r^(q'/(p'+q')) with beta = p'/q'.
  unsigned long bp = ul(beta.get_num()), bq = ul(beta.get_den());
  Rational rb = rpow(r, bq);
  p.nu0 = 1;
  while (pow2((p.nu0 + 2) * static_cast<long>(bp + bq)) <= rb) ++p.nu0;

  while (p.mu0 + p.nu0 - 1 <= 2) ++p.nu0;
  p.l = p.mu0 + p.nu0 - 1;
  return p;
}

bool sign_preserving_truncation_check(long n, const BigInt& j, const Rational& lambda, long mu0, const Rational& tau,
                                      const WaveletSystem& sys) {
  if (mu0 < 0) throw PreconditionError("mu0 must be nonnegative");
  if (!in_index_set(n, j, sys))
    throw PreconditionError("index (" + std::to_string(n) + ", " + j.get_str() + ") outside the system");
  const TruncationCache& t = cached_truncation(sys, lambda);
  Rational shift = Rational(j - 1);
  auto pos = grid_ranges(map_set(t.positive, n, shift), n + mu0, tau);
  auto neg = grid_ranges(map_set(t.negative, n, shift), n + mu0, tau);
  for (const auto& [a, b] : pos)
    for (const auto& [c, d] : neg)
      if (a <= d && c <= b) return false;
  return true;
}

bool support_truncation_check(long n, const BigInt& j, const Rational& lambda, long nu0, const Rational& tau,
                              const WaveletSystem& sys) {
  if (::abs(tau) > pow2(nu0 - n - 2)) throw PreconditionError("|tau| exceeds 2^(nu0-n-2)");
  if (!in_index_set(n, j, sys))
    throw PreconditionError("index (" + std::to_string(n) + ", " + j.get_str() + ") outside the system");
  PointSet supp = map_set(cached_truncation(sys, lambda).support, n, Rational(j - 1));
  Rational centre = (Rational(j) - make_rational(1, 2)) * pow2(-n);
  Rational half = pow2(nu0 - 1 - n);
  return PointSet::interval(centre - half + tau, centre + half + tau).contains(supp);
}

std::vector<LambdaProbe> lambda_probes(const WaveletSystem& sys, const Rational& lambda) {
  std::vector<LambdaProbe> out;
  for (long n : {0L, 1L, 2L, 3L, 5L, 8L}) {
    BigInt last = BigInt(1) << static_cast<mp_bitcnt_t>(n);
    std::vector<BigInt> js = {BigInt(1)};
    if (last != 1) js.push_back(last);
    for (const auto& j : js) {
      auto [up, lo] = truncate(n, j, lambda, sys);
      Quad2 s = sqrt2_pow(n);
      Quad2 a = lo.l1_norm() * s, b = up.l1_norm() * s;
      if (!a.is_rational() || !b.is_rational()) throw PropertyViolation("rescaled norms are not rational");
      LambdaProbe p;
      p.n = n;
      p.j = j;
      p.lower_l1 = a.a;
      p.upper_l1 = b.a;
      p.level_measure = up.scaled(sqrt2_pow(-n)).level_set(lambda).measure() * pow2(n);
      out.push_back(std::move(p));
    }
  }
  return out;
}

LambdaChoice choose_lambda(const WaveletSystem& sys, const Rational& epsilon) {
  if (epsilon <= 0) throw PreconditionError("epsilon must be positive");
  LambdaChoice ch;
  for (long i = 1; i <= 40; ++i) {
    ++ch.tried;
    Rational lambda = pow2(-i);
    auto probes = lambda_probes(sys, lambda);
    Rational kappa = probes.front().upper_l1, kp = probes.front().level_measure, worst = 0;
    for (const auto& p : probes) {
      kappa = std::min(kappa, p.upper_l1);
      kp = std::min(kp, p.level_measure);
      worst = std::max(worst, p.lower_l1);
    }
    if (kappa > 0 && kp > 0 && worst <= epsilon * kappa) {
      ch.found = true;
      ch.lambda = lambda;
      ch.kappa = kappa;
      ch.kappa_prime = kp;
      ch.probes = std::move(probes);
      ch.params = derive_constants(sys.mother.c, sys.mother.alpha, sys.mother.beta, lambda);
      return ch;
    }
  }
  return ch;
}

// ---- subsystem and tree ----

Rational tau_k(long k, const TruncationParams& p) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  Rational den = (pow2(p.l) - 1) * pow2(p.mu0 + (k - 1) * p.l);
  return 1 / den;
}

bool grid_identity_check(long k, const TruncationParams& p) {
  long m = k * p.l + p.mu0;
  if (m != (k + 1) * p.l - p.nu0 + 1) return false;
  if (tau_k(k, p) - tau_k(k + 1, p) != pow2(-m)) return false;
  return ShiftedGrid{m, tau_k(k, p)}.same_partition(ShiftedGrid{m, tau_k(k + 1, p)});
}

BigInt g_k_size(long k, const TruncationParams& p) {
  long e = k * p.l - p.nu0;
  if (k < 1 || e < 0) throw PreconditionError("G_k is empty for this k");
  return BigInt(1) << static_cast<mp_bitcnt_t>(e);
}

bool in_g_k(long k, const BigInt& j, const TruncationParams& p, const WaveletSystem& sys) {
  if (k < 1) return false;
  if (sys.domain == Domain::real_line) return true;
  return j >= 1 && j <= g_k_size(k, p);
}

PLFunction subsystem_psi(long k, const BigInt& j, const TruncationParams& p, const WaveletSystem& sys) {
  if (!in_g_k(k, j, p, sys)) throw PreconditionError("j = " + j.get_str() + " outside G_" + std::to_string(k));
  return phi(k * p.l, j << static_cast<mp_bitcnt_t>(p.nu0), sys);
}

TreeFunction psi_bar_tree_function(long k, const BigInt& j, const TruncationParams& p, const WaveletSystem& sys,
                                   const std::shared_ptr<const PLFunction>& upper_mother) {
  if (!in_g_k(k, j, p, sys)) throw PreconditionError("j = " + j.get_str() + " outside G_" + std::to_string(k));
  TreeFunction t;
  t.base = upper_mother;
  t.n = k * p.l;
  t.shift = Rational((j << static_cast<mp_bitcnt_t>(p.nu0)) - 1);
  t.scale = sqrt2_pow(k * p.l);
  return t;
}

PsiTree psi_tree(long k_lo, long k_hi, const TruncationParams& p, const WaveletSystem& sys) {
  if (k_lo < 1 || k_hi < k_lo) throw PreconditionError("need 1 <= k_lo <= k_hi");
  if (sys.domain != Domain::unit_interval) throw PreconditionError("psi_tree needs the unit-interval system");
  auto upper = std::make_shared<const PLFunction>(mother_truncation(sys, p.lambda).first);
  PointSet supp = upper->support();
  if (supp.empty()) throw PreconditionError("upper truncation of the mother vanishes");
  Rational s_lo = supp.parts().front().a;

  std::vector<Partition> F, C;
  std::vector<TreeEntry> entries;
  PsiTree out;
  for (long k = k_lo; k <= k_hi; ++k) {
    Rational tk = tau_k(k, p);
    F.push_back(Partition::grid(k * p.l - p.nu0 + 1, tk));
    C.push_back(Partition::grid(k * p.l + p.mu0, tk));
    BigInt G = g_k_size(k, p);
    for (BigInt j = 1; j <= G; ++j) {
      TreeEntry e;
      e.level = static_cast<std::size_t>(k - k_lo);
      e.f = psi_bar_tree_function(k, j, p, sys, upper);
      e.cell = F.back().cell_of((s_lo + e.f.shift) * pow2(-e.f.n));
      entries.push_back(std::move(e));
    }
  }
  // build_tree sorts by (level, cell); cells increase with j, so the order matches.
  out.system = build_tree(F, C, std::move(entries));
  for (long k = k_lo; k <= k_hi; ++k) {
    BigInt G = g_k_size(k, p);
    for (BigInt j = 1; j <= G; ++j) {
      out.level_k.push_back(k);
      out.index_j.push_back(j);
    }
  }
  return out;
}

// ---- measure comparison ----

Quad2 positive_measure(const PLFunction& g, const Rational& lo, const Rational& hi) {
  Quad2 total;
  const auto& xs = g.xs();
  for (std::size_t i = 0; i < g.pieces(); ++i) {
    Rational a = std::max(xs[i], lo), b = std::min(xs[i + 1], hi);
    if (!(a < b)) continue;
    Quad2 v = interpolate(xs[i], xs[i + 1], g.start()[i], g.end()[i], a);
    Quad2 u = b == xs[i + 1] ? g.end()[i] : interpolate(xs[i], xs[i + 1], g.start()[i], g.end()[i], b);
    int sv = sign(v), su = sign(u);
    Rational len = b - a;
    if (sv >= 0 && su >= 0) {
      if (sv > 0 || su > 0) total += Quad2(len);
    } else if (sv > 0 || su > 0) {
      Quad2 r = v / (v - u);  // fraction of the piece before the zero
      total += sv > 0 ? r * len : (Quad2(1) - r) * len;
    }
  }
  return total;
}

PLFunction periodic_sum(const PLFunction& pattern, long n, long P, const BigInt& j_lo, const BigInt& j_hi,
                        const Quad2& s) {
  if (P < 1) throw PreconditionError("period must be positive");
  if (!pattern.empty() && (pattern.xs().front() < 0 || pattern.xs().back() > P))
    throw PreconditionError("pattern must live inside [0, P]");
  std::vector<Rational> xs;
  std::vector<Quad2> st, en;
  for (BigInt j = j_lo; j <= j_hi; ++j) {
    PLFunction t = pattern.affine(n, Rational(j * P - 1), s);
    if (t.empty()) continue;
    if (!xs.empty() && xs.back() != t.xs().front()) {
      st.emplace_back();
      en.emplace_back();
    }
    for (std::size_t i = 0; i < t.pieces(); ++i) {
      if (xs.empty() || xs.back() != t.xs()[i]) xs.push_back(t.xs()[i]);
      st.push_back(t.start()[i]);
      en.push_back(t.end()[i]);
    }
    xs.push_back(t.xs().back());
  }
  return PLFunction(std::move(xs), std::move(st), std::move(en));
}

L12Report l12_measure_check(long m, long M, const std::vector<Rational>& a, const Rational& lo, const Rational& hi,
                            const TruncationParams& p, const WaveletSystem& sys, const Rational& c0) {
  if (M <= m || m < 0) throw PreconditionError("need 0 <= m < M");
  if (a.size() != static_cast<std::size_t>(M - m)) throw PreconditionError("need one coefficient per level m+1..M");
  for (const auto& x : a)
    if (x < 0) throw PreconditionError("coefficients must be nonnegative");
  if (!(lo < hi) || hi - lo < pow2(-m * p.l)) throw PreconditionError("|Delta| must be at least 2^(-ml)");
  if (sys.domain == Domain::unit_interval && (lo < 0 || hi > 1)) throw PreconditionError("Delta must lie in [0, 1]");

  auto [up, low] = mother_truncation(sys, p.lambda);
  PLFunction up_abs = up.abs(), low_abs = low.abs();
  long P = 1L << p.nu0;
  PLFunction S_up, S_low;
  for (long k = m + 1; k <= M; ++k) {
    const Rational& ak = a[static_cast<std::size_t>(k - m - 1)];
    if (ak == 0) continue;
    long n = k * p.l;
    BigInt G = g_k_size(k, p);
    BigInt j0 = std::max(BigInt(1), BigInt(floor_of(lo * pow2(n - p.nu0))));
    BigInt j1 = std::min(G, BigInt(ceil_of((hi * pow2(n) + 1) / P)));
    if (j0 > j1) continue;
    Quad2 s = sqrt2_pow(n) * ak;
    S_up = S_up + periodic_sum(up_abs, n, P, j0, j1, s);
    S_low = S_low + periodic_sum(low_abs, n, P, j0, j1, s);
  }
  L12Report rep;
  rep.measure = positive_measure(S_up - S_low.scaled(Quad2(8)), lo, hi);
  rep.fraction = rep.measure * (1 / (hi - lo));
  rep.fraction_approx = rep.fraction.to_double();
  rep.ok = rep.fraction >= Quad2(c0);
  return rep;
}

}  // namespace dyadic_forge
