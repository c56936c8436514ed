#include "dyadic_forge/dilation.hpp"

#include <algorithm>
#include <set>

#include "dyadic_forge/errors.hpp"
#include "dyadic_forge/stopping_time.hpp"

namespace dyadic_forge {

namespace {

void require_dyadic(const StepFunction& phi) {
  if (!phi.has_dyadic_breakpoints()) throw PreconditionError("base function has non-dyadic breakpoints");
}

}  // namespace

StepFunction dilate_translate(const StepFunction& phi, const DilationIndex& idx) {
  require_dyadic(phi);
  std::vector<Rational> bps;
  bps.reserve(phi.breakpoints().size());
  Rational h = pow2(-idx.m);
  for (const auto& b : phi.breakpoints()) bps.push_back((b + Rational(idx.l)) * h);
  Quad2 s = sqrt2_pow(idx.m);
  std::vector<Quad2> vals;
  vals.reserve(phi.values().size());
  for (const auto& v : phi.values()) vals.push_back(v * s);
  return StepFunction(std::move(bps), std::move(vals));
}

void validate_combination(const Combination& comb) {
  if (comb.terms.size() < 2) throw PreconditionError("a combination needs N >= 2 terms");
  std::set<std::pair<long, std::int64_t>> seen;
  for (const auto& t : comb.terms) {
    if (t.c <= 0) throw PreconditionError("coefficients must be positive");
    if (!seen.insert({t.idx.m, t.idx.l}).second)
      throw PreconditionError("repeated dilation index (" + std::to_string(t.idx.m) + "," + std::to_string(t.idx.l) + ")");
  }
}

long grid_exponent(const StepFunction& phi) {
  long p = 0;
  for (const auto& b : phi.breakpoints()) {
    auto e = dyadic_exponent(b);
    if (!e) throw PreconditionError("base function has non-dyadic breakpoints");
    p = std::max(p, *e);
  }
  return p;
}

Quad2 combination_norm_sq(const Combination& comb, bool checked) {
  if (checked) validate_combination(comb);
  require_dyadic(comb.phi);
  const auto& pb = comb.phi.breakpoints();
  const auto& pv = comb.phi.values();
  if (pb.empty() || comb.terms.empty()) return Quad2();
  if (pb.size() * comb.terms.size() > kMaxRefinementPieces)
    throw ResourceError("common refinement would exceed 10^7 pieces");

  long p = grid_exponent(comb.phi);
  long M = p;
  for (const auto& t : comb.terms) M = std::max(M, t.idx.m + p);

  // Jumps of phi at its breakpoints, in integer units of 2^-p.
  std::vector<__int128> base;
  std::vector<Quad2> jump;
  for (std::size_t i = 0; i < pb.size(); ++i) {
    base.push_back(bigint_to_coord(BigInt(pb[i] * pow2(p))));
    Quad2 before = i == 0 ? Quad2() : pv[i - 1];
    Quad2 after = i < pv.size() ? pv[i] : Quad2();
    jump.push_back(after - before);
  }

  struct Event {
    __int128 x;
    std::uint32_t term;
    std::uint32_t bp;
  };
  std::vector<Event> ev;
  ev.reserve(pb.size() * comb.terms.size());
  std::vector<Quad2> weight;
  weight.reserve(comb.terms.size());
  for (std::size_t k = 0; k < comb.terms.size(); ++k) {
    const auto& t = comb.terms[k];
    weight.push_back(sqrt2_pow(t.idx.m) * t.c);
    long sh = M - t.idx.m - p;
    if (sh > 100) throw PreconditionError("scale spread too large for 128-bit coordinates");
    __int128 off = static_cast<__int128>(t.idx.l) << p;
    for (std::size_t i = 0; i < pb.size(); ++i)
      ev.push_back({(base[i] + off) * (static_cast<__int128>(1) << sh), static_cast<std::uint32_t>(k),
                    static_cast<std::uint32_t>(i)});
  }
  std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.x < b.x; });

  Quad2 cur, acc;
  for (std::size_t e = 0; e < ev.size();) {
    __int128 x = ev[e].x;
    while (e < ev.size() && ev[e].x == x) {
      cur += weight[ev[e].term] * jump[ev[e].bp];
      ++e;
    }
    if (e < ev.size() && !cur.is_zero()) acc += cur * cur * Rational(coord_to_bigint(ev[e].x - x));
  }
  return acc * pow2(-M);
}

T3Report t3_report(const Combination& comb, bool checked) {
  if (checked) validate_combination(comb);
  if (comb.phi.is_zero()) throw PreconditionError("base function is zero");
  T3Report r;
  r.N = comb.terms.size();
  r.lhs_sq = combination_norm_sq(comb, false);
  Rational csq = 0;
  for (const auto& t : comb.terms) csq += t.c * t.c;
  Quad2 l1 = comb.phi.l1_norm();
  r.rhs_base = l1 * l1 * csq;
  r.factor = bound_factor(r.N);
  r.bound_ok = r.lhs_sq <= r.rhs_base * Rational(r.factor);
  r.p = grid_exponent(comb.phi);
  r.scaled_bound_ok = r.lhs_sq <= r.rhs_base * (Rational(r.factor) * pow2(r.p));
  return r;
}

Combination t3_full_tree(long n) {
  Combination comb;
  comb.phi = StepFunction::indicator(Rational(0), Rational(1));
  for (long i = 0; i <= n; ++i) {
    long m = 2 * i;
    for (std::int64_t l = 0; l < (std::int64_t{1} << m); ++l) comb.terms.push_back({{m, l}, pow2(-i)});
  }
  return comb;
}

}  // namespace dyadic_forge
