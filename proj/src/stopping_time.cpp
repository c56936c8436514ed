#include "dyadic_forge/stopping_time.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "dyadic_forge/errors.hpp"

namespace dyadic_forge {

namespace {

void require_card(const IntervalCollection& U, long n) {
  if (n < 1) throw PreconditionError("level parameter n must be >= 1");
  BigInt cap = BigInt(1) << static_cast<mp_bitcnt_t>(std::min<long>(n, 4096));
  if (BigInt(static_cast<unsigned long>(U.size())) > cap)
    throw PreconditionError("card(U) = " + std::to_string(U.size()) + " exceeds 2^" + std::to_string(n));
}

// |A| * 2^(n-1) <= |B| with A, B in frame units.
bool density_ok(Coord sat, Coord supp, long n) {
  BigInt lhs = coord_to_bigint(sat);
  BigInt rhs = coord_to_bigint(supp);
  if (n >= 1) lhs <<= static_cast<mp_bitcnt_t>(n - 1);
  return lhs <= rhs;
}

std::vector<HalfOpen> runs_to_rational(const CoordRuns& r, const DyadicFrame& F) {
  std::vector<HalfOpen> out;
  out.reserve(r.size());
  for (const auto& [a, b] : r) out.push_back({F.to_rational(a), F.to_rational(b)});
  return out;
}

struct RawSplit {
  std::vector<DyadicInterval> accepted, rejected;
};

RawSplit raw_split(const std::vector<DyadicInterval>& items, long n) {
  std::vector<DyadicInterval> v = items;
  std::sort(v.begin(), v.end(), scale_index_less);
  RawSplit r;
  if (v.empty()) return r;
  long min_m = v.front().m;
  std::unordered_map<DyadicInterval, std::int64_t, DyadicIntervalHash> count;
  const std::int64_t level = 2 * n;
  for (const auto& I : v) {
    std::int64_t c = 0;
    for (long m = I.m; m >= min_m && c < level; --m) {
      auto it = count.find(ancestor_at(I, m));
      if (it != count.end()) c += it->second;
    }
    if (c < level) {
      ++count[I];
      r.accepted.push_back(I);
    } else {
      r.rejected.push_back(I);
    }
  }
  return r;
}

}  // namespace

CoverageReport coverage_card_check(const IntervalCollection& U, const DyadicInterval& I, long l) {
  U.validate();
  for (const auto& J : U.items)
    if (!contained_in(J, I)) throw PreconditionError("interval " + J.to_string() + " lies outside " + I.to_string());
  std::vector<DyadicInterval> all = U.items;
  all.push_back(I);
  DyadicFrame F = DyadicFrame::covering(all);
  CountProfile p = count_profile(U.items, F);
  Coord lo = F.left(I), hi = F.right(I);

  CoverageReport rep;
  rep.l = l;
  rep.card = U.size();
  // Start with uncovered stretches of I, which have S = 0.
  std::int64_t best = -1;
  Coord where = lo;
  if (p.xs.empty() || p.xs.front() > lo || p.xs.back() < hi) {
    best = 0;
    where = (p.xs.empty() || p.xs.front() > lo) ? lo : p.xs.back();
  }
  for (std::size_t i = 0; i < p.counts.size(); ++i) {
    if (best < 0 || p.counts[i] < best) {
      best = p.counts[i];
      where = p.xs[i];
    }
  }
  rep.min_coverage = best;
  rep.witness = F.to_rational(where);
  rep.hypothesis = best >= l;
  if (rep.hypothesis) {
    BigInt need = (BigInt(1) << static_cast<mp_bitcnt_t>(std::max<long>(l, 0))) - 1;
    rep.holds = BigInt(static_cast<unsigned long>(rep.card)) >= need;
  } else {
    rep.holds = true;
  }
  return rep;
}

SplitResult split_level(const IntervalCollection& U, long n) {
  U.validate();
  require_card(U, n);
  RawSplit raw = raw_split(U.items, n);

  SplitResult res;
  res.level = 2 * n;
  res.accepted.items = raw.accepted;
  res.rejected.items = raw.rejected;
  sort_canonical(res.accepted.items);
  sort_canonical(res.rejected.items);
  if (U.empty()) {
    res.checks = {true, true, true, true, true, 0, 0};
    return res;
  }

  DyadicFrame F = DyadicFrame::covering(U.items);
  CountProfile p = count_profile(raw.accepted, F);
  const std::int64_t level = res.level;
  CoordRuns sat = runs_where(p, [level](std::int64_t c) { return c == level; });
  CoordRuns supp = runs_where(p, [](std::int64_t c) { return c != 0; });
  res.saturation = runs_to_rational(sat, F);

  SplitChecks& ck = res.checks;
  ck.bounded = std::all_of(p.counts.begin(), p.counts.end(), [level](std::int64_t c) { return c <= level; });
  ck.rejected_saturated = std::all_of(raw.rejected.begin(), raw.rejected.end(), [&](const DyadicInterval& I) {
    return runs_contain(sat, F.left(I), F.right(I));
  });
  Coord sat_m = runs_measure(sat), supp_m = runs_measure(supp);
  ck.saturation_measure = F.measure(sat_m);
  ck.support_measure = F.measure(supp_m);
  ck.density = density_ok(sat_m, supp_m, n);
  ck.density_applies = !U.has_duplicates();
  ck.nested = raw.rejected.empty() || nested_in(res.rejected, res.accepted);
  if (!ck.all()) throw PropertyViolation("split_level: stopping-time properties failed");
  return res;
}

LayeredDecomposition iterate_decomposition(const IntervalCollection& U, long n) {
  U.validate();
  require_card(U, n);
  LayeredDecomposition dec;
  dec.level = 2 * n;
  std::vector<DyadicInterval> rest = U.items;
  while (!rest.empty()) {
    RawSplit raw = raw_split(rest, n);
    IntervalCollection layer;
    layer.items = std::move(raw.accepted);
    sort_canonical(layer.items);
    dec.layers.push_back(std::move(layer));
    rest = std::move(raw.rejected);
  }

  LayerChecks& ck = dec.checks;
  ck = {true, true, true, true, true, !U.has_duplicates()};
  if (U.empty()) return dec;

  DyadicFrame F = DyadicFrame::covering(U.items);
  const std::int64_t level = dec.level;

  std::unordered_map<DyadicInterval, std::int64_t, DyadicIntervalHash> mult;
  for (const auto& I : U.items) ++mult[I];
  for (const auto& L : dec.layers)
    for (const auto& I : L.items) --mult[I];
  ck.partition = std::all_of(mult.begin(), mult.end(), [](const auto& kv) { return kv.second == 0; });

  CoordRuns prev_sat;
  for (std::size_t k = 0; k < dec.layers.size(); ++k) {
    const auto& layer = dec.layers[k];
    CountProfile p = count_profile(layer.items, F);
    if (!std::all_of(p.counts.begin(), p.counts.end(), [level](std::int64_t c) { return c <= level; }))
      ck.bounded = false;
    CoordRuns sat = runs_where(p, [level](std::int64_t c) { return c == level; });
    if (k > 0) {
      const auto& prev = dec.layers[k - 1];
      if (!nested_in(layer, prev)) ck.nested = false;
      for (const auto& I : layer.items)
        if (!runs_contain(prev_sat, F.left(I), F.right(I))) ck.inside_saturation = false;
      for (const auto& J : dmin(prev).items) {
        Coord inside = runs_intersection_measure(sat, F.left(J), F.right(J));
        if (!density_ok(inside, F.right(J) - F.left(J), n)) ck.local_density = false;
      }
    }
    prev_sat = std::move(sat);
  }
  if (!ck.all()) {
    std::string which;
    for (auto [ok, name] : {std::pair{ck.partition, "partition"}, {ck.nested, "nested"}, {ck.bounded, "bounded"},
                            {ck.inside_saturation, "inside_saturation"},
                            {ck.local_density || !ck.density_applies, "local_density"}})
      if (!ok) which += std::string(which.empty() ? "" : ",") + name;
    throw PropertyViolation("iterate_decomposition: layer properties failed: " + which);
  }
  return dec;
}

Quad2 l2_norm_sq_on(const StepFunction& f, const PointSet& E) {
  Quad2 s;
  const auto& b = f.breakpoints();
  const auto& v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    Rational part = E.measure_in(b[i], b[i + 1]);
    if (part != 0) s += v[i] * v[i] * part;
  }
  return s;
}

OrthogonalityReport almost_orthogonality_check(const std::vector<StepFunction>& f, const std::vector<PointSet>& E) {
  if (f.size() != E.size() || f.empty()) throw PreconditionError("need equal-length nonempty sequences");
  const std::size_t N = f.size();
  OrthogonalityReport rep;
  rep.hypotheses_hold = true;
  auto fail = [&](std::string why, std::size_t k, std::size_t m) {
    if (!rep.hypotheses_hold) return;
    rep.hypotheses_hold = false;
    rep.violation = std::move(why);
    rep.k = static_cast<long>(k + 1);
    rep.m = static_cast<long>(m + 1);
  };
  for (std::size_t k = 0; k + 1 < N; ++k)
    if (!E[k].contains(E[k + 1])) fail("sets not nested", k, k + 1);
  for (std::size_t k = 0; k < N; ++k)
    if (!E[k].contains(f[k].support())) fail("support outside E_k", k, k);
  for (std::size_t k = 0; k < N && rep.hypotheses_hold; ++k) {
    Quad2 prev = l2_norm_sq_on(f[k], E[k]);
    for (std::size_t m = k; m + 1 < N; ++m) {
      Quad2 next = l2_norm_sq_on(f[k], E[m + 1]);
      if (next * Rational(2) > prev) {
        fail("energy decay fails", k, m);
        break;
      }
      prev = std::move(next);
    }
  }

  StepFunction sum;
  Quad2 rhs;
  for (const auto& g : f) {
    sum = sum + g;
    rhs += g.l2_norm_sq();
  }
  rep.lhs_sq = sum.l2_norm_sq();
  rep.rhs_sq = rhs * Rational(3);
  rep.inequality_ok = rep.lhs_sq <= rep.rhs_sq;
  return rep;
}

long ceil_log2(std::uint64_t N) {
  long k = 0;
  while (k < 64 && (std::uint64_t{1} << k) < N) ++k;
  return k;
}

long bound_factor(std::uint64_t N) { return 12 * std::max<long>(2, ceil_log2(N)); }

BoundReport haar_bound_report(const IntervalCollection& U, const std::vector<Rational>& c) {
  if (U.size() < 2) throw PreconditionError("need N >= 2 intervals");
  if (c.size() != U.size()) throw PreconditionError("one coefficient per interval is required");
  IntervalCollection D = U;
  D.distinct = true;
  D.validate();
  for (const auto& x : c)
    if (x <= 0) throw PreconditionError("coefficients must be positive");

  DyadicFrame F = DyadicFrame::covering(U.items);
  std::vector<std::pair<Coord, std::size_t>> ev;
  ev.reserve(2 * U.size());
  for (std::size_t i = 0; i < U.size(); ++i) {
    ev.emplace_back(F.left(U.items[i]), 2 * i);
    ev.emplace_back(F.right(U.items[i]), 2 * i + 1);
  }
  std::sort(ev.begin(), ev.end());
  Rational cur = 0, acc = 0;
  for (std::size_t e = 0; e < ev.size();) {
    Coord x = ev[e].first;
    while (e < ev.size() && ev[e].first == x) {
      std::size_t id = ev[e].second;
      if (id & 1) cur -= c[id / 2];
      else cur += c[id / 2];
      ++e;
    }
    if (e < ev.size() && cur != 0) acc += cur * cur * Rational(coord_to_bigint(ev[e].first - x));
  }

  BoundReport rep;
  rep.N = U.size();
  rep.lhs_sq = acc * pow2(-F.M);
  rep.rhs_base = 0;
  for (std::size_t i = 0; i < U.size(); ++i) rep.rhs_base += c[i] * c[i] * U.items[i].length();
  rep.factor = bound_factor(rep.N);
  rep.bound_ok = rep.lhs_sq <= rep.rhs_base * rep.factor;
  return rep;
}

IntervalCollection full_tree(long n) {
  IntervalCollection U;
  U.distinct = true;
  for (long m = 0; m <= n; ++m)
    for (std::int64_t j = 1; j <= (std::int64_t{1} << m); ++j) U.items.push_back({m, j});
  sort_canonical(U.items);
  return U;
}

}  // namespace dyadic_forge
