#include "dyadic_forge/generators.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_set>

#include "dyadic_forge/errors.hpp"

namespace dyadic_forge {

namespace {

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::int64_t index_span(long m) { return std::int64_t{1} << std::max(0L, m); }

DyadicInterval random_interval(Rng& rng, long m) {
  const std::int64_t s = index_span(m);
  return {m, std::uniform_int_distribution<std::int64_t>(1 - s, 2 * s)(rng)};
}

// Pieces [a, b) with value v, sorted and disjoint; gaps become zero pieces.
StepFunction from_pieces(std::vector<std::tuple<Rational, Rational, Rational>> pieces) {
  std::sort(pieces.begin(), pieces.end(),
            [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
  std::vector<Rational> b;
  std::vector<Quad2> v;
  for (const auto& [lo, hi, val] : pieces) {
    if (!b.empty() && b.back() != lo) {
      v.push_back(Quad2());
      b.push_back(lo);
    }
    if (b.empty()) b.push_back(lo);
    v.push_back(Quad2(val));
    b.push_back(hi);
  }
  return StepFunction(std::move(b), std::move(v));
}

Rational small_rational(Rng& rng, long max_num) {
  long num = uniform(rng, 1, max_num);
  return make_rational(num, 1L << uniform(rng, 0, 3));
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (t + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

IntervalCollection random_collection(Rng& rng, const CollectionShape& shape) {
  if (shape.min_scale > shape.max_scale || shape.max_size == 0) throw PreconditionError("empty collection shape");
  IntervalCollection U;
  const std::size_t N = static_cast<std::size_t>(
      coin(rng, 0.5) ? uniform(rng, 1, static_cast<long>(std::min<std::size_t>(64, shape.max_size)))
                     : uniform(rng, 1, static_cast<long>(shape.max_size)));
  std::unordered_set<DyadicInterval, DyadicIntervalHash> seen;
  auto push = [&](const DyadicInterval& I) {
    if (shape.distinct) {
      if (U.items.size() < N && seen.insert(I).second) U.items.push_back(I);
      return;
    }
    if (U.items.size() < N) U.items.push_back(I);
    if (U.items.size() < N && coin(rng, shape.duplicate_rate)) U.items.push_back(I);
  };
  while (U.items.size() < N) {
    long m = uniform(rng, shape.min_scale, shape.max_scale);
    DyadicInterval I = random_interval(rng, m);
    switch (uniform(rng, 0, 2)) {
      case 0: {  // chain
        long len = uniform(rng, 1, 24);
        for (long s = 0; s < len && I.m <= shape.max_scale; ++s) {
          push(I);
          I = {I.m + 1, 2 * I.j - uniform(rng, 0, 1)};
        }
        break;
      }
      case 1: {  // full subtree
        long depth = std::min(uniform(rng, 1, 4), shape.max_scale - m);
        for (long d = 0; d <= depth; ++d)
          for (std::int64_t i = 0; i < (std::int64_t{1} << d); ++i) push({m + d, ((I.j - 1) << d) + 1 + i});
        break;
      }
      default:
        push(I);
    }
  }
  U.distinct = shape.distinct;
  return U;
}

IntervalCollection random_cover(Rng& rng, long max_scale, std::size_t max_size) {
  IntervalCollection U;
  auto room = [&] { return U.items.size() < max_size; };
  for (long m = 0; m <= max_scale && room(); ++m)
    if (coin(rng, 0.4))
      for (std::int64_t j = 1; j <= (std::int64_t{1} << m) && room(); ++j) U.items.push_back({m, j});
  long extra = uniform(rng, 0, 40);
  for (long i = 0; i < extra && room(); ++i) {
    long m = uniform(rng, 0, max_scale);
    U.items.push_back({m, uniform(rng, 1, 1L << m)});
  }
  if (U.items.empty()) U.items.push_back({0, 1});
  sort_canonical(U.items);
  U.items.erase(std::unique(U.items.begin(), U.items.end()), U.items.end());
  U.distinct = true;
  return U;
}

AdmissibleFamily random_admissible_family(Rng& rng, std::size_t max_len) {
  AdmissibleFamily fam;
  const std::size_t K = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(std::max<std::size_t>(1, max_len))));
  std::vector<DyadicInterval> cells;
  long s0 = uniform(rng, 0, 2);
  for (std::int64_t j = 1; j <= (std::int64_t{1} << s0); ++j)
    if (coin(rng, 0.7)) cells.push_back({s0, j});
  if (cells.empty()) cells.push_back({s0, 1});

  for (std::size_t k = 0; k < K; ++k) {
    std::vector<HalfOpen> parts;
    std::vector<std::tuple<Rational, Rational, Rational>> pieces;
    for (const auto& I : cells) {
      parts.push_back({I.left(), I.right()});
      long v = uniform(rng, -4, 4);
      if (v != 0) pieces.emplace_back(I.left(), I.right(), make_rational(v, 1L << uniform(rng, 0, 2)));
    }
    fam.E.push_back(PointSet::from_intervals(std::move(parts)));
    fam.f.push_back(pieces.empty() ? StepFunction() : from_pieces(std::move(pieces)));
    for (auto& I : cells) {
      long d = coin(rng, 0.75) ? 1 : 2;
      I = {I.m + d, ((I.j - 1) << d) + 1 + uniform(rng, 0, (1L << d) - 1)};
    }
  }
  return fam;
}

std::vector<Rational> random_coefficients(Rng& rng, std::size_t n) {
  std::vector<Rational> c;
  c.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.push_back(small_rational(rng, 8));
  return c;
}

Combination random_combination(Rng& rng, std::size_t max_terms, long max_p, long max_m) {
  Combination comb;
  const long p = uniform(rng, 0, max_p);
  std::vector<std::tuple<Rational, Rational, Rational>> pieces;
  for (long i = 0; i < (1L << p); ++i) {
    long v = uniform(rng, -3, 3);
    if (v != 0) pieces.emplace_back(make_rational(i, 1L << p), make_rational(i + 1, 1L << p), Rational(v));
  }
  if (pieces.empty()) pieces.emplace_back(Rational(0), Rational(1), Rational(1));
  comb.phi = from_pieces(std::move(pieces));

  const std::size_t N = static_cast<std::size_t>(uniform(rng, 2, static_cast<long>(std::max<std::size_t>(2, max_terms))));
  std::set<std::pair<long, std::int64_t>> seen;
  for (std::size_t tries = 0; comb.terms.size() < N && tries < 20 * N; ++tries) {
    long m = uniform(rng, 0, max_m);
    std::int64_t l = uniform(rng, -2, (1L << m) + 1);
    if (!seen.insert({m, l}).second) continue;
    comb.terms.push_back({{m, l}, small_rational(rng, 8)});
  }
  for (long m = 0; comb.terms.size() < 2; ++m)
    if (seen.insert({m, 0}).second) comb.terms.push_back({{m, 0}, Rational(1)});
  return comb;
}

std::vector<Rational> sample_shifts(Rng& rng, long n, long extra, std::size_t count) {
  std::vector<Rational> out;
  if (count == 0) return out;
  out.push_back(make_rational(1, 3) * pow2(-n));
  const long d = std::min(extra, 40L);
  for (std::size_t i = 1; i < count; ++i)
    out.push_back(Rational(std::uniform_int_distribution<std::int64_t>(0, (std::int64_t{1} << d) - 1)(rng)) * pow2(-n - d));
  return out;
}

TreeInstance random_tree_instance(Rng& rng, std::size_t max_nodes) {
  TreeInstance t;
  const long levels = uniform(rng, 1, 4);
  Rational tau = 0;
  switch (uniform(rng, 0, 3)) {
    case 0: tau = make_rational(uniform(rng, 0, 255), 256); break;
    case 1: tau = make_rational(1, 3); break;
    default: break;
  }
  std::vector<long> fs, cs;
  long f = uniform(rng, 0, 2);
  for (long n = 0; n < levels; ++n) {
    long c = f + uniform(rng, 1, 2);
    fs.push_back(f);
    cs.push_back(c);
    t.F.push_back(Partition::grid(f, tau));
    t.C.push_back(Partition::grid(c, tau));
    f = c + uniform(rng, 0, 1);
  }

  for (long n = 0; n < levels && t.entries.size() < max_nodes; ++n) {
    const Partition& F = t.F[static_cast<std::size_t>(n)];
    BigInt j0 = F.cell_of(Rational(0)), j1 = F.cell_of(Rational(1) - pow2(-fs[static_cast<std::size_t>(n)] - 1));
    const double keep = std::min(1.0, 1.2 * static_cast<double>(max_nodes) / (levels * BigInt(j1 - j0 + 1).get_d()));
    for (BigInt j = j0; j <= j1 && t.entries.size() < max_nodes; ++j) {
      if (!coin(rng, keep)) continue;
      const long sub = 1L << (cs[static_cast<std::size_t>(n)] - fs[static_cast<std::size_t>(n)]);
      const Rational a = F.cell_left(j), h = (F.cell_right(j) - a) / sub;
      std::vector<Rational> xs;
      std::vector<Quad2> ys;
      bool nonzero = false;
      for (long i = 0; i < sub; ++i) {
        const Rational lo = a + h * i, hi = lo + h, mid = lo + h / 2;
        const long sign = uniform(rng, -1, 2) >= 1 ? 1 : (uniform(rng, 0, 2) == 0 ? 0 : -1);
        auto mag = [&]() -> Rational { return sign * make_rational(uniform(rng, 0, 3), 1L << uniform(rng, 0, 2)); };
        if (coin(rng, 0.3)) {
          Rational v = mag();
          xs.insert(xs.end(), {lo, mid, hi});
          ys.insert(ys.end(), {Quad2(), Quad2(v), Quad2()});
          nonzero = nonzero || v != 0;
        } else {
          Rational u = mag(), v = mag();
          xs.insert(xs.end(), {lo, mid, mid, hi});
          ys.insert(ys.end(), {Quad2(u), Quad2(u), Quad2(v), Quad2(v)});
          nonzero = nonzero || u != 0 || v != 0;
        }
      }
      if (!nonzero) continue;
      t.entries.push_back({static_cast<std::size_t>(n), j, TreeFunction::of(PLFunction::from_nodes(xs, ys))});
    }
  }
  return t;
}

}  // namespace dyadic_forge
