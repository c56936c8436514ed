#include <doctest.h>

#include <algorithm>
#include <map>

#include "dyadic_forge/errors.hpp"
#include "dyadic_forge/generators.hpp"
#include "dyadic_forge/stopping_time.hpp"

using namespace dyadic_forge;

namespace {

using Key = std::pair<long, std::int64_t>;

std::vector<Key> keys(const IntervalCollection& U) {
  std::vector<Key> k;
  for (const auto& I : U.items) k.push_back({I.m, I.j});
  std::sort(k.begin(), k.end());
  return k;
}

// Quadratic reference: largest first, accept while fewer than 2n accepted intervals contain it.
std::pair<std::vector<Key>, std::vector<Key>> naive_split(const IntervalCollection& U, long n) {
  std::vector<DyadicInterval> v = U.items;
  std::stable_sort(v.begin(), v.end(), scale_index_less);
  std::vector<DyadicInterval> acc;
  std::vector<Key> a, r;
  for (const auto& I : v) {
    long cover = 0;
    for (const auto& J : acc) cover += contained_in(I, J);
    if (cover < 2 * n) {
      acc.push_back(I);
      a.push_back({I.m, I.j});
    } else {
      r.push_back({I.m, I.j});
    }
  }
  std::sort(a.begin(), a.end());
  std::sort(r.begin(), r.end());
  return {a, r};
}

// Pointwise counts on the finest grid of a collection inside [0, 1).
std::vector<long> counts_on_grid(const IntervalCollection& U, long depth) {
  std::vector<long> c(std::size_t{1} << depth, 0);
  for (const auto& I : U.items) {
    std::int64_t lo = (I.j - 1) << (depth - I.m), hi = I.j << (depth - I.m);
    for (std::int64_t x = lo; x < hi; ++x) ++c[x];
  }
  return c;
}

IntervalCollection chain(long len) {
  IntervalCollection U;
  for (long i = 0; i < len; ++i) U.items.push_back({i, 1});
  U.distinct = true;
  return U;
}

}  // namespace

TEST_CASE("split_level matches the quadratic reference") {
  Rng rng(101);
  for (int t = 0; t < 150; ++t) {
    CollectionShape shape;
    shape.max_size = 300;
    shape.min_scale = -4;
    shape.max_scale = 10;
    shape.distinct = t % 3 != 0;
    IntervalCollection U = random_collection(rng, shape);
    if (U.empty()) continue;
    long n = 1;
    while ((std::size_t{1} << n) < U.size()) ++n;
    SplitResult r = split_level(U, n);
    auto [a, rej] = naive_split(U, n);
    CHECK(keys(r.accepted) == a);
    CHECK(keys(r.rejected) == rej);
    CHECK(r.checks.bounded);
    CHECK(r.checks.rejected_saturated);
    CHECK(r.checks.nested);
    if (!U.has_duplicates()) CHECK(r.checks.density);
  }
}

TEST_CASE("split_level examples") {
  SUBCASE("chain of ten, n = 4") {
    SplitResult r = split_level(chain(10), 4);
    CHECK(r.accepted.size() == 8);
    CHECK(keys(r.rejected) == std::vector<Key>{{8, 1}, {9, 1}});
    CHECK(r.checks.saturation_measure == make_rational(1, 128));
  }
  SUBCASE("complete tree of depth 3") {
    IntervalCollection U = full_tree(3);
    REQUIRE(U.size() == 15);
    SplitResult r = split_level(U, 4);
    CHECK(r.rejected.empty());
    StepFunction S = indicator_sum(r.accepted);
    for (const auto& v : S.values()) CHECK(v == Quad2(4));
  }
  SUBCASE("single interval") {
    IntervalCollection U;
    U.items = {{0, 1}};
    SplitResult r = split_level(U, 1);
    CHECK(r.accepted.size() == 1);
    CHECK(r.rejected.empty());
  }
  SUBCASE("too many intervals") {
    CHECK_THROWS_AS(split_level(chain(17), 4), PreconditionError);
  }
}

TEST_CASE("split_level is deterministic") {
  Rng a(9), b(9);
  CollectionShape shape;
  shape.max_size = 500;
  IntervalCollection U = random_collection(a, shape), V = random_collection(b, shape);
  REQUIRE(U.items == V.items);
  SplitResult r1 = split_level(U, 9), r2 = split_level(V, 9);
  CHECK(r1.accepted.items == r2.accepted.items);
  CHECK(r1.rejected.items == r2.rejected.items);
  CHECK(r1.checks.saturation_measure == r2.checks.saturation_measure);
}

TEST_CASE("density bound on a fine grid") {
  Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    IntervalCollection U = random_cover(rng, 9, 128);
    if (U.empty()) continue;
    U.validate();
    long n = 7;
    SplitResult r = split_level(U, n);
    auto S = counts_on_grid(r.accepted, 9);
    long sat = 0, supp = 0;
    for (long c : S) {
      CHECK(c <= 2 * n);
      sat += c == 2 * n;
      supp += c != 0;
    }
    // |{S = 2n}| <= 2^(1-n) |{S != 0}| in units of 2^-9.
    CHECK(sat * (1L << (n - 1)) <= supp);
    CHECK(r.checks.saturation_measure == make_rational(sat, 512));
    CHECK(r.checks.support_measure == make_rational(supp, 512));
  }
}

TEST_CASE("layered decomposition") {
  SUBCASE("chain") {
    LayeredDecomposition d = iterate_decomposition(chain(10), 4);
    REQUIRE(d.layers.size() == 2);
    CHECK(d.layers[0].size() == 8);
    CHECK(keys(d.layers[1]) == std::vector<Key>{{8, 1}, {9, 1}});
    CHECK(d.checks.all());
  }
  SUBCASE("below the level gives one layer") {
    IntervalCollection U = full_tree(2);
    LayeredDecomposition d = iterate_decomposition(U, 3);
    REQUIRE(d.layers.size() == 1);
    CHECK(keys(d.layers[0]) == keys(U));
  }
  SUBCASE("telescoping on random input") {
    Rng rng(23);
    for (int t = 0; t < 60; ++t) {
      CollectionShape shape;
      shape.max_size = 400;
      shape.min_scale = -6;
      shape.max_scale = 14;
      IntervalCollection U = random_collection(rng, shape);
      if (U.empty()) continue;
      long n = 1;
      while ((std::size_t{1} << n) < U.size()) ++n;
      LayeredDecomposition d = iterate_decomposition(U, n);
      CHECK(d.checks.all());
      StepFunction sum;
      for (const auto& L : d.layers) sum = sum + indicator_sum(L);
      CHECK(sum == indicator_sum(U));
    }
  }
}

TEST_CASE("repeated intervals saturate the level") {
  IntervalCollection U;
  for (int i = 0; i < 8; ++i) U.items.push_back({0, 1});
  SplitResult r = split_level(U, 3);
  CHECK(r.accepted.size() == 6);
  CHECK(r.rejected.size() == 2);
  CHECK_FALSE(r.checks.density);
  CHECK_FALSE(r.checks.density_applies);
  CHECK(r.checks.all());
}

TEST_CASE("coverage cardinality") {
  for (long l = 1; l <= 8; ++l) {
    IntervalCollection U = full_tree(l - 1);
    CoverageReport rep = coverage_card_check(U, {0, 1}, l);
    CHECK(rep.hypothesis);
    CHECK(rep.holds);
    CHECK(rep.card == (std::size_t{1} << l) - 1);
    CHECK(rep.min_coverage == l);
  }
  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    IntervalCollection U = random_cover(rng, 7, 200);
    if (U.empty()) continue;
    for (long l = 1; l <= 6; ++l) {
      CoverageReport rep = coverage_card_check(U, {0, 1}, l);
      CHECK(rep.holds);
      if (rep.hypothesis) CHECK(rep.card >= (std::size_t{1} << l) - 1);
    }
  }
  IntervalCollection out;
  out.items = {{0, 2}};
  CHECK_THROWS_AS(coverage_card_check(out, {0, 1}, 1), PreconditionError);
}

TEST_CASE("almost orthogonality") {
  SUBCASE("single function") {
    auto r = almost_orthogonality_check({StepFunction::indicator(0, 1)}, {PointSet::interval(0, 1)});
    CHECK(r.hypotheses_hold);
    CHECK(r.lhs_sq == Quad2(1));
    CHECK(r.inequality_ok);
  }
  SUBCASE("geometric family") {
    std::vector<StepFunction> f;
    std::vector<PointSet> E;
    for (long k = 1; k <= 5; ++k) {
      f.push_back(StepFunction::indicator(0, pow2(-k), sqrt2_pow(k)));
      E.push_back(PointSet::interval(0, pow2(-k)));
    }
    auto r = almost_orthogonality_check(f, E);
    CHECK(r.hypotheses_hold);
    // Ratio exactly 1/2 at every step: the constant 3 fails, 3 + 2 sqrt 2 holds.
    CHECK_FALSE(r.inequality_ok);
    CHECK(r.lhs_sq > r.rhs_sq);  // rhs_sq = 3 sum ||f_k||^2
    CHECK(Quad2(3) * r.lhs_sq <= Quad2(3, 2) * r.rhs_sq);
    // With E_k twice as wide, f_m keeps all its mass on E_(m+1).
    for (long k = 1; k <= 5; ++k) E[k - 1] = PointSet::interval(0, pow2(1 - k));
    auto wide = almost_orthogonality_check(f, E);
    CHECK_FALSE(wide.hypotheses_hold);
    CHECK(wide.k == 1);
    CHECK(wide.m == 1);
  }
  SUBCASE("support outside E is reported") {
    auto r = almost_orthogonality_check({StepFunction::indicator(0, 1), StepFunction::indicator(0, 1)},
                                        {PointSet::interval(0, 1), PointSet::interval(0, make_rational(1, 2))});
    CHECK_FALSE(r.hypotheses_hold);
    CHECK_FALSE(r.violation.empty());
  }
  SUBCASE("random admissible families") {
    Rng rng(41);
    for (int t = 0; t < 200; ++t) {
      AdmissibleFamily fam = random_admissible_family(rng, 8);
      auto r = almost_orthogonality_check(fam.f, fam.E);
      REQUIRE(r.hypotheses_hold);
      CHECK(r.inequality_ok);
      CHECK(r.lhs_sq <= r.rhs_sq);
    }
  }
}

TEST_CASE("indicator-sum bound") {
  SUBCASE("full tree ratio is depth + 1") {
    for (long n = 1; n <= 8; ++n) {
      IntervalCollection U = full_tree(n);
      BoundReport r = haar_bound_report(U, std::vector<Rational>(U.size(), Rational(1)));
      CHECK(r.lhs_sq == Rational((n + 1) * (n + 1)));
      CHECK(r.rhs_base == Rational(n + 1));
      CHECK(r.bound_ok);
    }
  }
  SUBCASE("disjoint intervals are orthogonal") {
    IntervalCollection U;
    U.items = {{2, 1}, {2, 3}};
    U.distinct = true;
    BoundReport r = haar_bound_report(U, {make_rational(3, 2), make_rational(5)});
    CHECK(r.lhs_sq == r.rhs_base);
  }
  SUBCASE("factor") {
    CHECK(bound_factor(2) == 24);
    CHECK(bound_factor(4) == 24);
    CHECK(bound_factor(5) == 36);
    CHECK(bound_factor(4096) == 144);
    CHECK(ceil_log2(4097) == 13);
  }
  SUBCASE("rejections") {
    IntervalCollection dup;
    dup.items = {{0, 1}, {0, 1}};
    CHECK_THROWS_AS(haar_bound_report(dup, {1, 1}), PreconditionError);
    IntervalCollection U;
    U.items = {{0, 1}, {1, 1}};
    CHECK_THROWS_AS(haar_bound_report(U, {1, 0}), PreconditionError);
    CHECK_THROWS_AS(haar_bound_report(U, {1}), PreconditionError);
  }
  SUBCASE("random sweep with homogeneity") {
    Rng rng(43);
    for (int t = 0; t < 100; ++t) {
      CollectionShape shape;
      shape.max_size = 300;
      IntervalCollection U = random_collection(rng, shape);
      if (U.size() < 2) continue;
      auto c = random_coefficients(rng, U.size());
      BoundReport r = haar_bound_report(U, c);
      CHECK(r.bound_ok);
      Rational s = make_rational(7, 3);
      for (auto& x : c) x *= s;
      BoundReport r2 = haar_bound_report(U, c);
      CHECK(r2.lhs_sq == s * s * r.lhs_sq);
      CHECK(r2.rhs_base == s * s * r.rhs_base);
    }
  }
}
