#include <doctest.h>

#include <random>
#include <set>

#include "dyadic_forge/dyadic.hpp"
#include "dyadic_forge/errors.hpp"
#include "dyadic_forge/generators.hpp"
#include "dyadic_forge/pl_function.hpp"
#include "dyadic_forge/point_set.hpp"
#include "dyadic_forge/quad2.hpp"
#include "dyadic_forge/step_function.hpp"

using namespace dyadic_forge;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

// Brute-force containment on endpoints.
bool naive_inside(const DyadicInterval& I, const DyadicInterval& J) {
  return J.left() <= I.left() && I.right() <= J.right();
}

}  // namespace

TEST_CASE("rationals stay canonical") {
  Rational x = make_rational(6, -4);
  CHECK(x.get_den() > 0);
  CHECK(x == q(-3, 2));
  CHECK(to_string(parse_rational("10/4")) == "5/2");
  CHECK(parse_rational("-7") == -7);
  CHECK_THROWS_AS(parse_rational("1/0"), PreconditionError);
  CHECK_THROWS_AS(parse_rational("abc"), PreconditionError);
  CHECK(pow2(-3) == q(1, 8));
  CHECK(pow2(70) == Rational(BigInt(1) << 70));
  CHECK(floor_of(q(-1, 2)) == -1);
  CHECK(ceil_of(q(-1, 2)) == 0);
  CHECK(two_adic_valuation(q(12)) == 2);
  CHECK(two_adic_valuation(q(3, 8)) == -3);
  CHECK(dyadic_exponent(q(3, 8)) == 3);
  CHECK_FALSE(dyadic_exponent(q(1, 3)).has_value());
  CHECK(from_double(0.375) == q(3, 8));
}

TEST_CASE("quad2 arithmetic and exact sign") {
  Quad2 r2(0, 1);
  CHECK(r2 * r2 == Quad2(2));
  CHECK(sqrt2_pow(3) == Quad2(0, 2));
  CHECK(sqrt2_pow(-2) == Quad2(q(1, 2)));
  // 1.4142... vs 1.4142... + tiny rational perturbations
  CHECK(sign(Quad2(q(-1414213562, 1000000000), 1)) > 0);
  CHECK(sign(Quad2(q(-1414213563, 1000000000), 1)) < 0);
  CHECK(sign(Quad2(q(3), -2)) > 0);  // 3 - 2.828
  CHECK(sign(Quad2(q(-3), 2)) < 0);
  Quad2 x(q(3, 7), q(-2, 5));
  CHECK(x * inverse(x) == Quad2(1));
  CHECK(abs(-x) == abs(x));
  CHECK(Quad2(q(1, 2), 0).is_rational());

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int t = 0; t < 500; ++t) {
    Quad2 a(q(d(rng), 1 + (d(rng) & 15)), q(d(rng), 1 + (d(rng) & 15)));
    Quad2 b(q(d(rng), 3), q(d(rng), 5));
    CHECK(a + b - b == a);
    CHECK(sign(a) == (a.to_double() > 0 ? 1 : a.to_double() < 0 ? -1 : 0));
    CHECK((a < b) == (sign(b - a) > 0));
  }
}

TEST_CASE("dyadic interval basics") {
  DyadicInterval I{3, 2};
  CHECK(I.left() == q(1, 8));
  CHECK(I.length() == q(1, 8));
  CHECK(parent(I) == DyadicInterval{2, 1});
  CHECK(ancestor_at(DyadicInterval{5, 7}, 2) == DyadicInterval{2, 1});
  DyadicInterval neg{-2, 0};  // [-4, 0)
  CHECK(neg.left() == -4);
  CHECK(contained_in(DyadicInterval{0, 0}, neg));
  CHECK(relation(I, I) == Relation::equal);
}

TEST_CASE("nested or disjoint, exhaustive") {
  std::vector<DyadicInterval> all;
  for (long m = -6; m <= 6; ++m)
    for (std::int64_t j = -64; j <= 64; ++j) all.push_back({m, j});
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (int t = 0; t < 200000; ++t) {
    const auto& I = all[pick(rng)];
    const auto& J = all[pick(rng)];
    Relation r = relation(I, J);
    bool overlap = I.left() < J.right() && J.left() < I.right();
    if (!overlap) {
      CHECK(r == Relation::disjoint);
      continue;
    }
    bool in = naive_inside(I, J), out = naive_inside(J, I);
    REQUIRE((in || out));
    if (in && out) CHECK(r == Relation::equal);
    else if (in) CHECK(r == Relation::I_inside_J);
    else CHECK(r == Relation::J_inside_I);
  }
}

TEST_CASE("dmax and dmin") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    CollectionShape shape;
    shape.max_size = 200;
    shape.min_scale = -3;
    shape.max_scale = 8;
    IntervalCollection U = random_collection(rng, shape);
    if (U.empty()) continue;
    IntervalCollection top = dmax(U);
    CHECK(dmax(top).items == top.items);
    // Indicator of the union.
    StepFunction s = indicator_sum(top);
    for (const auto& v : s.values()) CHECK((v == Quad2(0) || v == Quad2(1)));
    CHECK(s.support() == indicator_sum(U).support());

    IntervalCollection low = dmin(U);
    std::set<std::pair<long, std::int64_t>> inU;
    for (const auto& I : U.items) inU.insert({I.m, I.j});
    for (const auto& J : low.items) CHECK(inU.count({J.m, J.j}));
    for (const auto& I : U.items) {
      bool has = false;
      for (const auto& J : low.items) has = has || contained_in(J, I);
      CHECK(has);
    }
    CHECK(nested_in(U, top));
  }
}

TEST_CASE("shifted grids") {
  ShiftedGrid g{3, q(1, 3)};
  CHECK(g.cell_left(1) == q(1, 3));
  CHECK(g.cell_right(1) == q(1, 3) + q(1, 8));
  CHECK(g.index_of(q(1, 3)) == 1);
  CHECK(g.index_of(q(1, 3) - q(1, 100)) == 0);
  ShiftedGrid h{3, q(1, 3) + q(5, 8)};
  CHECK(g.same_partition(h));
  CHECK_FALSE(g.same_partition(ShiftedGrid{3, q(1, 4)}));
  // Tiling: consecutive cells share endpoints.
  for (long j = -20; j < 20; ++j) CHECK(g.cell_right(j) == g.cell_left(j + 1));
}

TEST_CASE("step function norms") {
  StepFunction one = StepFunction::indicator(0, 1);
  CHECK(one.l1_norm() == Quad2(1));
  CHECK(one.l2_norm_sq() == Quad2(1));
  StepFunction half = StepFunction::indicator(0, q(1, 2), Quad2(0, 1));
  CHECK(half.l1_norm() == Quad2(0, q(1, 2)));
  CHECK(half.l2_norm_sq() == Quad2(1));
  StepFunction haar = StepFunction::indicator(0, q(1, 2)) - StepFunction::indicator(q(1, 2), 1);
  CHECK(haar.l1_norm() == Quad2(1));
  CHECK(haar.l2_norm_sq() == Quad2(1));
  CHECK(haar.integral() == Quad2(0));
  CHECK(haar.positive_set() == PointSet::interval(0, q(1, 2)));
  CHECK_THROWS_AS(StepFunction({1, 0}, {Quad2(1)}), PreconditionError);
}

TEST_CASE("step function bilinearity") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> v(-9, 9), b(0, 32);
  auto random_step = [&] {
    std::set<long> pts;
    while (pts.size() < 5) pts.insert(b(rng));
    std::vector<Rational> xs;
    for (long p : pts) xs.push_back(q(p, 16));
    std::vector<Quad2> vals;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) vals.push_back(Quad2(q(v(rng), 3), q(v(rng), 2)));
    return StepFunction(xs, vals);
  };
  for (int t = 0; t < 200; ++t) {
    StepFunction f = random_step(), g = random_step();
    CHECK(l2_norm_sq(f + g) == l2_norm_sq(f) + Quad2(2) * inner(f, g) + l2_norm_sq(g));
    CHECK(inner(f, g) == (f * g).integral());
  }
}

TEST_CASE("point set algebra") {
  PointSet A = PointSet::from_intervals({{0, q(1, 2)}, {q(3, 4), 1}});
  PointSet B = PointSet::interval(q(1, 4), q(7, 8));
  CHECK(A.measure() == q(3, 4));
  CHECK(A.unite(B) == PointSet::interval(0, 1));
  CHECK(A.intersect(B).measure() == q(1, 4) + q(1, 8));
  CHECK(A.minus(B) == PointSet::from_intervals({{0, q(1, 4)}, {q(7, 8), 1}}));
  CHECK(A.unite(B).measure() + A.intersect(B).measure() == A.measure() + B.measure());
  CHECK(PointSet::from_intervals({{0, 1}, {1, 2}}).parts().size() == 1);
  CHECK(A.contains_point(0));
  CHECK_FALSE(A.contains_point(q(1, 2)));
  CHECK(A.measure_in(q(1, 4), q(7, 8)) == q(3, 8));
}

TEST_CASE("piecewise linear functions") {
  PLFunction tent = PLFunction::from_nodes({0, q(1, 2), 1}, {Quad2(0), Quad2(1), Quad2(0)});
  CHECK(tent.integral() == Quad2(q(1, 2)));
  CHECK(tent.eval(q(1, 4)) == Quad2(q(1, 2)));
  // Exact integral of the square: 2 * int_0^(1/2) (2x)^2 = 1/3.
  CHECK(tent.l2_norm_sq() == Quad2(q(1, 3)));
  auto [up, lo] = tent.truncate(q(1, 2));
  CHECK((up + lo - tent).is_zero());
  CHECK(up.support() == PointSet::interval(q(1, 4), q(3, 4)));
  CHECK(tent.level_set(q(1, 2)) == PointSet::interval(q(1, 4), q(3, 4)));

  PLFunction d = tent.affine(2, 1, Quad2(2));  // 2 * tent(4x - 1)
  CHECK(d.support() == PointSet::interval(q(1, 4), q(1, 2)));
  CHECK(d.integral() == Quad2(q(1, 4)));

  PLFunction jump = PLFunction::from_nodes({0, 0, 1, 1}, {Quad2(0), Quad2(2), Quad2(2), Quad2(0)});
  CHECK(jump.eval(0) == Quad2(2));
  CHECK(jump.left_limit(0) == Quad2(0));
  CHECK(jump.l1_norm() == Quad2(2));

  // Sign change inside a piece: l1 uses the crossing.
  PLFunction line = PLFunction::from_nodes({0, 1}, {Quad2(-1), Quad2(1)});
  CHECK(line.integral() == Quad2(0));
  CHECK(line.l1_norm() == Quad2(q(1, 2)));
  CHECK(line.positive_set() == PointSet::interval(q(1, 2), 1));
}
