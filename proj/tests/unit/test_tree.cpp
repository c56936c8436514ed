#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "dyadic_forge/errors.hpp"
#include "dyadic_forge/generators.hpp"
#include "dyadic_forge/tree.hpp"

using namespace dyadic_forge;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

PLFunction haar_on(const Rational& a, const Rational& b) {
  Rational mid = (a + b) / 2;
  return PLFunction::from_step(StepFunction::indicator(a, mid) - StepFunction::indicator(mid, b));
}

ExplicitNode haar_node(const Rational& a, const Rational& b) {
  Rational mid = (a + b) / 2;
  return {haar_on(a, b), PointSet::interval(a, mid), PointSet::interval(mid, b)};
}

std::vector<ExplicitNode> haar_tree(long depth) {
  std::vector<ExplicitNode> nodes;
  for (long n = 0; n < depth; ++n)
    for (long j = 1; j <= (1L << n); ++j) nodes.push_back(haar_node(q(j - 1, 1L << n), q(j, 1L << n)));
  return nodes;
}

// Brute force over sample points: max over segments p <= q of |sum| against half of sum |f|.
bool oracle_bound(const TreeSystem& sys, const Ordering& order, Rational* bad) {
  std::vector<PLFunction> fs;
  std::set<Rational> pts;
  for (const auto& nd : sys.nodes) {
    fs.push_back(nd.f.materialize());
    for (const auto& x : fs.back().xs()) pts.insert(x);
  }
  std::vector<Rational> xs(pts.begin(), pts.end());
  std::vector<Rational> samples = xs;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) samples.push_back((xs[i] + xs[i + 1]) / 2);
  for (const auto& x : samples) {
    std::vector<Quad2> v;
    Quad2 total;
    for (std::size_t p : order) {
      v.push_back(fs[p].eval(x));
      total += abs(v.back());
    }
    Quad2 best;
    for (std::size_t p = 0; p < v.size(); ++p) {
      Quad2 s;
      for (std::size_t r = p; r < v.size(); ++r) {
        s += v[r];
        if (abs(s) > best) best = abs(s);
      }
    }
    if (Quad2(2) * best < total) {
      *bad = x;
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("partitions") {
  Partition g = Partition::grid(3, q(1, 3));
  CHECK(g.is_breakpoint(q(1, 3) + q(1, 8)));
  CHECK(g.cell_left(g.cell_of(q(1, 2))) <= q(1, 2));
  CHECK(g.cell_right(g.cell_of(q(1, 2))) > q(1, 2));
  CHECK(refines(g, Partition::grid(4, q(1, 3))));
  CHECK_FALSE(refines(Partition::grid(4, q(1, 3)), g));
  CHECK_FALSE(refines(g, Partition::grid(4, 0)));
  Partition e = Partition::explicit_points({0, q(1, 2), 1});
  CHECK(e.is_breakpoint(q(1, 2)));
  CHECK(sign_preserving(Partition::grid(1, 0), haar_on(0, 1)));
  CHECK_FALSE(sign_preserving(Partition::grid(0, 0), haar_on(0, 1)));
}

TEST_CASE("three node example") {
  std::vector<ExplicitNode> nodes = {haar_node(0, 1), haar_node(0, q(1, 2)), haar_node(q(1, 2), 1)};
  TreeSystem sys = make_tree_system(nodes);
  CHECK(verify_tree_axioms(sys).ok);
  Ordering order = adversarial_permutation(sys);
  CHECK(order == Ordering{1, 0, 2});
  CHECK(verify_order_constraints(sys, order).ok);
  RearrangementReport rep = verify_rearrangement_bound(sys, order);
  CHECK(rep.ok);
  CHECK(rep.prefix_ok);
  CHECK_FALSE(verify_order_constraints(sys, Ordering{0, 1, 2}).ok);
}

TEST_CASE("single node and disjoint supports") {
  TreeSystem one = make_tree_system({haar_node(0, 1)});
  CHECK(adversarial_permutation(one) == Ordering{0});

  std::vector<ExplicitNode> pos;
  for (long j = 0; j < 4; ++j) {
    PLFunction f = PLFunction::from_step(StepFunction::indicator(q(j, 4), q(j + 1, 4), Quad2(j + 1)));
    pos.push_back({f, PointSet::interval(q(j, 4), q(j + 1, 4)), PointSet()});
  }
  TreeSystem sys = make_tree_system(pos);
  CHECK(verify_tree_axioms(sys).ok);
  Ordering id(4);
  std::iota(id.begin(), id.end(), 0);
  CHECK(verify_rearrangement_bound(sys, id).ok);
}

TEST_CASE("axiom violations are named") {
  // Overlap that is neither nested in a sign set nor disjoint.
  std::vector<ExplicitNode> nodes = {haar_node(0, 1), haar_node(q(1, 4), q(3, 4))};
  TreeVerdict v = verify_tree_axioms(make_tree_system(nodes));
  CHECK_FALSE(v.ok);
  CHECK(v.k == 1);
  CHECK(v.n == 2);
  // Positive part outside the plus set.
  ExplicitNode bad = haar_node(0, 1);
  std::swap(bad.plus, bad.minus);
  CHECK_FALSE(verify_tree_axioms(make_tree_system({bad})).ok);
}

TEST_CASE("canonical haar tree") {
  TreeSystem sys = make_tree_system(haar_tree(5));
  REQUIRE(sys.nodes.size() == 31);
  CHECK(verify_tree_axioms(sys).ok);
  Ordering order = adversarial_permutation(sys);
  CHECK(is_bijection(order, 31));
  OrderVerdict ov = verify_order_constraints(sys, order);
  CHECK(ov.ok);
  CHECK(ov.pairs_checked > 0);
  RearrangementReport rep = verify_rearrangement_bound(sys, order);
  CHECK(rep.ok);
  CHECK(rep.prefix_ok);
  Rational bad;
  CHECK(oracle_bound(sys, order, &bad));
  CHECK(adversarial_permutation(sys) == order);
}

TEST_CASE("built trees agree with the brute-force oracle") {
  Rng rng(77);
  std::size_t random_failures = 0;
  for (int t = 0; t < 40; ++t) {
    TreeInstance inst = random_tree_instance(rng, 24);
    TreeSystem sys = build_tree(inst.F, inst.C, inst.entries);
    REQUIRE(verify_tree_axioms(sys).ok);
    for (std::size_t i = 1; i < sys.nodes.size(); ++i) CHECK(sys.nodes[i - 1].level <= sys.nodes[i].level);
    Ordering order = adversarial_permutation(sys);
    CHECK(verify_order_constraints(sys, order).ok);
    RearrangementReport rep = verify_rearrangement_bound(sys, order);
    CHECK(rep.ok);
    CHECK(rep.prefix_ok);
    Rational bad;
    CHECK(oracle_bound(sys, order, &bad));

    Ordering shuffled = order;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    RearrangementReport r2 = verify_rearrangement_bound(sys, shuffled);
    CHECK(r2.ok == oracle_bound(sys, shuffled, &bad));
    random_failures += !r2.ok;
  }
  MESSAGE("random orderings failing the bound: " << random_failures << " of 40");
}

TEST_CASE("build_tree preconditions") {
  std::vector<Partition> F = {Partition::grid(1, 0)};
  std::vector<Partition> C = {Partition::grid(3, 0)};
  TreeEntry e{0, BigInt(1), TreeFunction::of(haar_on(0, q(1, 2)))};
  CHECK_NOTHROW(build_tree(F, C, {e}));
  // Cell index outside the window.
  TreeEntry far{0, BigInt(100), TreeFunction::of(haar_on(0, q(1, 2)))};
  CHECK_THROWS_AS(build_tree(F, C, {far}), PreconditionError);
  // C must refine F.
  CHECK_THROWS_AS(build_tree(F, {Partition::grid(3, q(1, 3))}, {e}), PreconditionError);
}

TEST_CASE("run helpers") {
  CoordRuns a = {{0, 4}, {8, 12}}, b = {{0, 16}}, c = {{4, 8}};
  CHECK(runs_subset(a, b));
  CHECK_FALSE(runs_subset(b, a));
  CHECK_FALSE(runs_intersect(a, c));
  CHECK(runs_union(a, c) == CoordRuns{{0, 12}});
  CHECK(is_bijection({2, 0, 1}, 3));
  CHECK_FALSE(is_bijection({0, 0, 1}, 3));
}
