#include <doctest.h>

#include "dyadic_forge/errors.hpp"
#include "dyadic_forge/generators.hpp"
#include "dyadic_forge/json_io.hpp"

using namespace dyadic_forge;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

}  // namespace

TEST_CASE("scalar round trips") {
  for (const Rational& x : {q(0), q(-7, 3), q(1, 1024), Rational(BigInt(1) << 100)})
    CHECK(rational_from_json(to_json(x)) == x);
  CHECK(rational_from_json(Json("3/6")) == q(1, 2));
  CHECK(rational_from_json(Json(5)) == 5);
  CHECK_THROWS_AS(rational_from_json(Json(0.5)), PreconditionError);
  CHECK_THROWS_AS(rational_from_json(Json::parse(R"({"num":"1"})")), PreconditionError);
  Quad2 z(q(1, 3), q(-2));
  CHECK(quad2_from_json(to_json(z)) == z);
}

TEST_CASE("collections and functions") {
  Rng rng(3);
  CollectionShape shape;
  shape.max_size = 50;
  IntervalCollection U = random_collection(rng, shape);
  IntervalCollection V = collection_from_json(to_json(U));
  CHECK(V.items == U.items);
  CHECK(V.distinct == U.distinct);
  CHECK(collection_from_json(Json::parse(R"([{"m":1,"j":2}])")).items == std::vector<DyadicInterval>{{1, 2}});
  IntervalCollection dup = collection_from_json(Json::parse(R"({"intervals":[{"m":0,"j":1},{"m":0,"j":1}]})"));
  CHECK(dup.size() == 2);
  CHECK_THROWS_AS(collection_from_json(Json::parse(R"({"intervals":[{"m":0,"j":1},{"m":0,"j":1}],"distinct":true})")),
                  PreconditionError);

  StepFunction f({0, q(1, 2), 1}, {Quad2(1), Quad2(0, -1)});
  CHECK(step_function_from_json(to_json(f)) == f);
  PLFunction g = builtin_mother().pl();
  CHECK((pl_function_from_json(to_json(g)) - g).is_zero());
  PLFunction h = pl_function_from_json(Json::parse(R"({"nodes":["0","1/2","1"],"values":["0","1","0"]})"));
  CHECK(h.integral() == Quad2(q(1, 2)));

  PointSet s = point_set_from_json(Json::parse(R"([{"a":"0","b":"1/2"},{"m":2,"j":4}])"));
  CHECK(s.measure() == q(3, 4));
  CHECK(point_set_from_json(to_json(s)) == s);
}

TEST_CASE("mother hash and calibration") {
  CHECK(mother_hash(builtin_mother()) == "5bc29fabbf58b49ae5b0ecd46cea029346cbe939");
  CHECK(mother_hash(haar_mother()) != mother_hash(builtin_mother()));
  MotherWavelet m = mother_from_json(to_json(builtin_mother()));
  CHECK(mother_hash(m) == mother_hash(builtin_mother()));

  Calibration cal = calibration_from_json(read_json_file(DYADIC_FORGE_SOURCE_DIR "/calibration/builtin.json"));
  CHECK(cal.lambda == q(1, 4));
  CHECK(cal.mu0 == 5);
  CHECK(cal.nu0 == 1);
  CHECK(cal.l == 5);
  CHECK(cal.c0 == q(1, 32));
  CHECK(cal.slack == q(1, 4));
  CHECK(cal.mother_hash == mother_hash(builtin_mother()));
  Calibration back = calibration_from_json(to_json(cal));
  CHECK(back.kappa == cal.kappa);

  Json bad = to_json(cal);
  bad["l"] = 7;
  CHECK_THROWS_AS(calibration_from_json(bad), PreconditionError);
}

TEST_CASE("multipliers, trees and permutations") {
  MultiplierSequence w = multiplier_from_json(Json::parse(R"({"family":"power","params":{"p":"2"}})"));
  CHECK(w.value(4) == 16);
  CHECK(multiplier_from_json(to_json(w)).value(5) == 25);
  CHECK_THROWS_AS(multiplier_from_json(Json::parse(R"({"family":"zeta"})")), PreconditionError);

  Json tree = Json::parse(R"({"nodes":[
    {"f":{"breakpoints":["0","1/2","1"],"values":["1","-1"]},"plus":[{"m":1,"j":1}],"minus":[{"m":1,"j":2}]},
    {"f":{"breakpoints":["0","1/4","1/2"],"values":["1","-1"]},"plus":[{"a":"0","b":"1/4"}],"minus":[{"a":"1/4","b":"1/2"}]}
  ]})");
  TreeInput in = tree_from_json(tree);
  REQUIRE(in.nodes.size() == 2);
  TreeSystem sys = make_tree_system(in.nodes);
  CHECK(verify_tree_axioms(sys).ok);

  Ordering o = {2, 0, 1};
  CHECK(permutation_to_json(o) == Json::parse("[3,1,2]"));
  CHECK(permutation_from_json(Json::parse("[3,1,2]"), 3) == o);
  CHECK_THROWS_AS(permutation_from_json(Json::parse("[1,1,2]"), 3), PreconditionError);
  CHECK_THROWS_AS(permutation_from_json(Json::parse("[1,2]"), 3), PreconditionError);
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), PreconditionError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/out.json", "{}"), EnvironmentError);
}
