#include <doctest.h>

#include "dyadic_forge/errors.hpp"
#include "dyadic_forge/generators.hpp"
#include "dyadic_forge/series.hpp"
#include "dyadic_forge/wavelet.hpp"

using namespace dyadic_forge;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

WaveletSystem builtin() { return {builtin_mother(), Domain::unit_interval}; }

const TruncationParams kParams{q(1, 4), 5, 1, 5};

}  // namespace

TEST_CASE("xi envelope") {
  CHECK(*xi(q(1, 4), 1).exact == q(16, 25));
  CHECK(*xi(-1, 1).exact == q(1, 4));
  // (9/4)^(3/2) = 27/8
  CHECK(*xi(q(5, 4), q(1, 2)).exact == q(8, 27));
  XiValue irr = xi(1, q(1, 2));
  CHECK_FALSE(irr.exact.has_value());
  CHECK(irr.approx == doctest::Approx(1.0 / std::pow(2.0, 1.5)).epsilon(1e-15));
  CHECK_THROWS_AS(xi(0, 0), PreconditionError);
}

TEST_CASE("builtin mother axioms") {
  MotherWavelet m = builtin_mother();
  AxiomReport r = check_axioms(m, 12);
  CHECK(r.mean_zero);
  CHECK(r.integral == 0);
  CHECK(r.size_ok);
  CHECK(r.holder_ok);

  // Reference constants straight from the node values and (1 + |x|)^2.
  Rational size = 0;
  for (std::size_t i = 0; i < m.breakpoints.size(); ++i) {
    Rational b = 1 + m.breakpoints[i];
    size = std::max(size, Rational(abs(m.values[i]) * b * b));
  }
  CHECK(r.min_size_c == size);
  CHECK(size == q(49, 16));

  Rational holder = 0;
  for (std::size_t i = 0; i < m.breakpoints.size(); ++i)
    for (std::size_t k = i + 1; k < m.breakpoints.size(); ++k) {
      Rational d = m.breakpoints[k] - m.breakpoints[i];
      Rational bi = 1 + m.breakpoints[i], bk = 1 + m.breakpoints[k];
      Rational env = std::max(Rational(1 / (bi * bi)), Rational(1 / (bk * bk)));
      holder = std::max(holder, Rational(abs(m.values[k] - m.values[i]) / (d * env)));
    }
  REQUIRE(r.min_holder_c.has_value());
  CHECK(*r.min_holder_c == holder);
  CHECK(holder == q(49, 4));
  CHECK_FALSE(r.holder_within_c);
}

TEST_CASE("haar mother has a jump") {
  AxiomReport r = check_axioms(haar_mother(), 6);
  CHECK(r.mean_zero);
  CHECK_FALSE(r.holder_ok);
  CHECK_FALSE(r.ok());
  CHECK_FALSE(r.failing_pair.empty());
}

TEST_CASE("mother validation") {
  MotherWavelet m = builtin_mother();
  m.c = -1;
  CHECK_THROWS_AS(check_axioms(m, 1), PreconditionError);
  m = builtin_mother();
  m.values.pop_back();
  CHECK_THROWS_AS(m.pl(), PreconditionError);
  m = builtin_mother();
  m.values = {0, 1, 1, 0};
  CHECK_FALSE(check_axioms(m, 1).mean_zero);
}

TEST_CASE("dilates have mean zero and scale-normalized size") {
  WaveletSystem sys = builtin();
  for (long n = 0; n <= 8; ++n)
    for (long j = 1; j <= (1L << n); j += 1 + (j % 5)) {
      PLFunction f = phi(n, j, sys);
      CHECK(f.integral().is_zero());
      CHECK(f.sup_abs() == sqrt2_pow(n));
      CHECK(f.support().measure() == pow2(-n));
      CHECK(f.l2_norm_sq() == sys.mother.pl().l2_norm_sq());
    }
  CHECK_THROWS_AS(phi(2, 5, sys), PreconditionError);
  CHECK_THROWS_AS(phi(2, 0, sys), PreconditionError);
  WaveletSystem line{builtin_mother(), Domain::real_line};
  CHECK_NOTHROW(phi(2, -3, line));
}

TEST_CASE("truncation commutes with dilation") {
  WaveletSystem sys = builtin();
  auto [up0, lo0] = sys.mother.pl().truncate(q(1, 4));
  for (long n = 0; n <= 7; ++n)
    for (long j = 1; j <= (1L << n); j += 3) {
      auto [up, lo] = truncate(n, j, q(1, 4), sys);
      PLFunction ref_up = up0.affine(n, Rational(j - 1), sqrt2_pow(n));
      PLFunction ref_lo = lo0.affine(n, Rational(j - 1), sqrt2_pow(n));
      CHECK((up - ref_up).is_zero());
      CHECK((lo - ref_lo).is_zero());
      CHECK((up + lo - phi(n, j, sys)).is_zero());
    }
}

TEST_CASE("truncation of the builtin mother") {
  auto [up, lo] = builtin_mother().pl().truncate(q(1, 4));
  // |psi| >= 1/4 on [1/16, 7/16] and [9/16, 15/16].
  CHECK(up.support() == PointSet::from_intervals({{q(1, 16), q(7, 16)}, {q(9, 16), q(15, 16)}}));
  CHECK(builtin_mother().pl().level_set(q(1, 4)).measure() == q(3, 4));
  CHECK(lo.sup_abs() == Quad2(q(1, 4)));
}

TEST_CASE("derived constants") {
  TruncationParams p = derive_constants(4, 1, 1, q(1, 4));
  CHECK(p.mu0 == 5);
  CHECK(p.nu0 == 1);
  CHECK(p.l == 5);
  // 2^mu0 > (c / lambda)^(1 / alpha) and 2^nu0 > (c / lambda)^(1 / (1 + beta)) / 4, minimal.
  CHECK(pow2(p.mu0) > 16);
  CHECK_FALSE(pow2(p.mu0 - 1) > 16);
  TruncationParams small = derive_constants(4, 1, 1, q(1, 64));
  CHECK(small.mu0 == 9);
  CHECK(small.nu0 == 3);
  CHECK(small.l == 11);
}

TEST_CASE("choose_lambda") {
  WaveletSystem sys = builtin();
  LambdaChoice c = choose_lambda(sys, q(1, 10));
  REQUIRE(c.found);
  CHECK(c.lambda == q(1, 4));
  CHECK(c.kappa_prime == q(3, 4));
  CHECK(c.params.mu0 == 5);
  CHECK(c.params.nu0 == 1);

  LambdaChoice loose = choose_lambda(sys, 1000);
  REQUIRE(loose.found);
  CHECK(loose.lambda == q(1, 2));

  // Rescaled copies give identical constants at every scale.
  auto probes = lambda_probes(sys, q(1, 4));
  REQUIRE(probes.size() > 1);
  for (const auto& pr : probes) {
    CHECK(pr.upper_l1 == probes.front().upper_l1);
    CHECK(pr.lower_l1 == probes.front().lower_l1);
    CHECK(pr.level_measure == probes.front().level_measure);
  }
}

TEST_CASE("sign and support checks over sampled shifts") {
  WaveletSystem sys = builtin();
  Rng rng(12);
  for (long n = 0; n <= 6; ++n) {
    auto taus = sample_shifts(rng, n, 6, 16);
    for (long j = 1; j <= (1L << n); ++j)
      for (std::size_t i = 0; i < taus.size(); ++i) {
        CHECK(sign_preserving_truncation_check(n, j, q(1, 4), 5, taus[i], sys));
        Rational t = taus[i] * pow2(kParams.nu0 - 2);
        CHECK(support_truncation_check(n, j, q(1, 4), 1, i % 2 ? -t : t, sys));
      }
  }
  // Extreme admissible shift.
  CHECK(support_truncation_check(3, 2, q(1, 4), 1, pow2(1 - 3 - 2), sys));
  CHECK_THROWS_AS(support_truncation_check(3, 2, q(1, 4), 1, pow2(1 - 3 - 1), sys), PreconditionError);
  // Cells of length 1/2: the cut at 1/2 separates the signs, a cut at 1/4 does not.
  CHECK(sign_preserving_truncation_check(0, 1, q(1, 4), 1, 0, sys));
  CHECK_FALSE(sign_preserving_truncation_check(0, 1, q(1, 4), 1, q(1, 4), sys));
}

TEST_CASE("subsystem grids") {
  CHECK(tau_k(1, kParams) == q(1, 992));
  CHECK(tau_k(1, kParams) - tau_k(2, kParams) == pow2(-10));
  for (long k = 1; k <= 6; ++k) {
    CHECK(grid_identity_check(k, kParams));
    CHECK(tau_k(k, kParams) > 0);
    CHECK(tau_k(k, kParams) < pow2(kParams.nu0 - k * kParams.l - 2));
    // tau_k - tau_(k+1) = 2^-(kl + mu0)
    CHECK(tau_k(k, kParams) - tau_k(k + 1, kParams) == pow2(-(k * kParams.l + kParams.mu0)));
  }
  CHECK(g_k_size(1, kParams) == 16);
  CHECK(g_k_size(2, kParams) == 512);
  WaveletSystem sys = builtin();
  CHECK(in_g_k(1, 16, kParams, sys));
  CHECK_FALSE(in_g_k(1, 17, kParams, sys));
  PLFunction psi = subsystem_psi(1, 3, kParams, sys);
  CHECK((psi - phi(5, 6, sys)).is_zero());
  CHECK_THROWS_AS(subsystem_psi(1, 17, kParams, sys), PreconditionError);
}

TEST_CASE("psi tree is a tree system") {
  WaveletSystem sys = builtin();
  PsiTree one = psi_tree(1, 1, kParams, sys);
  CHECK(one.system.nodes.size() == 16);
  CHECK(verify_tree_axioms(one.system).ok);
  PsiTree two = psi_tree(1, 2, kParams, sys);
  CHECK(two.system.nodes.size() == 16 + 512);
  CHECK(verify_tree_axioms(two.system).ok);
  Ordering order = adversarial_permutation(two.system);
  CHECK(verify_order_constraints(two.system, order).ok);
}

TEST_CASE("measure comparison") {
  WaveletSystem sys = builtin();
  L12Report single = l12_measure_check(0, 1, {1}, 0, 1, kParams, sys, q(1, 32));
  CHECK(single.fraction == Quad2(q(3, 8)));
  CHECK(single.ok);
  EkReport ek = e_k_sets(1, kParams, sys, q(3, 4));
  CHECK(Quad2(ek.E.measure()) == single.fraction);

  L12Report two = l12_measure_check(0, 2, {1, q(1, 2)}, 0, 1, kParams, sys, q(1, 32));
  CHECK(two.ok);
  CHECK(two.fraction_approx == doctest::Approx(0.558449213).epsilon(1e-8));

  CHECK_THROWS_AS(l12_measure_check(1, 1, {}, 0, 1, kParams, sys, q(1, 32)), PreconditionError);
  // Interval shorter than 2^-ml.
  CHECK_THROWS_AS(l12_measure_check(1, 2, {1}, 0, pow2(-6), kParams, sys, q(1, 32)), PreconditionError);
}

TEST_CASE("positive measure of a piecewise linear function") {
  PLFunction line = PLFunction::from_nodes({0, 1}, {Quad2(-1), Quad2(1)});
  CHECK(positive_measure(line, 0, 1) == Quad2(q(1, 2)));
  // Crossing at 1/sqrt2 for x -> 2x^... linear from -1 to sqrt2 - 1 on [0, 1): root at 1/sqrt2.
  PLFunction irr = PLFunction::from_nodes({0, 1}, {Quad2(-1), Quad2(-1, 1)});
  CHECK(positive_measure(irr, 0, 1) == Quad2(1) - Quad2(1) / Quad2(0, 1));
}
