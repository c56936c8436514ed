#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dyadic_forge/pl_function.hpp"
#include "dyadic_forge/point_set.hpp"
#include "dyadic_forge/quad2.hpp"
#include "dyadic_forge/rational.hpp"
#include "dyadic_forge/tree.hpp"

namespace dyadic_forge {

struct XiValue {
  std::optional<Rational> exact;
  long double approx = 0;  // error below 2^-60 when not exact
};

// 1 / (1 + |x|)^(1 + beta)
XiValue xi(const Rational& x, const Rational& beta);

struct MotherWavelet {
  std::vector<Rational> breakpoints;  // may repeat to encode a jump
  std::vector<Rational> values;
  Rational c = 4;
  Rational alpha = 1;
  Rational beta = 1;

  PLFunction pl() const;
};

// Breakpoints (0, 1/4, 3/4, 1), values (0, 1, -1, 0), c = 4, alpha = beta = 1.
MotherWavelet builtin_mother();
MotherWavelet haar_mother();

enum class Domain { unit_interval, real_line };

struct WaveletSystem {
  MotherWavelet mother;
  Domain domain = Domain::unit_interval;
};

bool in_index_set(long n, const BigInt& j, const WaveletSystem& sys);

// 2^(n/2) psi(2^n x - (j - 1)).
PLFunction phi(long n, const BigInt& j, const WaveletSystem& sys);

struct AxiomReport {
  bool mean_zero = false;
  Rational integral;
  bool size_ok = false;       // |psi| <= c xi at the nodes, all tested scales
  Rational min_size_c;        // smallest c that works at the nodes
  bool holder_ok = false;     // finite symmetric Hoelder constant on node pairs within distance 1
  bool holder_within_c = false;  // that constant is at most the declared c
  std::optional<Rational> min_holder_c;  // none when a jump defeats every c
  long double min_holder_c_approx = 0;
  std::string failing_pair;
  bool ok() const { return mean_zero && size_ok && holder_ok; }
};

AxiomReport check_axioms(const MotherWavelet& mother, long depth);

// (upper, lower) truncations of phi_{n,j} at level lambda 2^(n/2).
std::pair<PLFunction, PLFunction> truncate(long n, const BigInt& j, const Rational& lambda, const WaveletSystem& sys);

struct TruncationParams {
  Rational lambda;
  long mu0 = 0;
  long nu0 = 0;
  long l = 0;
};

TruncationParams derive_constants(const Rational& c, const Rational& alpha, const Rational& beta, const Rational& lambda);

bool sign_preserving_truncation_check(long n, const BigInt& j, const Rational& lambda, long mu0, const Rational& tau,
                                      const WaveletSystem& sys);

// Window centred at the support midpoint (j - 1/2) 2^-n with half-width 2^(nu0-1-n), shifted by tau.
bool support_truncation_check(long n, const BigInt& j, const Rational& lambda, long nu0, const Rational& tau,
                              const WaveletSystem& sys);

struct LambdaProbe {
  long n = 0;
  BigInt j;
  Rational lower_l1;  // 2^(n/2) ||lower||_1
  Rational upper_l1;  // 2^(n/2) ||upper||_1
  Rational level_measure;  // 2^n |{|upper| > lambda 2^(n/2)}|
};

struct LambdaChoice {
  bool found = false;
  Rational lambda;
  Rational kappa;        // min upper_l1
  Rational kappa_prime;  // min level_measure
  TruncationParams params;
  std::vector<LambdaProbe> probes;
  long tried = 0;
};

LambdaChoice choose_lambda(const WaveletSystem& sys, const Rational& epsilon);

// Probes for one lambda; exposed for covariance tests.
std::vector<LambdaProbe> lambda_probes(const WaveletSystem& sys, const Rational& lambda);

// ---- subsystem and tree ----

Rational tau_k(long k, const TruncationParams& p);
bool grid_identity_check(long k, const TruncationParams& p);

// j ranges over G_k = {1 <= j 2^nu0 <= 2^(kl)} on the unit interval.
BigInt g_k_size(long k, const TruncationParams& p);
bool in_g_k(long k, const BigInt& j, const TruncationParams& p, const WaveletSystem& sys);
PLFunction subsystem_psi(long k, const BigInt& j, const TruncationParams& p, const WaveletSystem& sys);

// Upper truncation of Psi_{k,j} as a shared-base tree function.
TreeFunction psi_bar_tree_function(long k, const BigInt& j, const TruncationParams& p, const WaveletSystem& sys,
                                   const std::shared_ptr<const PLFunction>& upper_mother);

struct PsiTree {
  TreeSystem system;
  std::vector<long> level_k;           // k of each node
  std::vector<BigInt> index_j;         // j of each node
};

PsiTree psi_tree(long k_lo, long k_hi, const TruncationParams& p, const WaveletSystem& sys);

// ---- measure comparison ----

struct L12Report {
  Quad2 measure;   // |{S_upper > 8 S_lower} ∩ Delta|
  Quad2 fraction;  // measure / |Delta|
  double fraction_approx = 0;
  bool ok = false;
};

L12Report l12_measure_check(long m, long M, const std::vector<Rational>& a, const Rational& lo, const Rational& hi,
                            const TruncationParams& p, const WaveletSystem& sys, const Rational& c0);

// Exact measure of {g > 0} ∩ [lo, hi) for piecewise linear g with Quad2 values.
Quad2 positive_measure(const PLFunction& g, const Rational& lo, const Rational& hi);

// Sum over j in [j_lo, j_hi] of s * pattern(2^n x - (j P - 1)); pattern must be supported in [0, P).
PLFunction periodic_sum(const PLFunction& pattern, long n, long P, const BigInt& j_lo, const BigInt& j_hi,
                        const Quad2& s);

struct Calibration {
  Rational lambda;
  long mu0 = 0, nu0 = 0, l = 0;
  Rational kappa, kappa_prime;
  Rational c0;
  Rational slack;
  std::string mother_hash;
  TruncationParams params() const { return {lambda, mu0, nu0, l}; }
};

}  // namespace dyadic_forge
