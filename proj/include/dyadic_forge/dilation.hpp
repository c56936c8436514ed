#pragma once

#include <cstdint>
#include <vector>

#include "dyadic_forge/quad2.hpp"
#include "dyadic_forge/rational.hpp"
#include "dyadic_forge/step_function.hpp"

namespace dyadic_forge {

struct DilationIndex {
  long m = 0;
  std::int64_t l = 0;
  friend bool operator==(const DilationIndex& a, const DilationIndex& b) { return a.m == b.m && a.l == b.l; }
};

struct Term {
  DilationIndex idx;
  Rational c;
};

struct Combination {
  StepFunction phi;
  std::vector<Term> terms;
};

inline constexpr std::size_t kMaxRefinementPieces = 10'000'000;

// 2^(m/2) phi(2^m x - l).
StepFunction dilate_translate(const StepFunction& phi, const DilationIndex& idx);

// Throws on N < 2, repeated indices or nonpositive coefficients.
void validate_combination(const Combination& comb);

// Exact squared L2 norm of the sum; `checked` = false skips validate_combination.
Quad2 combination_norm_sq(const Combination& comb, bool checked = true);

// Smallest p >= 0 such that phi is constant on every cell of the 2^-p grid.
long grid_exponent(const StepFunction& phi);

struct T3Report {
  std::size_t N = 0;
  Quad2 lhs_sq;
  Quad2 rhs_base;  // ||phi||_1^2 * sum c^2
  long factor = 0;
  bool bound_ok = false;
  long p = 0;
  bool scaled_bound_ok = false;  // lhs <= factor * 2^p * rhs_base
};

T3Report t3_report(const Combination& comb, bool checked = true);

// phi = 1_[0,1) over the even scales 0, 2, ..., 2n with c = 2^(-m/2): the sum is n+1 on [0,1).
Combination t3_full_tree(long n);

}  // namespace dyadic_forge
