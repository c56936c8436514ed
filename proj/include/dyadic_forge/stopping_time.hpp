#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dyadic_forge/dyadic.hpp"
#include "dyadic_forge/point_set.hpp"
#include "dyadic_forge/quad2.hpp"
#include "dyadic_forge/step_function.hpp"

namespace dyadic_forge {

struct CoverageReport {
  long l = 0;
  std::int64_t min_coverage = 0;
  std::size_t card = 0;
  Rational witness;
  bool hypothesis = false;  // S >= l on all of I
  bool holds = false;       // hypothesis implies card >= 2^l - 1
};

CoverageReport coverage_card_check(const IntervalCollection& U, const DyadicInterval& I, long l);

// Exact outcome of the checks run on a split.
struct SplitChecks {
  bool bounded = false;             // S <= 2n
  bool rejected_saturated = false;  // rejected intervals lie in {S = 2n}
  bool density = false;             // |{S = 2n}| <= 2^(1-n) |{S != 0}|
  bool nested = false;              // rejected ⋐ accepted
  bool density_applies = true;      // false for inputs with repeated intervals
  Rational saturation_measure;
  Rational support_measure;
  bool all() const { return bounded && rejected_saturated && (density || !density_applies) && nested; }
};

struct SplitResult {
  IntervalCollection accepted;
  IntervalCollection rejected;
  long level = 0;
  std::vector<HalfOpen> saturation;
  SplitChecks checks;
};

// Throws PreconditionError if card(U) > 2^n, PropertyViolation if a check fails.
SplitResult split_level(const IntervalCollection& U, long n);

struct LayerChecks {
  bool partition = false;   // layers reassemble U as a multiset
  bool nested = false;      // U_k ⋐ U_{k-1}
  bool bounded = false;     // S_k <= 2n
  bool inside_saturation = false;
  bool local_density = false;  // per minimal interval of the previous layer
  bool density_applies = true;  // false for inputs with repeated intervals
  bool all() const {
    return partition && nested && bounded && inside_saturation && (local_density || !density_applies);
  }
};

struct LayeredDecomposition {
  std::vector<IntervalCollection> layers;
  long level = 0;
  LayerChecks checks;
};

LayeredDecomposition iterate_decomposition(const IntervalCollection& U, long n);

struct OrthogonalityReport {
  bool hypotheses_hold = false;
  std::string violation;  // empty when hypotheses hold
  long k = 0, m = 0;      // 1-based indices of the failing pair, if any
  Quad2 lhs_sq;
  Quad2 rhs_sq;
  bool inequality_ok = false;
};

OrthogonalityReport almost_orthogonality_check(const std::vector<StepFunction>& f, const std::vector<PointSet>& E);

// ||f||^2 restricted to E.
Quad2 l2_norm_sq_on(const StepFunction& f, const PointSet& E);

struct BoundReport {
  std::size_t N = 0;
  Rational lhs_sq;
  Rational rhs_base;
  long factor = 0;  // 12 * max(2, ceil(log2 N))
  bool bound_ok = false;
};

long ceil_log2(std::uint64_t N);
long bound_factor(std::uint64_t N);

BoundReport haar_bound_report(const IntervalCollection& U, const std::vector<Rational>& c);

// All dyadic subintervals of [0,1) of length >= 2^-n.
IntervalCollection full_tree(long n);

}  // namespace dyadic_forge
