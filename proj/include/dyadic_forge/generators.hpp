#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dyadic_forge/dilation.hpp"
#include "dyadic_forge/dyadic.hpp"
#include "dyadic_forge/point_set.hpp"
#include "dyadic_forge/step_function.hpp"
#include "dyadic_forge/tree.hpp"

namespace dyadic_forge {

using Rng = std::mt19937_64;

// Seed for trial t of a sweep keyed by (seed, t).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t t);

struct CollectionShape {
  std::size_t max_size = 4096;
  long min_scale = -20;
  long max_scale = 20;
  bool distinct = true;         // drop repeats; the result has distinct set
  double duplicate_rate = 0.05;  // used only when distinct is false
};

// Mix of descending chains, sibling bursts and scattered intervals.
IntervalCollection random_collection(Rng& rng, const CollectionShape& shape);

// Distinct intervals inside [0,1) at scales 0..max_scale.
IntervalCollection random_cover(Rng& rng, long max_scale, std::size_t max_size);

// Family with E_{k+1} keeping one half or quarter of each dyadic cell of E_k, and f_k constant on those cells.
struct AdmissibleFamily {
  std::vector<StepFunction> f;
  std::vector<PointSet> E;
};

AdmissibleFamily random_admissible_family(Rng& rng, std::size_t max_len);

// Random positive coefficients c with small numerators and power-of-two denominators.
std::vector<Rational> random_coefficients(Rng& rng, std::size_t n);

// Phi on a 2^-p grid over [0, 1) with p <= max_p, distinct indices, positive c.
Combination random_combination(Rng& rng, std::size_t max_terms, long max_p, long max_m);

// count shifts in [0, 2^-n): dyadic ones at depth n + extra, plus (1/3) 2^-n first.
std::vector<Rational> sample_shifts(Rng& rng, long n, long extra, std::size_t count);

struct TreeInstance {
  std::vector<Partition> F, C;
  std::vector<TreeEntry> entries;
};

// Nested shifted grids over [0, 1) and sign-preserving functions on chosen cells.
TreeInstance random_tree_instance(Rng& rng, std::size_t max_nodes);

}  // namespace dyadic_forge
