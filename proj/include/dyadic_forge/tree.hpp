#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dyadic_forge/dyadic.hpp"
#include "dyadic_forge/pl_function.hpp"
#include "dyadic_forge/point_set.hpp"
#include "dyadic_forge/step_function.hpp"

namespace dyadic_forge {

inline const Rational kDefaultWindow = Rational(2);

// Either explicit breakpoints or a shifted dyadic grid, over the window [-W, W).
class Partition {
 public:
  static Partition explicit_points(std::vector<Rational> points, const Rational& W = kDefaultWindow);
  static Partition grid(long m, const Rational& tau, const Rational& W = kDefaultWindow);

  bool is_grid() const { return is_grid_; }
  const ShiftedGrid& shifted_grid() const { return grid_; }
  const std::vector<Rational>& points() const { return points_; }
  const Rational& window() const { return W_; }

  // Cell j is [left(j), right(j)); explicit cells are numbered from 1 at -W.
  BigInt cell_of(const Rational& x) const;
  Rational cell_left(const BigInt& j) const;
  Rational cell_right(const BigInt& j) const;
  bool is_breakpoint(const Rational& x) const;
  // Common denominator of all breakpoints (grid: of tau and 2^-m).
  BigInt denominator() const;

 private:
  bool is_grid_ = false;
  ShiftedGrid grid_;
  std::vector<Rational> points_;
  Rational W_ = kDefaultWindow;
};

// C refines F: every breakpoint of F inside the window is one of C.
bool refines(const Partition& F, const Partition& C);
bool sign_preserving(const Partition& C, const PLFunction& f);
bool sign_preserving(const Partition& C, const StepFunction& f);

// x -> scale * base(2^n x - shift); shares the base among many nodes.
struct TreeFunction {
  std::shared_ptr<const PLFunction> base;
  long n = 0;
  Rational shift = 0;
  Quad2 scale = Quad2(1);

  static TreeFunction of(PLFunction f);
  PLFunction materialize() const;
};

// Sets are unions of runs in integer coordinates x * denom.
struct TreeNode {
  TreeFunction f;
  CoordRuns plus;
  CoordRuns minus;
  long level = 0;
  BigInt cell = 0;
};

struct TreeSystem {
  BigInt denom = 1;
  std::vector<TreeNode> nodes;

  PointSet plus_set(std::size_t i) const;
  PointSet minus_set(std::size_t i) const;
};

struct ExplicitNode {
  PLFunction f;
  PointSet plus;
  PointSet minus;
};

TreeSystem make_tree_system(const std::vector<ExplicitNode>& nodes);

struct TreeVerdict {
  bool ok = true;
  std::size_t k = 0, n = 0;  // 1-based; k == n for single-node clauses
  std::string clause;
};

TreeVerdict verify_tree_axioms(const TreeSystem& sys);

struct TreeEntry {
  std::size_t level = 0;  // index into the partition sequences
  BigInt cell;            // j of J_{n,j}, a cell of F[level]
  TreeFunction f;
};

// Throws PreconditionError naming the failing index.
TreeSystem build_tree(const std::vector<Partition>& F, const std::vector<Partition>& C, std::vector<TreeEntry> entries);

// order[p] = index of the node placed at position p.
using Ordering = std::vector<std::size_t>;

Ordering adversarial_permutation(const TreeSystem& sys);

struct OrderVerdict {
  bool ok = true;
  std::size_t k = 0, n = 0;
  std::string clause;
  std::size_t pairs_checked = 0;
};

// U_k ⊂ U_n^+ forces k before n; U_k ⊂ U_n^- forces k after n.
OrderVerdict verify_order_constraints(const TreeSystem& sys, const Ordering& order);

struct RearrangementReport {
  bool ok = true;          // max_{p<=q} |sum| >= 1/2 sum |f|
  bool prefix_ok = true;   // max_m |prefix| >= 1/4 sum |f|
  double worst_ratio = 0;
  double worst_prefix_ratio = 0;
  std::size_t samples = 0;
  std::optional<Rational> failing_x;
};

RearrangementReport verify_rearrangement_bound(const TreeSystem& sys, const Ordering& order);

bool is_bijection(const Ordering& order, std::size_t N);

// Stabbing structure over half-open hulls: each layer keeps pairwise disjoint hulls.
class LayeredIndex {
 public:
  void insert(std::size_t id, Coord lo, Coord hi);
  template <class Fn>
  void for_each_overlap(Coord lo, Coord hi, Fn&& fn) const {
    for (const auto& layer : layers_) {
      auto it = layer.upper_bound(lo);
      if (it != layer.begin()) --it;
      for (; it != layer.end() && it->first < hi; ++it)
        if (it->second.first > lo) fn(it->second.second);
    }
  }
  std::size_t layers() const { return layers_.size(); }

 private:
  std::vector<std::map<Coord, std::pair<Coord, std::size_t>>> layers_;
};

bool runs_subset(const CoordRuns& a, const CoordRuns& b);
bool runs_intersect(const CoordRuns& a, const CoordRuns& b);
CoordRuns runs_union(const CoordRuns& a, const CoordRuns& b);

}  // namespace dyadic_forge
