#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dyadic_forge/rational.hpp"

namespace dyadic_forge {

class StepFunction;

// [(j-1) 2^-m, j 2^-m)
struct DyadicInterval {
  long m = 0;
  std::int64_t j = 1;

  Rational left() const;
  Rational right() const;
  Rational length() const;
  std::string to_string() const;

  friend bool operator==(const DyadicInterval& a, const DyadicInterval& b) {
    return a.m == b.m && a.j == b.j;
  }
  friend bool operator!=(const DyadicInterval& a, const DyadicInterval& b) { return !(a == b); }
};

struct DyadicIntervalHash {
  std::size_t operator()(const DyadicInterval& I) const noexcept {
    auto h = std::hash<std::int64_t>{}(I.j);
    return h ^ (std::hash<long>{}(I.m) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

// Scale bound for one run; index arithmetic stays in 128-bit integers.
inline constexpr long kMaxScale = 62;

enum class Relation { equal, I_inside_J, J_inside_I, disjoint };

const char* to_string(Relation r);

DyadicInterval parent(const DyadicInterval& I);

// Ancestor of I at scale m (m <= I.m).
DyadicInterval ancestor_at(const DyadicInterval& I, long m);

// I ⊆ J.
bool contained_in(const DyadicInterval& I, const DyadicInterval& J);

Relation relation(const DyadicInterval& I, const DyadicInterval& J);

// Order by left endpoint, then by scale ascending.
bool canonical_less(const DyadicInterval& a, const DyadicInterval& b);

// Ascending (m, j): decreasing length with ties by index.
bool scale_index_less(const DyadicInterval& a, const DyadicInterval& b);

struct IntervalCollection {
  std::vector<DyadicInterval> items;
  bool distinct = false;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  // Throws if distinct is set and two items coincide.
  void validate() const;
  bool has_duplicates() const;
};

void sort_canonical(std::vector<DyadicInterval>& v);

IntervalCollection dmax(const IntervalCollection& U);
IntervalCollection dmin(const IntervalCollection& U);
bool nested_in(const IntervalCollection& U, const IntervalCollection& V);
StepFunction indicator_sum(const IntervalCollection& U);

// Integer coordinates x * 2^M for a fixed scale M shared by a family of intervals.
using Coord = __int128;

struct DyadicFrame {
  long M = 0;

  static DyadicFrame covering(const std::vector<DyadicInterval>& v);
  Coord left(const DyadicInterval& I) const;
  Coord right(const DyadicInterval& I) const;
  Rational to_rational(Coord c) const;
  Rational measure(Coord len) const;
};

std::string coord_to_string(Coord c);
BigInt coord_to_bigint(Coord c);
// Throws PreconditionError beyond 120 bits.
Coord bigint_to_coord(const BigInt& z);

// Sweep of an indicator sum in integer coordinates: pieces [x_i, x_{i+1}) with counts.
struct CountProfile {
  std::vector<Coord> xs;             // breakpoints
  std::vector<std::int64_t> counts;  // counts[i] on [xs[i], xs[i+1])
};

CountProfile count_profile(const std::vector<DyadicInterval>& v, const DyadicFrame& F);

// Merged sorted half-open runs [a, b) in integer coordinates.
using CoordRuns = std::vector<std::pair<Coord, Coord>>;

CoordRuns runs_where(const CountProfile& p, const std::function<bool(std::int64_t)>& pred);
Coord runs_measure(const CoordRuns& r);
bool runs_contain(const CoordRuns& r, Coord a, Coord b);
Coord runs_intersection_measure(const CoordRuns& r, Coord a, Coord b);

// A grid tau + D_m: cells [tau + (j-1) 2^-m, tau + j 2^-m).
struct ShiftedGrid {
  long m = 0;
  Rational tau = 0;

  Rational cell_left(const BigInt& j) const;
  Rational cell_right(const BigInt& j) const;
  // Index j of the cell containing x.
  BigInt index_of(const Rational& x) const;
  bool is_breakpoint(const Rational& x) const;
  bool same_partition(const ShiftedGrid& o) const;
};

}  // namespace dyadic_forge
