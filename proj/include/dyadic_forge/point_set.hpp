#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dyadic_forge/rational.hpp"

namespace dyadic_forge {

struct HalfOpen {
  Rational a;
  Rational b;
};

// Finite union of half-open intervals, stored sorted, disjoint and non-adjacent.
class PointSet {
 public:
  PointSet() = default;
  static PointSet interval(const Rational& a, const Rational& b);
  static PointSet from_intervals(std::vector<HalfOpen> parts);

  const std::vector<HalfOpen>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  Rational measure() const;
  bool contains_point(const Rational& x) const;
  bool contains(const PointSet& other) const;
  bool intersects(const PointSet& other) const;

  PointSet unite(const PointSet& other) const;
  PointSet intersect(const PointSet& other) const;
  PointSet minus(const PointSet& other) const;
  PointSet clip(const Rational& lo, const Rational& hi) const;
  Rational measure_in(const Rational& lo, const Rational& hi) const;

  std::string to_string() const;

  friend bool operator==(const PointSet& x, const PointSet& y);

 private:
  std::vector<HalfOpen> parts_;
  void normalize();
};

}  // namespace dyadic_forge
