#pragma once

#include <string>
#include <vector>

#include "dyadic_forge/point_set.hpp"
#include "dyadic_forge/quad2.hpp"
#include "dyadic_forge/rational.hpp"

namespace dyadic_forge {

// Piecewise constant with values[i] on [breakpoints[i], breakpoints[i+1]); zero outside.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<Rational> breakpoints, std::vector<Quad2> values);

  static StepFunction indicator(const Rational& a, const Rational& b, const Quad2& v = Quad2(1));

  const std::vector<Rational>& breakpoints() const { return bps_; }
  const std::vector<Quad2>& values() const { return vals_; }
  std::size_t pieces() const { return vals_.size(); }
  bool is_zero() const;

  Quad2 eval(const Rational& x) const;

  Quad2 integral() const;
  Quad2 l1_norm() const;
  Quad2 l2_norm_sq() const;

  StepFunction scaled(const Quad2& s) const;
  // Support of the nonzero, positive and negative parts.
  PointSet support() const;
  PointSet positive_set() const;
  PointSet negative_set() const;

  bool has_dyadic_breakpoints() const;
  std::string to_string() const;

  friend bool operator==(const StepFunction& f, const StepFunction& g);

 private:
  std::vector<Rational> bps_;
  std::vector<Quad2> vals_;
};

StepFunction operator+(const StepFunction& f, const StepFunction& g);
StepFunction operator-(const StepFunction& f, const StepFunction& g);
StepFunction operator*(const StepFunction& f, const StepFunction& g);

Quad2 inner(const StepFunction& f, const StepFunction& g);
Quad2 l1_norm(const StepFunction& f);
Quad2 l2_norm_sq(const StepFunction& f);

}  // namespace dyadic_forge
