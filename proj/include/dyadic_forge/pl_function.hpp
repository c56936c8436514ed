#pragma once

#include <string>
#include <vector>

#include "dyadic_forge/point_set.hpp"
#include "dyadic_forge/quad2.hpp"
#include "dyadic_forge/rational.hpp"
#include "dyadic_forge/step_function.hpp"

namespace dyadic_forge {

// Piecewise linear, possibly discontinuous. Piece i lives on [x_i, x_{i+1}) and runs
// linearly from start[i] (the value at x_i) to end[i] (the limit at x_{i+1} from the left).
class PLFunction {
 public:
  PLFunction() = default;
  PLFunction(std::vector<Rational> xs, std::vector<Quad2> start, std::vector<Quad2> end);

  // Graph nodes; a repeated abscissa encodes a jump.
  static PLFunction from_nodes(const std::vector<Rational>& xs, const std::vector<Quad2>& ys);
  static PLFunction from_step(const StepFunction& f);

  const std::vector<Rational>& xs() const { return xs_; }
  const std::vector<Quad2>& start() const { return start_; }
  const std::vector<Quad2>& end() const { return end_; }
  std::size_t pieces() const { return start_.size(); }
  bool empty() const { return start_.empty(); }
  bool is_zero() const;
  bool has_rational_values() const;

  Quad2 eval(const Rational& x) const;
  Quad2 left_limit(const Rational& x) const;

  Quad2 integral() const;
  Quad2 l1_norm() const;
  Quad2 l2_norm_sq() const;

  // x -> s * f(2^n x - shift)
  PLFunction affine(long n, const Rational& shift, const Quad2& s) const;
  PLFunction scaled(const Quad2& s) const;
  PLFunction abs() const;

  // Splits into f*1{|f| >= t} and f*1{|f| < t}; needs rational values.
  std::pair<PLFunction, PLFunction> truncate(const Rational& t) const;
  // {|f| > t}; needs rational values.
  PointSet level_set(const Rational& t) const;

  PointSet positive_set() const;
  PointSet negative_set() const;
  PointSet support() const;

  // Maximum of |f| over its closure, as max over piece endpoints.
  Quad2 sup_abs() const;

  std::string to_string() const;

 private:
  std::vector<Rational> xs_;
  std::vector<Quad2> start_;
  std::vector<Quad2> end_;
};

PLFunction operator+(const PLFunction& f, const PLFunction& g);
PLFunction operator-(const PLFunction& f, const PLFunction& g);

// Value at x of the piece [a, b) running from v to u.
Quad2 interpolate(const Rational& a, const Rational& b, const Quad2& v, const Quad2& u, const Rational& x);

}  // namespace dyadic_forge
