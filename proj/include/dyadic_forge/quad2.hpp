#pragma once

#include <string>

#include "dyadic_forge/rational.hpp"

namespace dyadic_forge {

// a + b*sqrt(2) with rational a, b.
struct Quad2 {
  Rational a;
  Rational b;

  Quad2() : a(0), b(0) {}
  Quad2(long v) : a(v), b(0) {}  // NOLINT
  Quad2(const Rational& ra) : a(ra), b(0) {}  // NOLINT
  Quad2(const Rational& ra, const Rational& rb) : a(ra), b(rb) {}

  bool is_rational() const { return b == 0; }
  bool is_zero() const { return a == 0 && b == 0; }

  Quad2& operator+=(const Quad2& o);
  Quad2& operator-=(const Quad2& o);
  Quad2& operator*=(const Quad2& o);
  Quad2& operator*=(const Rational& r);

  double to_double() const;
  std::string to_string() const;
};

// 2^(m/2), exact.
Quad2 sqrt2_pow(long m);

Quad2 operator+(Quad2 x, const Quad2& y);
Quad2 operator-(Quad2 x, const Quad2& y);
Quad2 operator-(const Quad2& x);
Quad2 operator*(Quad2 x, const Quad2& y);
Quad2 operator*(Quad2 x, const Rational& r);
Quad2 operator*(const Rational& r, Quad2 x);

// Division is exact in Q(sqrt2): 1/(a+b√2) = (a-b√2)/(a²-2b²).
Quad2 inverse(const Quad2& x);
Quad2 operator/(const Quad2& x, const Quad2& y);

int sign(const Quad2& x);
Quad2 abs(const Quad2& x);
int compare(const Quad2& x, const Quad2& y);

bool operator==(const Quad2& x, const Quad2& y);
bool operator!=(const Quad2& x, const Quad2& y);
bool operator<(const Quad2& x, const Quad2& y);
bool operator<=(const Quad2& x, const Quad2& y);
bool operator>(const Quad2& x, const Quad2& y);
bool operator>=(const Quad2& x, const Quad2& y);

}  // namespace dyadic_forge
