#include "dyadic_forge/quad2.hpp"

#include <cmath>

#include "dyadic_forge/errors.hpp"

namespace dyadic_forge {

Quad2& Quad2::operator+=(const Quad2& o) {
  a += o.a;
  b += o.b;
  return *this;
}

Quad2& Quad2::operator-=(const Quad2& o) {
  a -= o.a;
  b -= o.b;
  return *this;
}

Quad2& Quad2::operator*=(const Quad2& o) {
  if (o.b == 0) return *this *= o.a;
  Rational na = a * o.a + 2 * b * o.b;
  Rational nb = a * o.b + b * o.a;
  a = std::move(na);
  b = std::move(nb);
  return *this;
}

Quad2& Quad2::operator*=(const Rational& r) {
  a *= r;
  if (b != 0) b *= r;
  return *this;
}

double Quad2::to_double() const { return a.get_d() + b.get_d() * std::sqrt(2.0); }

std::string Quad2::to_string() const {
  if (b == 0) return a.get_str();
  return a.get_str() + (b > 0 ? "+" : "-") + Rational(abs(b)).get_str() + "*sqrt2";
}

Quad2 sqrt2_pow(long m) {
  long h = m >= 0 ? m / 2 : -((-m + 1) / 2);  // floor(m/2)
  if (m - 2 * h == 0) return Quad2(pow2(h));
  return Quad2(Rational(0), pow2(h));
}

Quad2 operator+(Quad2 x, const Quad2& y) { return x += y; }
Quad2 operator-(Quad2 x, const Quad2& y) { return x -= y; }
Quad2 operator-(const Quad2& x) { return Quad2(-x.a, -x.b); }
Quad2 operator*(Quad2 x, const Quad2& y) { return x *= y; }
Quad2 operator*(Quad2 x, const Rational& r) { return x *= r; }
Quad2 operator*(const Rational& r, Quad2 x) { return x *= r; }

Quad2 inverse(const Quad2& x) {
  Rational norm = x.a * x.a - 2 * x.b * x.b;
  if (norm == 0) throw PreconditionError("division by zero in Q(sqrt2)");
  return Quad2(x.a / norm, -x.b / norm);
}

Quad2 operator/(const Quad2& x, const Quad2& y) {
  if (y.b == 0) {
    if (y.a == 0) throw PreconditionError("division by zero in Q(sqrt2)");
    return Quad2(x.a / y.a, x.b / y.a);
  }
  return x * inverse(y);
}

int sign(const Quad2& x) {
  int sa = sgn(x.a);
  int sb = sgn(x.b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: the larger of a^2 and 2b^2 wins.
  int c = cmp(x.a * x.a, 2 * x.b * x.b);
  if (c == 0) return 0;
  return c > 0 ? sa : sb;
}

Quad2 abs(const Quad2& x) { return sign(x) < 0 ? -x : x; }

int compare(const Quad2& x, const Quad2& y) {
  if (x.b == y.b) return cmp(x.a, y.a) < 0 ? -1 : (x.a == y.a ? 0 : 1);
  return sign(x - y);
}

bool operator==(const Quad2& x, const Quad2& y) { return x.a == y.a && x.b == y.b; }
bool operator!=(const Quad2& x, const Quad2& y) { return !(x == y); }
bool operator<(const Quad2& x, const Quad2& y) { return compare(x, y) < 0; }
bool operator<=(const Quad2& x, const Quad2& y) { return compare(x, y) <= 0; }
bool operator>(const Quad2& x, const Quad2& y) { return compare(x, y) > 0; }
bool operator>=(const Quad2& x, const Quad2& y) { return compare(x, y) >= 0; }

}  // namespace dyadic_forge
