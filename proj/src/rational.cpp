#include "dyadic_forge/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "dyadic_forge/errors.hpp"

namespace dyadic_forge {

Rational make_rational(long num, long den) {
  if (den == 0) throw PreconditionError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw PreconditionError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational pow2(long e) {
  BigInt p;
  if (e >= 0) {
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return Rational(p);
  }
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
  return Rational(BigInt(1), p);
}

BigInt floor_of(const Rational& x) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

BigInt ceil_of(const Rational& x) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

bool is_dyadic(const Rational& x) {
  const auto& d = x.get_den_mpz_t();
  return mpz_popcount(d) == 1;
}

std::optional<long> dyadic_exponent(const Rational& x) {
  if (!is_dyadic(x)) return std::nullopt;
  if (x == 0) return 0L;
  long den_bits = static_cast<long>(mpz_scan1(x.get_den_mpz_t(), 0));
  if (den_bits > 0) return den_bits;
  long num_zeros = static_cast<long>(mpz_scan1(x.get_num_mpz_t(), 0));
  return -num_zeros;
}

long two_adic_valuation(const Rational& x) {
  if (x == 0) throw PreconditionError("valuation of zero");
  long vn = static_cast<long>(mpz_scan1(x.get_num_mpz_t(), 0));
  long vd = static_cast<long>(mpz_scan1(x.get_den_mpz_t(), 0));
  return vn - vd;
}

std::string to_string(const Rational& x) { return x.get_str(); }

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw PreconditionError("malformed rational: " + s);
  if (q.get_den() == 0) throw PreconditionError("zero denominator: " + s);
  q.canonicalize();
  return q;
}

double to_double(const Rational& x) { return x.get_d(); }

Rational from_double(double d) {
  if (!std::isfinite(d)) throw PreconditionError("non-finite value");
  Rational q(d);
  q.canonicalize();
  return q;
}

std::int64_t to_int64(const BigInt& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer exceeds 64 bits");
  return z.get_si();
}

}  // namespace dyadic_forge
