#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace dyadic_forge {

// Exact rational, always kept canonical (reduced, positive denominator).
using Rational = mpq_class;
using BigInt = mpz_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const BigInt& num, const BigInt& den);

// 2^e for any integer e.
Rational pow2(long e);

BigInt floor_of(const Rational& x);
BigInt ceil_of(const Rational& x);

bool is_dyadic(const Rational& x);

// Smallest p with x * 2^p an integer; nullopt if x is not dyadic.
std::optional<long> dyadic_exponent(const Rational& x);

// 2-adic valuation of a nonzero rational (may be negative).
long two_adic_valuation(const Rational& x);

std::string to_string(const Rational& x);
Rational parse_rational(const std::string& s);

double to_double(const Rational& x);

// Exact conversion of a finite double.
Rational from_double(double d);

std::int64_t to_int64(const BigInt& z);

}  // namespace dyadic_forge
