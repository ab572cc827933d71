// Exact integer/rational arithmetic used by the counting layer.  Every
// combinatorial quantity is computed exactly and only converted to double
// at the last step.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace pssmfa {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

/// n! as an exact integer.  Requires n >= 0.
BigInt factorial(int n);

/// Binomial coefficient C(n, k); zero outside 0 <= k <= n.
BigInt binomial(int n, int k);

/// Falling factorial n (n-1) ... (n-k+1); one when k == 0, zero when k > n.
BigInt falling_factorial(int n, int k);

double to_double(const BigInt& v);
double to_double(const Rational& v);

/// "num/den" in lowest terms; plain integers render without the "/1".
std::string to_string(const Rational& v);

} // namespace pssmfa
