#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace augtree {

using BigInt = boost::multiprecision::cpp_int;
// Always stored in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

// Nonnegative integer matrix, row major.
using Mat = std::vector<std::vector<BigInt>>;

// Accepts "p/q" or "p"; q must be nonzero, sign normalised to the numerator.
Rational parse_rational(std::string_view text);

// "p" when the denominator is 1, else "p/q".
std::string format_rational(const Rational& r);

Rational rat_pow(const Rational& base, unsigned exp);
Rational rat_abs(const Rational& r);

Mat mat_identity(std::size_t n);
Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_pow(const Mat& a, unsigned k);
bool mat_equal(const Mat& a, const Mat& b);
bool mat_is_square(const Mat& a);
std::string mat_to_string(const Mat& a);

}  // namespace augtree
