#include "augtree/rational.hpp"

#include <sstream>

#include "augtree/errors.hpp"

namespace augtree {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty())
    throw UsageError("empty integer in rational '" + std::string(whole) + "'");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size())
    throw UsageError("bare sign in rational '" + std::string(whole) + "'");
  for (; i < text.size(); ++i)
    if (text[i] < '0' || text[i] > '9')
      throw UsageError("invalid digit at position " + std::to_string(i) +
                       " in rational '" + std::string(whole) + "'");
  return BigInt(std::string(text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  BigInt num = parse_integer(text.substr(0, slash), text);
  BigInt den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw UsageError("zero denominator in rational '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rat_pow(const Rational& base, unsigned exp) {
  Rational out(1);
  Rational b = base;
  while (exp) {
    if (exp & 1u) out *= b;
    b *= b;
    exp >>= 1u;
  }
  return out;
}

Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

Mat mat_identity(std::size_t n) {
  Mat m(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

bool mat_is_square(const Mat& a) {
  for (const auto& row : a)
    if (row.size() != a.size()) return false;
  return true;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.empty() || b.empty() || a[0].size() != b.size())
    throw UsageError("matrix dimension mismatch in product");
  Mat out(a.size(), std::vector<BigInt>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

Mat mat_pow(const Mat& a, unsigned k) {
  if (!mat_is_square(a)) throw UsageError("matrix power of a non-square matrix");
  Mat out = mat_identity(a.size());
  Mat b = a;
  while (k) {
    if (k & 1u) out = mat_mul(out, b);
    b = mat_mul(b, b);
    k >>= 1u;
  }
  return out;
}

bool mat_equal(const Mat& a, const Mat& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::string mat_to_string(const Mat& a) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < a[i].size(); ++j) os << (j ? "," : "") << a[i][j].str();
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace augtree
