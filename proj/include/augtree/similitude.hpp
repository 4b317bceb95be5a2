#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "augtree/rational.hpp"

namespace augtree {

// Invertible affine similarity x ↦ s·O·x + t.  Exact in one dimension
// (O = ±1 and t rational); in higher dimensions O and t are floating
// with a declared tolerance while the scale s stays an exact rational,
// so the level structure of the symbolic space is exact in every
// dimension.
class Xform {
 public:
  Xform() = default;

  static Xform identity(int dim);
  // d = 1, scale > 0
  static Xform line(const Rational& scale, bool reflect, const Rational& translate);
  // d >= 2, ortho row-major d*d, translate length d
  static Xform general(int dim, const Rational& scale, std::vector<double> ortho,
                       std::vector<double> translate);

  int dim() const { return dim_; }
  const Rational& scale() const { return scale_; }
  bool reflect() const { return reflect_; }
  const Rational& translate1() const { return t1_; }
  const std::vector<double>& ortho() const { return ortho_; }
  const std::vector<double>& translaten() const { return tn_; }

  // signed linear coefficient, d = 1 only
  Rational coeff1() const { return reflect_ ? Rational(-scale_) : scale_; }

  Xform compose(const Xform& g) const;  // this ∘ g
  Xform inverse() const;
  bool equals(const Xform& o, double tol) const;
  // total order usable as a map key; exact for d = 1
  bool before(const Xform& o) const;

  std::vector<double> apply(const std::vector<double>& x) const;  // d >= 2

 private:
  int dim_ = 1;
  Rational scale_{1};
  bool reflect_ = false;
  Rational t1_{0};
  std::vector<double> ortho_;  // d >= 2
  std::vector<double> tn_;     // d >= 2
};

// Free-standing composition with the dimension-mismatch check required of
// the public operation; Xform::compose assumes the check already ran.
Xform compose(const Xform& f, const Xform& g);

struct Word {
  std::vector<std::uint8_t> syms;  // symbols 1..N, empty = root
  Rational ratio{1};               // product of the symbol ratios

  bool root() const { return syms.empty(); }
  std::size_t length() const { return syms.size(); }
};

// Length-then-lexicographic order; this is the word order used everywhere
// (canonical members, component identities, retained parent edges).
bool shortlex_less(const Word& a, const Word& b);
bool shortlex_less_syms(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

struct EnumLimits {
  std::size_t max_vertices_per_level = 200000;
};

struct IfsSpec {
  int dimension = 1;
  Rational kappa{0};
  std::vector<Xform> maps;  // contractions, symbol i is maps[i-1]
  double tol = 1e-12;
  Rational r_min{0};

  int nmaps() const { return static_cast<int>(maps.size()); }
  void validate() const;  // throws UsageError
  void finish();          // computes r_min, validates

  static IfsSpec from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// "p/q"-digit rendering of a word; "" is the root.
std::string word_string(const Word& w, int nmaps);

Xform word_map(const IfsSpec& spec, const Word& w);
Word extend_word(const IfsSpec& spec, const Word& w, int symbol);

bool maps_equal(const IfsSpec& spec, const Xform& f, const Xform& g);

// true iff w lies in the level set X_n
bool level_membership(const IfsSpec& spec, const Word& w, int n);

// X_{n+1}-children of an X_n word, in symbol-extension order
void expand_children(const IfsSpec& spec, const Word& w, const Rational& child_threshold,
                     std::vector<Word>& out, const EnumLimits& lim);

// all of X_n, shortlex sorted
std::vector<Word> enumerate_level(const IfsSpec& spec, int n, const EnumLimits& lim = {});

// level of w in X, or -1 when w is skipped by the threshold rule
int word_level(const IfsSpec& spec, const Word& w);

}  // namespace augtree
