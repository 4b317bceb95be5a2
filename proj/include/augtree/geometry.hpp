#pragma once

#include "augtree/similitude.hpp"

namespace augtree {

// Certified enclosure of the attractor or of one of its pieces.  Exact
// rational interval in one dimension, floating axis-aligned box above.
struct Hull {
  int dim = 1;
  Rational lo{0}, hi{0};         // d = 1
  std::vector<double> blo, bhi;  // d >= 2
  // d = 1 only: both interval endpoints are certified attractor points
  bool endpoints_in_attractor = false;

  Rational diameter1() const { return hi - lo; }
};

// Smallest computed invariant hull: S_i(H) ⊆ H for every map.
Hull invariant_hull(const IfsSpec& spec);

Hull cylinder_hull(const Xform& map, const Hull& H);

// exact distance between 1-d hull intervals
Rational hull_distance1(const Hull& a, const Hull& b);
// Euclidean distance between boxes, d >= 2
double hull_distancen(const Hull& a, const Hull& b);

struct DistBound {
  Rational lo{0}, hi{0};
  int depth = 0;
  bool conclusive = true;
};

// Two-sided bracket on dist(K_x, K_y) from depth-m sub-cylinder hulls:
// lo is the smallest pairwise hull distance, hi adds twice the largest
// sub-cylinder diameter.  Brackets are intersected over depths 0..m so
// refinement is monotone.  x and y are words over spec; d = 1 only.
DistBound dist_bound(const IfsSpec& spec, const Hull& H, const Word& x, const Word& y, int m);

// Smallest distance between certified attractor sample points of the two
// pieces at refinement depth m (an upper bound for the true distance).
// Uses cylinder endpoints when the hull endpoints are certified, else
// images of the fixed point of the first map.
Rational sample_upper_bound1(const IfsSpec& spec, const Hull& H, const Word& x, const Word& y,
                             int m);

enum class EdgeDecision { Edge, NoEdge, Undecided };
enum class EdgeMode { Hull, Certified };

// Horizontal-edge test for same-level words: is dist(K_x, K_y) <= kappa·r^n?
// Hull mode compares hull distances exactly and never returns Undecided;
// certified mode brackets the true attractor distance, refining up to
// refine_cap.
EdgeDecision decide_edge(const IfsSpec& spec, const Hull& H, const Word& x, const Word& y,
                         const Rational& kappa, int n, EdgeMode mode, int refine_cap = 12);

}  // namespace augtree
