#include "augtree/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "augtree/errors.hpp"

namespace augtree {

namespace {

// endpoint of S(H) in dimension 1
std::pair<Rational, Rational> image_interval(const Xform& m, const Rational& lo, const Rational& hi) {
  const Rational a = m.coeff1();
  Rational u = a * lo + m.translate1();
  Rational v = a * hi + m.translate1();
  if (u > v) std::swap(u, v);
  return {u, v};
}

bool invariant_under_all(const IfsSpec& spec, const Rational& lo, const Rational& hi) {
  for (const auto& m : spec.maps) {
    auto [u, v] = image_interval(m, lo, hi);
    if (u < lo || v > hi) return false;
  }
  return true;
}

Hull invariant_hull_1d(const IfsSpec& spec) {
  // The convex hull [m, M] of the attractor satisfies
  //   m = min_i S_i(e_i),  M = max_j S_j(e_j)
  // with e the endpoint selected by the orientation of the map.  Solve the
  // two-equation linear system for every pair of active maps and keep the
  // consistent solution; its endpoints are attractor points.
  const int N = spec.nmaps();
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const Rational ai = spec.maps[i].coeff1(), bi = spec.maps[i].translate1();
      const Rational aj = spec.maps[j].coeff1(), bj = spec.maps[j].translate1();
      Rational m, M;
      if (ai > 0 && aj > 0) {
        // m = ai m + bi ; M = aj M + bj
        m = bi / (1 - ai);
        M = bj / (1 - aj);
      } else if (ai < 0 && aj > 0) {
        // m = ai M + bi ; M = aj M + bj
        M = bj / (1 - aj);
        m = ai * M + bi;
      } else if (ai > 0 && aj < 0) {
        // m = ai m + bi ; M = aj m + bj
        m = bi / (1 - ai);
        M = aj * m + bj;
      } else {
        // m = ai M + bi ; M = aj m + bj
        const Rational det = 1 - ai * aj;
        m = (ai * bj + bi) / det;
        M = (aj * bi + bj) / det;
      }
      if (m > M) continue;
      // consistency: the chosen maps actually attain the extremes
      Rational best_lo = m, best_hi = M;
      bool first = true;
      for (const auto& mp : spec.maps) {
        auto [u, v] = image_interval(mp, m, M);
        if (first) {
          best_lo = u;
          best_hi = v;
          first = false;
        } else {
          best_lo = std::min(best_lo, u);
          best_hi = std::max(best_hi, v);
        }
      }
      if (best_lo == m && best_hi == M && invariant_under_all(spec, m, M)) {
        Hull h;
        h.dim = 1;
        h.lo = m;
        h.hi = M;
        h.endpoints_in_attractor = true;
        return h;
      }
    }
  }
  // Fallback: grow from the fixed points until invariant, then shrink.
  Rational lo, hi;
  bool first = true;
  for (const auto& m : spec.maps) {
    const Rational fix = m.translate1() / (1 - m.coeff1());
    if (first) {
      lo = hi = fix;
      first = false;
    } else {
      lo = std::min(lo, fix);
      hi = std::max(hi, fix);
    }
  }
  for (int iter = 0; iter < 512 && !invariant_under_all(spec, lo, hi); ++iter) {
    Rational nlo = lo, nhi = hi;
    for (const auto& m : spec.maps) {
      auto [u, v] = image_interval(m, lo, hi);
      nlo = std::min(nlo, u);
      nhi = std::max(nhi, v);
    }
    lo = nlo;
    hi = nhi;
  }
  if (!invariant_under_all(spec, lo, hi)) {
    const Rational pad = (hi - lo + 1);
    lo -= pad;
    hi += pad;
  }
  while (!invariant_under_all(spec, lo, hi)) {
    const Rational pad = hi - lo;
    lo -= pad;
    hi += pad;
  }
  Hull h;
  h.dim = 1;
  h.lo = lo;
  h.hi = hi;
  h.endpoints_in_attractor = false;
  return h;
}

Hull invariant_hull_nd(const IfsSpec& spec) {
  const int d = spec.dimension;
  // start box: fixed points found by iterating each map from the origin
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& m : spec.maps) {
    std::vector<double> p(d, 0.0);
    for (int it = 0; it < 256; ++it) p = m.apply(p);
    for (int c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  }
  auto image_box = [&](const Xform& m, const std::vector<double>& blo,
                       const std::vector<double>& bhi, std::vector<double>& olo,
                       std::vector<double>& ohi) {
    std::vector<double> ctr(d), ext(d);
    for (int c = 0; c < d; ++c) {
      ctr[c] = 0.5 * (blo[c] + bhi[c]);
      ext[c] = 0.5 * (bhi[c] - blo[c]);
    }
    std::vector<double> ictr = m.apply(ctr);
    const double s = static_cast<double>(m.scale());
    for (int i = 0; i < d; ++i) {
      double e = 0.0;
      for (int k = 0; k < d; ++k) e += std::abs(m.ortho()[i * d + k]) * ext[k];
      e *= s;
      olo[i] = ictr[i] - e;
      ohi[i] = ictr[i] + e;
    }
  };
  for (int iter = 0; iter < 4096; ++iter) {
    std::vector<double> nlo = lo, nhi = hi, ilo(d), ihi(d);
    for (const auto& m : spec.maps) {
      image_box(m, lo, hi, ilo, ihi);
      for (int c = 0; c < d; ++c) {
        nlo[c] = std::min(nlo[c], ilo[c]);
        nhi[c] = std::max(nhi[c], ihi[c]);
      }
    }
    bool grown = false;
    for (int c = 0; c < d; ++c)
      if (nlo[c] < lo[c] - 1e-15 || nhi[c] > hi[c] + 1e-15) grown = true;
    lo = nlo;
    hi = nhi;
    if (!grown) break;
  }
  // safety margin
  for (int c = 0; c < d; ++c) {
    const double pad = 1e-9 * (1.0 + hi[c] - lo[c]);
    lo[c] -= pad;
    hi[c] += pad;
  }
  Hull h;
  h.dim = d;
  h.blo = lo;
  h.bhi = hi;
  return h;
}

}  // namespace

Hull invariant_hull(const IfsSpec& spec) {
  return spec.dimension == 1 ? invariant_hull_1d(spec) : invariant_hull_nd(spec);
}

Hull cylinder_hull(const Xform& map, const Hull& H) {
  Hull out;
  out.dim = H.dim;
  if (H.dim == 1) {
    auto [u, v] = image_interval(map, H.lo, H.hi);
    out.lo = u;
    out.hi = v;
    out.endpoints_in_attractor = H.endpoints_in_attractor;
    return out;
  }
  const int d = H.dim;
  out.blo.resize(d);
  out.bhi.resize(d);
  std::vector<double> ctr(d), ext(d);
  for (int c = 0; c < d; ++c) {
    ctr[c] = 0.5 * (H.blo[c] + H.bhi[c]);
    ext[c] = 0.5 * (H.bhi[c] - H.blo[c]);
  }
  std::vector<double> ictr = map.apply(ctr);
  const double s = static_cast<double>(map.scale());
  for (int i = 0; i < d; ++i) {
    double e = 0.0;
    for (int k = 0; k < d; ++k) e += std::abs(map.ortho()[i * d + k]) * ext[k];
    e *= s;
    out.blo[i] = ictr[i] - e;
    out.bhi[i] = ictr[i] + e;
  }
  return out;
}

Rational hull_distance1(const Hull& a, const Hull& b) {
  Rational gap = a.lo - b.hi;
  if (b.lo - a.hi > gap) gap = b.lo - a.hi;
  return gap > 0 ? gap : Rational(0);
}

double hull_distancen(const Hull& a, const Hull& b) {
  double acc = 0.0;
  for (std::size_t c = 0; c < a.blo.size(); ++c) {
    double gap = std::max(a.blo[c] - b.bhi[c], b.blo[c] - a.bhi[c]);
    if (gap > 0) acc += gap * gap;
  }
  return std::sqrt(acc);
}

namespace {

// level-(base+m) descendants of x, as (map, hull) pairs sorted by hull.lo;
// double keys speed up sorting and screening, exact values decide ties
struct SubCyl {
  Rational lo, hi;
  double lo_d = 0, hi_d = 0;
};

// one-level expansion; only the composed maps matter for the bounds, and
// the word ratio is the scale of the map
void expand_with_maps(const IfsSpec& spec, const Xform& mw, const Rational& thr,
                      std::vector<Xform>& out) {
  for (int s = 1; s <= spec.nmaps(); ++s) {
    Xform mc = mw.compose(spec.maps[s - 1]);
    if (mc.scale() <= thr)
      out.push_back(std::move(mc));
    else
      expand_with_maps(spec, mc, thr, out);
  }
}

std::vector<Xform> next_depth(const IfsSpec& spec, const std::vector<Xform>& cur,
                              const Rational& thr) {
  std::vector<Xform> out;
  out.reserve(cur.size() * spec.nmaps());
  for (const auto& mp : cur) expand_with_maps(spec, mp, thr, out);
  return out;
}

std::vector<Xform> descendants_at_depth(const IfsSpec& spec, const Word& x, int level_x, int m) {
  std::vector<Xform> out;
  out.push_back(word_map(spec, x));
  Rational thr = rat_pow(spec.r_min, static_cast<unsigned>(level_x));
  for (int d = 0; d < m; ++d) {
    thr *= spec.r_min;
    out = next_depth(spec, out, thr);
  }
  return out;
}

std::vector<SubCyl> hulls_of(const IfsSpec& spec, const Hull& H,
                             const std::vector<Xform>& cyl) {
  std::vector<SubCyl> out;
  out.reserve(cyl.size());
  for (const auto& mp : cyl) {
    Hull h = cylinder_hull(mp, H);
    SubCyl c;
    c.lo_d = static_cast<double>(h.lo);
    c.hi_d = static_cast<double>(h.hi);
    c.lo = std::move(h.lo);
    c.hi = std::move(h.hi);
    out.push_back(std::move(c));
  }
  auto exact_less = [](const SubCyl& a, const SubCyl& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  };
  std::sort(out.begin(), out.end(), [&](const SubCyl& a, const SubCyl& b) {
    if (a.lo_d != b.lo_d) return a.lo_d < b.lo_d;
    return exact_less(a, b);
  });
  // rational-to-double conversion is monotone, so the order can only be
  // wrong if a conversion misbehaved; verify and fall back to exact sorting
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].lo < out[i - 1].lo) {
      std::sort(out.begin(), out.end(), exact_less);
      break;
    }
  return out;
}

// smallest gap between two families of intervals, 0 if any pair meets;
// B must be sorted by lo.  The nearest approach from the left of a is set
// by the largest hi among b with b.lo <= a.lo (prefix maximum), from the
// right by the first b.lo beyond a.lo.
Rational min_family_distance(const std::vector<SubCyl>& A, const std::vector<SubCyl>& B) {
  std::vector<Rational> prefix_max_hi(B.size());
  std::vector<double> prefix_max_hi_d(B.size());
  for (std::size_t t = 0; t < B.size(); ++t) {
    prefix_max_hi[t] = t ? std::max(prefix_max_hi[t - 1], B[t].hi) : B[t].hi;
    prefix_max_hi_d[t] = t ? std::max(prefix_max_hi_d[t - 1], B[t].hi_d) : B[t].hi_d;
  }
  Rational best(-1);
  double best_d = 0;
  // candidates clearly beyond the current best (by far more than any
  // conversion error) skip the exact arithmetic
  auto margin = [&] { return 1e-9 + 1e-9 * std::abs(best_d); };
  auto offer = [&](const Rational& lhs, const Rational& rhs, double lhs_d, double rhs_d) {
    if (best >= 0 && lhs_d - rhs_d > best_d + margin()) return;
    Rational gap = lhs - rhs;
    if (gap < 0) gap = 0;
    if (best < 0 || gap < best) {
      best = gap;
      best_d = static_cast<double>(best);
    }
  };
  std::size_t j = 0;  // last b with b.lo <= a.lo (A sorted too)
  bool have_j = false;
  for (const auto& a : A) {
    while (j + 1 < B.size() && B[j + 1].lo <= a.lo) ++j;
    if (!have_j && !B.empty() && B[0].lo <= a.lo) have_j = true;
    if (have_j) offer(a.lo, prefix_max_hi[j], a.lo_d, prefix_max_hi_d[j]);
    const std::size_t succ = have_j ? j + 1 : 0;
    if (succ < B.size()) offer(B[succ].lo, a.hi, B[succ].lo_d, a.hi_d);
    if (best == 0) return best;
  }
  return best < 0 ? Rational(0) : best;
}

}  // namespace

DistBound dist_bound(const IfsSpec& spec, const Hull& H, const Word& x, const Word& y, int m) {
  if (spec.dimension != 1) throw UsageError("dist_bound is exact-1d only");
  DistBound out;
  out.depth = m;
  if (x.syms == y.syms) return out;  // identical pieces
  const int lx = word_level(spec, x);
  const int ly = word_level(spec, y);
  if (lx < 0 || ly < 0) throw UsageError("dist_bound arguments must be level-set words");
  Rational lo_best(0), hi_best(-1);
  std::vector<Xform> cx{word_map(spec, x)}, cy{word_map(spec, y)};
  Rational thrx = rat_pow(spec.r_min, static_cast<unsigned>(lx));
  Rational thry = rat_pow(spec.r_min, static_cast<unsigned>(ly));
  for (int depth = 0; depth <= m; ++depth) {
    auto ax = hulls_of(spec, H, cx);
    auto ay = hulls_of(spec, H, cy);
    Rational lo = min_family_distance(ax, ay);
    Rational maxdiam(0);
    for (const auto& c : ax) maxdiam = std::max(maxdiam, Rational(c.hi - c.lo));
    for (const auto& c : ay) maxdiam = std::max(maxdiam, Rational(c.hi - c.lo));
    Rational hi = lo + 2 * maxdiam;
    if (lo > lo_best) lo_best = lo;
    if (hi_best < 0 || hi < hi_best) hi_best = hi;
    if (depth < m) {
      thrx *= spec.r_min;
      thry *= spec.r_min;
      cx = next_depth(spec, cx, thrx);
      cy = next_depth(spec, cy, thry);
    }
  }
  out.lo = lo_best;
  out.hi = hi_best;
  if (out.hi < out.lo) out.hi = out.lo;
  return out;
}

Rational sample_upper_bound1(const IfsSpec& spec, const Hull& H, const Word& x, const Word& y,
                             int m) {
  if (spec.dimension != 1) throw UsageError("sample_upper_bound1 is 1d only");
  const int lx = word_level(spec, x);
  const int ly = word_level(spec, y);
  auto points_of = [&](const Word& w, int lw) {
    std::vector<Rational> pts;
    for (const auto& mp : descendants_at_depth(spec, w, lw, m)) {
      if (H.endpoints_in_attractor) {
        Hull h = cylinder_hull(mp, H);
        pts.push_back(h.lo);
        pts.push_back(h.hi);
      } else {
        // image of the fixed point of the first map, always in K
        const Rational fix =
            spec.maps[0].translate1() / (1 - spec.maps[0].coeff1());
        pts.push_back(mp.coeff1() * fix + mp.translate1());
      }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
  };
  std::vector<Rational> px = points_of(x, lx), py = points_of(y, ly);
  Rational best(-1);
  std::size_t j = 0;
  for (const auto& p : px) {
    while (j + 1 < py.size() && py[j + 1] <= p) ++j;
    const std::size_t from = j >= 1 ? j - 1 : 0;
    for (std::size_t t = from; t < py.size() && t <= j + 1; ++t) {
      Rational gap = rat_abs(p - py[t]);
      if (best < 0 || gap < best) best = gap;
    }
  }
  return best < 0 ? Rational(0) : best;
}

EdgeDecision decide_edge(const IfsSpec& spec, const Hull& H, const Word& x, const Word& y,
                         const Rational& kappa, int n, EdgeMode mode, int refine_cap) {
  if (x.syms == y.syms) throw UsageError("decide_edge needs two distinct words");
  const Rational threshold = kappa * rat_pow(spec.r_min, static_cast<unsigned>(n));
  if (spec.dimension != 1) {
    Hull hx = cylinder_hull(word_map(spec, x), H);
    Hull hy = cylinder_hull(word_map(spec, y), H);
    return hull_distancen(hx, hy) <= static_cast<double>(threshold) + spec.tol
               ? EdgeDecision::Edge
               : EdgeDecision::NoEdge;
  }
  Hull hx = cylinder_hull(word_map(spec, x), H);
  Hull hy = cylinder_hull(word_map(spec, y), H);
  const Rational hd = hull_distance1(hx, hy);
  if (mode == EdgeMode::Hull) return hd <= threshold ? EdgeDecision::Edge : EdgeDecision::NoEdge;
  if (hd > threshold) return EdgeDecision::NoEdge;  // hull distance lower-bounds the true one
  for (int m = 0; m <= refine_cap; ++m) {
    DistBound b = dist_bound(spec, H, x, y, m);
    const Rational sample = sample_upper_bound1(spec, H, x, y, m);
    if (std::min(b.hi, sample) <= threshold) return EdgeDecision::Edge;
    if (b.lo > threshold) return EdgeDecision::NoEdge;
  }
  return EdgeDecision::Undecided;
}

}  // namespace augtree
