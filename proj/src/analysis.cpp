#include "augtree/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "augtree/errors.hpp"

namespace augtree {

namespace {

// strongly connected blocks through boolean reachability (matrices are tiny)
std::vector<std::vector<int>> strong_blocks(const Mat& M) {
  const std::size_t n = M.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (M[i][j] > 0) reach[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  std::vector<int> block(n, -1);
  std::vector<std::vector<int>> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    if (block[i] >= 0) continue;
    const int id = static_cast<int>(blocks.size());
    blocks.emplace_back();
    for (std::size_t j = i; j < n; ++j)
      if (block[j] < 0 && reach[i][j] && reach[j][i]) {
        block[j] = id;
        blocks[id].push_back(static_cast<int>(j));
      }
  }
  return blocks;
}

SpectralResult block_radius(const Mat& M, const std::vector<int>& idx) {
  SpectralResult out;
  const std::size_t n = idx.size();
  if (n == 1 && M[idx[0]][idx[0]] == 0) return out;  // nilpotent block
  // power iteration on block + I; shifting makes the block primitive so the
  // Collatz–Wielandt bracket closes
  std::vector<long double> v(n, 1.0L), w(n, 0.0L);
  long double LO = 0.0L, HI = 1e300L;
  for (int it = 1; it <= 500000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      long double acc = v[i];  // the +I part
      for (std::size_t j = 0; j < n; ++j) {
        const auto& e = M[idx[i]][idx[j]];
        if (e != 0) acc += static_cast<long double>(e.convert_to<double>()) * v[j];
      }
      w[i] = acc;
    }
    long double lo = 1e300L, hi = 0.0L, mx = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      const long double r = w[i] / v[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      mx = std::max(mx, w[i]);
    }
    LO = std::max(LO, lo);
    HI = std::min(HI, hi);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / mx;
    out.iterations = it;
    if (HI - LO < 1e-13L) break;
  }
  out.lo = static_cast<double>(LO - 1.0L);
  out.hi = static_cast<double>(HI - 1.0L);
  out.rho = static_cast<double>((LO + HI) / 2.0L - 1.0L);
  return out;
}

}  // namespace

SpectralResult spectral_radius(const Mat& M) {
  if (!mat_is_square(M) || M.empty()) throw UsageError("spectral radius needs a square matrix");
  for (const auto& row : M)
    for (const auto& e : row)
      if (e < 0) throw UsageError("spectral radius needs a nonnegative matrix");
  bool all_zero = true;
  for (const auto& row : M)
    for (const auto& e : row)
      if (e != 0) all_zero = false;
  if (all_zero) return SpectralResult{0.0, 0.0, 0.0, 0};

  // rho(M) is the max over strongly connected blocks; the bracket of the
  // max is the componentwise max of the block brackets
  SpectralResult best;
  bool first = true;
  for (const auto& blk : strong_blocks(M)) {
    SpectralResult r = block_radius(M, blk);
    if (first) {
      best = r;
      first = false;
    } else {
      best.rho = std::max(best.rho, r.rho);
      best.lo = std::max(best.lo, r.lo);
      best.hi = std::max(best.hi, r.hi);
      best.iterations = std::max(best.iterations, r.iterations);
    }
  }
  // Perron bounds: min row sum <= rho <= max row sum
  long double minsum = 1e300L, maxsum = 0.0L;
  for (const auto& row : M) {
    long double s = 0.0L;
    for (const auto& e : row) s += static_cast<long double>(e.convert_to<double>());
    minsum = std::min(minsum, s);
    maxsum = std::max(maxsum, s);
  }
  if (best.hi < static_cast<double>(minsum) - 1e-9 ||
      best.lo > static_cast<double>(maxsum) + 1e-9)
    throw InternalError("spectral radius bracket escaped the row-sum bounds");
  return best;
}

DimensionResult hausdorff_dimension(const Mat& M, const Rational& r) {
  if (!(r > 0 && r < 1)) throw UsageError("contraction ratio must lie in (0,1)");
  DimensionResult out;
  out.spectral = spectral_radius(M);
  out.ratio = r;
  const double denom = -std::log(static_cast<double>(r));
  out.degenerate = out.spectral.rho < 1.0;
  const double lo = std::max(out.spectral.lo, 1e-300);
  const double hi = std::max(out.spectral.hi, 1e-300);
  out.dim_lo = std::log(lo) / denom;
  out.dim_hi = std::log(hi) / denom;
  out.dimension = std::log(std::max(out.spectral.rho, 1e-300)) / denom;
  return out;
}

DisconnectednessReport disconnectedness_profile(const Snapshot& snap) {
  DisconnectednessReport out;
  for (int n = 0; n <= snap.max_level; ++n) {
    std::size_t mx = 0;
    for (const auto& c : snap.levels[n].comps) mx = std::max(mx, c.size());
    out.max_component_size.push_back(mx);
  }
  const std::size_t L = out.max_component_size.size();
  if (L >= 3 && out.max_component_size[L - 1] == out.max_component_size[L - 2] &&
      out.max_component_size[L - 2] == out.max_component_size[L - 3]) {
    out.verdict = DisconnectednessReport::Verdict::BoundedObserved;
    out.bound = out.max_component_size[L - 1];
    out.note = "max horizontal-component size constant over the last three levels "
               "(finite-depth heuristic; boundedness at all levels is equivalent to "
               "total disconnectedness)";
  } else {
    out.verdict = DisconnectednessReport::Verdict::GrowthObserved;
    double ratio = 0;
    if (L >= 2 && out.max_component_size[L - 2] > 0)
      ratio = static_cast<double>(out.max_component_size[L - 1]) /
              static_cast<double>(out.max_component_size[L - 2]);
    out.note = "max component size still grows at the deepest levels (last-step factor " +
               std::to_string(ratio) + "); no boundedness observed at this depth";
  }
  return out;
}

LipschitzReport lipschitz_report(const IfsSpec& a, const IfsSpec& b, const LipschitzOptions& opt) {
  LipschitzReport rep;
  // ratio multisets
  std::vector<Rational> ra, rb;
  for (const auto& m : a.maps) ra.push_back(m.scale());
  for (const auto& m : b.maps) rb.push_back(m.scale());
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  rep.ratio_multiset_equal = ra == rb;

  if (opt.dim_matrix_left) rep.dim_left = hausdorff_dimension(*opt.dim_matrix_left, a.r_min);
  if (opt.dim_matrix_right) rep.dim_right = hausdorff_dimension(*opt.dim_matrix_right, b.r_min);
  if (rep.dim_left && rep.dim_right) {
    const double gap = std::abs(rep.dim_left->dimension - rep.dim_right->dimension);
    const double err = (rep.dim_left->dim_hi - rep.dim_left->dim_lo) +
                       (rep.dim_right->dim_hi - rep.dim_right->dim_lo) + 1e-12;
    if (gap > err) {
      rep.verdict = LipschitzReport::Verdict::NotComparable;
      rep.notes.push_back("Hausdorff dimensions differ (" +
                          std::to_string(rep.dim_left->dimension) + " vs " +
                          std::to_string(rep.dim_right->dimension) +
                          "); bi-Lipschitz maps preserve dimension");
      return rep;
    }
  }
  if (!rep.ratio_multiset_equal) {
    rep.verdict = LipschitzReport::Verdict::NotComparable;
    rep.notes.push_back("contraction-ratio multisets differ; the composition theorem requires "
                        "identical ratio lists");
    return rep;
  }

  Snapshot raw_a = build_snapshot(a, opt.depth, opt.build);
  Snapshot raw_b = build_snapshot(b, opt.depth, opt.build);
  rep.coincidences_left = has_coincidences(raw_a);
  rep.coincidences_right = has_coincidences(raw_b);
  // the quotient of a coincidence-free system is the identity, so quotient
  // mode is used uniformly
  rep.snap_left = build_quotient(raw_a);
  rep.snap_right = build_quotient(raw_b);
  rep.left = classify(*rep.snap_left, opt.window);
  rep.right = classify(*rep.snap_right, opt.window);
  if (!rep.left.simple() || !rep.right.simple()) {
    rep.verdict = LipschitzReport::Verdict::Inconclusive;
    rep.notes.push_back("classification did not stabilize at this depth");
    return rep;
  }
  rep.plan = tree_isomorphism_by_B(rep.left, rep.right);
  rep.shared_B = rep.plan.has_value();
  if (!rep.shared_B) {
    rep.verdict = LipschitzReport::Verdict::Inconclusive;
    rep.notes.push_back("reduced trees carry different incidence matrices B; the composition "
                        "theorem does not apply (no claim of non-equivalence)");
    return rep;
  }
  rep.rearrange_left = is_rearrangeable(rep.left.A, rep.left.B, rep.left.u_blocks(), opt.k_max);
  rep.rearrange_right = is_rearrangeable(rep.right.A, rep.right.B, rep.right.u_blocks(), opt.k_max);
  if (!rep.rearrange_left.yes() || !rep.rearrange_right.yes()) {
    rep.verdict = LipschitzReport::Verdict::Inconclusive;
    rep.notes.push_back("rearrangeability search exhausted k_max without certificates");
    return rep;
  }
  rep.verdict = LipschitzReport::Verdict::Equivalent;
  rep.notes.push_back("both incidence matrices are (B,u)-rearrangeable over the shared reduced "
                      "tree; boundaries and attractors are Lipschitz equivalent");
  return rep;
}

}  // namespace augtree
