#pragma once

#include <optional>

#include "augtree/hyperbolic.hpp"

namespace augtree {

struct SpectralResult {
  double rho = 0.0;
  double lo = 0.0, hi = 0.0;  // Collatz–Wielandt bracket
  int iterations = 0;
};

// Spectral radius of a nonnegative integer matrix: strongly connected
// blocks are iterated on M+I so the bracket converges even for periodic
// blocks; the result is the largest block value.
SpectralResult spectral_radius(const Mat& M);

struct DimensionResult {
  SpectralResult spectral;
  Rational ratio{0};
  double dimension = 0.0;
  double dim_lo = 0.0, dim_hi = 0.0;
  bool degenerate = false;  // rho < 1
};

// dim_H K = ln(rho) / -ln(r)
DimensionResult hausdorff_dimension(const Mat& M, const Rational& r);

struct DisconnectednessReport {
  std::vector<std::size_t> max_component_size;  // per level
  enum class Verdict { BoundedObserved, GrowthObserved } verdict = Verdict::GrowthObserved;
  std::size_t bound = 0;  // for BoundedObserved
  std::string note;
};

DisconnectednessReport disconnectedness_profile(const Snapshot& snap);

struct LipschitzOptions {
  int depth = 6;
  int window = 3;
  int k_max = 6;
  BuildOptions build;
  std::optional<Mat> dim_matrix_left, dim_matrix_right;  // finite-type matrices, if known
};

struct LipschitzReport {
  enum class Verdict { Equivalent, Inconclusive, NotComparable } verdict = Verdict::Inconclusive;
  bool ratio_multiset_equal = false;
  bool coincidences_left = false, coincidences_right = false;
  std::optional<Snapshot> snap_left, snap_right;  // quotient snapshots used
  ClassTable left, right;
  bool shared_B = false;
  std::optional<TreeIsoPlan> plan;
  RearrangeVerdict rearrange_left, rearrange_right;
  std::optional<DimensionResult> dim_left, dim_right;
  std::vector<std::string> notes;

  bool equivalent() const { return verdict == Verdict::Equivalent; }
};

// Composition of the equivalence machinery on two systems sharing the
// contraction-ratio multiset: classify both quotients, demand a common B,
// then rearrangeability of both incidence matrices.
LipschitzReport lipschitz_report(const IfsSpec& a, const IfsSpec& b, const LipschitzOptions& opt);

}  // namespace augtree
