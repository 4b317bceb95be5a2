#pragma once

#include "augtree/rearrange.hpp"

namespace augtree {

// View of a snapshot that keeps every k-th level.  Tree edges are the
// k-fold reduced vertical edges, horizontal edges come from the kept
// levels; for k = 1 this is the snapshot itself (reduced tree plus
// horizontal edges).
class GraphView {
 public:
  GraphView(const Snapshot& snap, int k);

  const Snapshot& snap() const { return *snap_; }
  int k() const { return k_; }
  int depth() const { return depth_; }  // view levels run 0..depth()
  int nverts(int kl) const { return static_cast<int>(kids_[kl].size()); }
  int snap_level(int kl) const { return kl * k_; }

  int parent(int kl, int i) const { return up_[kl][i]; }  // kl >= 1
  const std::vector<int>& children(int kl, int i) const { return kids_[kl][i]; }
  const std::vector<int>& horizontal(int kl, int i) const;
  int component_of(int kl, int i) const;
  int total_vertices() const { return offsets_.back(); }
  int flat_id(int kl, int i) const { return offsets_[kl] + i; }

  // BFS distances from one source over tree + horizontal edges
  std::vector<int> bfs(int kl, int i) const;
  // distance in the tree part alone
  int tree_distance(int klx, int ix, int kly, int iy) const;
  // horizontal-only distance inside one level (-1 across components)
  int horizontal_distance(int kl, int i, int j) const;

 private:
  const Snapshot* snap_;
  int k_, depth_;
  std::vector<std::vector<int>> up_;
  std::vector<std::vector<std::vector<int>>> kids_;
  std::vector<int> offsets_;
  // lazily built per-level, per-component horizontal distance tables
  mutable std::vector<std::vector<std::vector<int>>> hdist_;
  mutable std::vector<char> hdist_ready_;
  void ensure_hdist(int kl) const;
};

int graph_distance(const GraphView& view, int klx, int ix, int kly, int iy);

// 2·(x∧y); kept integral so the identity checks stay exact
int twice_gromov_product(const GraphView& view, int klx, int ix, int kly, int iy);
Rational gromov_product(const GraphView& view, int klx, int ix, int kly, int iy);

struct CanonicalGeodesic {
  int dist = 0;
  int level = 0;  // level of the horizontal part
  int hlen = 0;   // its length
};
// Trapezoidal decomposition through ancestor pairs; asserts it attains the
// BFS distance and that 2|x∧y| = 2l - h holds.
CanonicalGeodesic canonical_geodesic(const GraphView& view, int klx, int ix, int kly, int iy);
// same, with the BFS distance already in hand (bulk verification loops)
CanonicalGeodesic canonical_geodesic(const GraphView& view, int klx, int ix, int kly, int iy,
                                     int bfs_dist);

// Largest horizontal geodesic length observed anywhere in the view.
int horizontal_geodesic_bound(const GraphView& view);

double visual_metric(const GraphView& view, int klx, int ix, int kly, int iy, double a);

struct NearIsometry {
  int k = 1;
  // per view level: source vertex index -> target vertex index
  std::vector<std::vector<int>> sigma;
};

// The rearrangement construction: maps the augmented view onto its tree
// level by level, grouping each component's offspring by the certificate
// rows.  Classes must be assigned in the snapshot (run classify first) and
// certs must witness (A^k, B^k, u).
NearIsometry build_near_isometry(const Snapshot& snap, const ClassTable& table,
                                 const std::vector<RearrangingMatrix>& certs, int k, int depth);

struct NearIsoVerification {
  int max_deviation = 0;
  int c_obs = 0;
  long long pairs = 0;
  int witness[4] = {0, 0, 0, 0};  // (klx, ix, kly, iy)
  bool bound_holds = false;
};

// Exact distance comparison over vertex pairs (exhaustive up to pair_cap,
// sampled beyond).  Throws InternalError when a pair violates c_obs + 2.
NearIsoVerification verify_near_isometry(const GraphView& view, const NearIsometry& iso,
                                         long long pair_cap = -1);

struct NearIsometryReport {
  int k = 1;
  int wlog_k = 1;
  RearrangeVerdict verdict;
  NearIsometry sigma;
  NearIsoVerification verification;
};

// wlog power + rearrangeability + construction + verification in one go.
NearIsometryReport near_isometry_pipeline(const Snapshot& snap, const ClassTable& table,
                                          int k_max = 6);

}  // namespace augtree
