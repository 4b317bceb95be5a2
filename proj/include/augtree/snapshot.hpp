#pragma once

#include "augtree/geometry.hpp"

namespace augtree {

struct SnapVertex {
  std::vector<Word> members;  // shortlex sorted; members[0] is canonical
  Xform map;
  Hull hull;
  std::vector<int> parents;           // previous-level indices, ascending; [0] is the retained parent
  std::vector<int> children;          // all vertical children, next level
  std::vector<int> reduced_children;  // children through the retained edge only
  int component = -1;
  int vclass = -1;  // vertex class, set by classify

  const Word& canonical() const { return members[0]; }
};

struct Component {
  int level = 0;
  std::vector<int> vertices;  // ascending
  int cls = -1;               // component class, set by classify

  int least() const { return vertices.front(); }
  std::size_t size() const { return vertices.size(); }
};

struct SnapLevel {
  std::vector<SnapVertex> verts;
  std::vector<std::vector<int>> adj;  // horizontal adjacency, each list ascending
  std::vector<Component> comps;       // ordered by least vertex
  std::size_t edge_count = 0;
};

struct BuildOptions {
  EdgeMode mode = EdgeMode::Hull;
  std::size_t max_vertices_per_level = 200000;
  int refine_cap = 12;
};

// Materialised levels X_0..X_max of the augmented tree (or of its quotient)
// with horizontal edges and per-level components.
struct Snapshot {
  IfsSpec spec;
  Hull hull;
  int max_level = 0;
  bool quotiented = false;
  BuildOptions opts;
  std::vector<SnapLevel> levels;

  const SnapVertex& vert(int level, int idx) const { return levels[level].verts[idx]; }
  SnapVertex& vert(int level, int idx) { return levels[level].verts[idx]; }
  int nverts(int level) const { return static_cast<int>(levels[level].verts.size()); }
  std::string vertex_name(int level, int idx) const;
};

Snapshot build_snapshot(const IfsSpec& spec, int max_level, const BuildOptions& opts = {});

// Identify same-level vertices carrying equal similitudes; horizontal edges
// are re-decided on the class maps, vertical edges are induced (so a vertex
// may have several parents).
Snapshot build_quotient(const Snapshot& raw);

// Keep only the least vertical edge into every vertex; fills
// reduced_children.  Builders call this themselves; idempotent.
void reduce_to_tree(Snapshot& snap);

const std::vector<Component>& components_at(const Snapshot& snap, int n);

// Indices of next-level components all of whose vertices descend from T.
std::vector<int> offspring_components(const Snapshot& snap, const Component& T);

bool has_coincidences(const Snapshot& raw);

struct DegreeProfile {
  std::vector<int> max_degree;  // per level
  bool growth_suspected = false;
  std::string note;
};
DegreeProfile degree_profile(const Snapshot& snap);

enum class DotView { Augmented, Vertical, Reduced };
std::string to_dot(const Snapshot& snap, DotView view);

}  // namespace augtree
