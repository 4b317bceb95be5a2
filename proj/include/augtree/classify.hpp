#pragma once

#include <optional>
#include <utility>

#include "augtree/snapshot.hpp"

namespace augtree {

// Witness that two components have isomorphic descendant subgraphs: a
// single conjugator h with S_{g(x)} = h ∘ S_x for the edge-preserving
// pairing g.  Sufficient condition; absence does not refute equivalence.
struct ConjugacyCertificate {
  Xform h;
  std::vector<std::pair<int, int>> pairing;  // vertex index pairs, T -> T'
};

std::optional<ConjugacyCertificate> conjugacy_equivalent(const Snapshot& snap, const Component& T,
                                                         const Component& Tp, int replay_depth);

struct ClassTable {
  enum class Status { Simple, NotStabilized };
  Status status = Status::NotStabilized;
  int depth = 0;
  int window = 3;
  int last_new_class_level = 0;
  bool quotient = false;
  bool ambiguous = false;  // some match was neither certified nor refuted

  struct CompClass {
    int level = 0;
    int comp = 0;  // representative component index at that level
    std::vector<BigInt> u;
    std::size_t size = 0;
  };
  struct VertClass {
    int level = 0;
    int vert = 0;  // representative vertex index
  };

  std::vector<CompClass> comp_classes;
  std::vector<VertClass> vert_classes;
  Mat A;  // component-class incidence
  Mat B;  // vertex-class incidence of the (reduced) tree

  std::vector<std::vector<BigInt>> u_blocks() const;
  std::size_t max_component_size() const;
  bool simple() const { return status == Status::Simple; }
};

// BFS classification of components and vertices with certificate matching;
// assigns Component::cls and SnapVertex::vclass inside the snapshot.
ClassTable classify(Snapshot& snap, int window = 3, std::size_t max_classes = 512);

// Level-by-level pairing plan between two simple trees sharing B.
struct TreeIsoPlan {
  int depth = 0;
  Mat B;
  std::vector<std::vector<BigInt>> level_counts;  // per level, count per vertex class
  std::string rule;
};
std::optional<TreeIsoPlan> tree_isomorphism_by_B(const ClassTable& a, const ClassTable& b,
                                                 int depth = 8);

}  // namespace augtree
