#include "augtree/snapshot.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "augtree/errors.hpp"

namespace augtree {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

void finish_level_components(SnapLevel& lvl, int level) {
  const int n = static_cast<int>(lvl.verts.size());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j : lvl.adj[i]) uf.unite(i, j);
  std::map<int, int> root_to_comp;
  lvl.comps.clear();
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    auto it = root_to_comp.find(r);
    if (it == root_to_comp.end()) {
      it = root_to_comp.emplace(r, static_cast<int>(lvl.comps.size())).first;
      lvl.comps.push_back(Component{level, {}, -1});
    }
    lvl.comps[it->second].vertices.push_back(i);
    lvl.verts[i].component = it->second;
  }
  // roots are minima of their components and i runs ascending, so comps are
  // already ordered by least vertex
}

// horizontal edges at one level via a sweep over hull order
void decide_level_edges(const IfsSpec& spec, const Hull& H, SnapLevel& lvl,
                        const Rational& threshold, const BuildOptions& opts, int level) {
  const int n = static_cast<int>(lvl.verts.size());
  lvl.adj.assign(n, {});
  lvl.edge_count = 0;
  if (n <= 1) return;
  auto add_edge = [&](int a, int b) {
    lvl.adj[a].push_back(b);
    lvl.adj[b].push_back(a);
    ++lvl.edge_count;
  };
  if (spec.dimension == 1) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const auto& ha = lvl.verts[a].hull;
      const auto& hb = lvl.verts[b].hull;
      if (ha.lo != hb.lo) return ha.lo < hb.lo;
      return a < b;
    });
    Rational maxdiam(0);
    for (const auto& v : lvl.verts) maxdiam = std::max(maxdiam, v.hull.diameter1());
    const Rational reach = threshold + maxdiam;
    for (int jj = 0; jj < n; ++jj) {
      const int j = order[jj];
      const Rational& lo_j = lvl.verts[j].hull.lo;
      for (int ii = jj - 1; ii >= 0; --ii) {
        const int i = order[ii];
        if (lo_j - lvl.verts[i].hull.lo > reach) break;
        bool edge;
        if (opts.mode == EdgeMode::Hull) {
          edge = hull_distance1(lvl.verts[i].hull, lvl.verts[j].hull) <= threshold;
        } else {
          const EdgeDecision d =
              decide_edge(spec, H, lvl.verts[i].canonical(), lvl.verts[j].canonical(),
                          spec.kappa, level, EdgeMode::Certified, opts.refine_cap);
          if (d == EdgeDecision::Undecided)
            throw CapExceeded("certified edge test undecided for pair (" +
                              word_string(lvl.verts[i].canonical(), spec.nmaps()) + ", " +
                              word_string(lvl.verts[j].canonical(), spec.nmaps()) +
                              ") at level " + std::to_string(level) +
                              "; raise the refinement cap or use hull mode");
          edge = d == EdgeDecision::Edge;
        }
        if (edge) add_edge(std::min(i, j), std::max(i, j));
      }
    }
  } else {
    const double thr = static_cast<double>(threshold) + spec.tol;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return lvl.verts[a].hull.blo[0] < lvl.verts[b].hull.blo[0] ||
             (lvl.verts[a].hull.blo[0] == lvl.verts[b].hull.blo[0] && a < b);
    });
    double maxdiam = 0;
    for (const auto& v : lvl.verts) maxdiam = std::max(maxdiam, v.hull.bhi[0] - v.hull.blo[0]);
    for (int jj = 0; jj < n; ++jj) {
      const int j = order[jj];
      for (int ii = jj - 1; ii >= 0; --ii) {
        const int i = order[ii];
        if (lvl.verts[j].hull.blo[0] - lvl.verts[i].hull.blo[0] > thr + maxdiam) break;
        if (hull_distancen(lvl.verts[i].hull, lvl.verts[j].hull) <= thr)
          add_edge(std::min(i, j), std::max(i, j));
      }
    }
  }
  for (auto& a : lvl.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
}

}  // namespace

std::string Snapshot::vertex_name(int level, int idx) const {
  return word_string(levels[level].verts[idx].canonical(), spec.nmaps());
}

Snapshot build_snapshot(const IfsSpec& spec, int max_level, const BuildOptions& opts) {
  if (max_level < 0) throw UsageError("depth must be >= 0");
  spec.validate();
  Snapshot s;
  s.spec = spec;
  s.hull = invariant_hull(spec);
  s.max_level = max_level;
  s.opts = opts;
  s.levels.resize(max_level + 1);

  SnapVertex root;
  root.members = {Word{}};
  root.map = Xform::identity(spec.dimension);
  root.hull = s.hull;
  s.levels[0].verts.push_back(std::move(root));
  s.levels[0].adj.assign(1, {});
  finish_level_components(s.levels[0], 0);

  EnumLimits lim;
  lim.max_vertices_per_level = opts.max_vertices_per_level;

  for (int n = 1; n <= max_level; ++n) {
    const Rational thr = rat_pow(spec.r_min, static_cast<unsigned>(n));
    struct Item {
      Word w;
      int parent;
    };
    std::vector<Item> items;
    for (int pi = 0; pi < s.nverts(n - 1); ++pi) {
      std::vector<Word> kids;
      expand_children(spec, s.vert(n - 1, pi).canonical(), thr, kids, lim);
      for (auto& k : kids) {
        if (items.size() >= opts.max_vertices_per_level)
          throw CapExceeded("level " + std::to_string(n) + " exceeds the vertex cap");
        items.push_back({std::move(k), pi});
      }
    }
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return shortlex_less(a.w, b.w); });
    SnapLevel& lvl = s.levels[n];
    lvl.verts.reserve(items.size());
    for (auto& it : items) {
      SnapVertex v;
      v.map = word_map(spec, it.w);
      v.hull = cylinder_hull(v.map, s.hull);
      v.members = {std::move(it.w)};
      v.parents = {it.parent};
      const int idx = static_cast<int>(lvl.verts.size());
      s.vert(n - 1, it.parent).children.push_back(idx);
      lvl.verts.push_back(std::move(v));
    }
    decide_level_edges(spec, s.hull, lvl, spec.kappa * thr, opts, n);
    finish_level_components(lvl, n);
  }
  reduce_to_tree(s);
  return s;
}

Snapshot build_quotient(const Snapshot& raw) {
  Snapshot q;
  q.spec = raw.spec;
  q.hull = raw.hull;
  q.max_level = raw.max_level;
  q.opts = raw.opts;
  q.quotiented = true;
  q.levels.resize(raw.max_level + 1);

  // raw index -> class index, per level
  std::vector<std::vector<int>> raw_to_q(raw.max_level + 1);

  for (int n = 0; n <= raw.max_level; ++n) {
    SnapLevel& lvl = q.levels[n];
    raw_to_q[n].assign(raw.nverts(n), -1);
    if (raw.spec.dimension == 1) {
      std::map<std::pair<std::pair<Rational, bool>, Rational>, int> key_to_class;
      for (int i = 0; i < raw.nverts(n); ++i) {
        const auto& v = raw.vert(n, i);
        auto key = std::make_pair(std::make_pair(v.map.scale(), v.map.reflect()),
                                  v.map.translate1());
        auto it = key_to_class.find(key);
        int ci;
        if (it == key_to_class.end()) {
          ci = static_cast<int>(lvl.verts.size());
          key_to_class.emplace(key, ci);
          SnapVertex nv;
          nv.map = v.map;
          nv.hull = v.hull;
          lvl.verts.push_back(std::move(nv));
        } else {
          ci = it->second;
        }
        lvl.verts[ci].members.push_back(v.canonical());
        raw_to_q[n][i] = ci;
      }
    } else {
      // tolerance grouping for the approximate mode
      for (int i = 0; i < raw.nverts(n); ++i) {
        const auto& v = raw.vert(n, i);
        int ci = -1;
        for (int c = 0; c < static_cast<int>(lvl.verts.size()); ++c)
          if (lvl.verts[c].map.equals(v.map, raw.spec.tol)) {
            ci = c;
            break;
          }
        if (ci < 0) {
          ci = static_cast<int>(lvl.verts.size());
          SnapVertex nv;
          nv.map = v.map;
          nv.hull = v.hull;
          lvl.verts.push_back(std::move(nv));
        }
        lvl.verts[ci].members.push_back(v.canonical());
        raw_to_q[n][i] = ci;
      }
    }
    // members arrive in shortlex order because the raw level is sorted
    for (auto& v : lvl.verts)
      if (!std::is_sorted(v.members.begin(), v.members.end(), shortlex_less))
        std::sort(v.members.begin(), v.members.end(), shortlex_less);

    // induced vertical edges
    if (n > 0) {
      for (int i = 0; i < raw.nverts(n); ++i) {
        const int ci = raw_to_q[n][i];
        for (int rp : raw.vert(n, i).parents) {
          const int qp = raw_to_q[n - 1][rp];
          auto& ps = lvl.verts[ci].parents;
          if (std::find(ps.begin(), ps.end(), qp) == ps.end()) ps.push_back(qp);
        }
      }
      for (int ci = 0; ci < static_cast<int>(lvl.verts.size()); ++ci) {
        auto& ps = lvl.verts[ci].parents;
        std::sort(ps.begin(), ps.end());
        for (int qp : ps) q.levels[n - 1].verts[qp].children.push_back(ci);
      }
    }
    // horizontal edges re-decided on the class maps
    decide_level_edges(q.spec, q.hull, lvl,
                       q.spec.kappa * rat_pow(q.spec.r_min, static_cast<unsigned>(n)), q.opts, n);
    finish_level_components(lvl, n);
  }
  reduce_to_tree(q);
  return q;
}

void reduce_to_tree(Snapshot& snap) {
  for (int n = 0; n <= snap.max_level; ++n)
    for (auto& v : snap.levels[n].verts) v.reduced_children.clear();
  for (int n = 1; n <= snap.max_level; ++n)
    for (int i = 0; i < snap.nverts(n); ++i) {
      const auto& ps = snap.vert(n, i).parents;
      if (ps.empty()) throw InternalError("non-root vertex without parents");
      snap.vert(n - 1, ps.front()).reduced_children.push_back(i);
    }
}

const std::vector<Component>& components_at(const Snapshot& snap, int n) {
  if (n < 0 || n > snap.max_level) throw UsageError("components_at: level out of range");
  return snap.levels[n].comps;
}

std::vector<int> offspring_components(const Snapshot& snap, const Component& T) {
  if (T.level >= snap.max_level) throw UsageError("offspring_components: level at snapshot depth");
  const int n = T.level;
  std::vector<char> descend(snap.nverts(n + 1), 0);
  for (int vi : T.vertices)
    for (int c : snap.vert(n, vi).children) descend[c] = 1;
  std::vector<int> out;
  for (int ci = 0; ci < static_cast<int>(snap.levels[n + 1].comps.size()); ++ci) {
    const auto& comp = snap.levels[n + 1].comps[ci];
    bool any = false, all = true;
    for (int v : comp.vertices) {
      if (descend[v])
        any = true;
      else
        all = false;
    }
    // closure under descent: a component meeting T's offspring is contained in it
    if (any && !all)
      throw InternalError("horizontal component split across parent components");
    if (any) out.push_back(ci);
  }
  return out;
}

bool has_coincidences(const Snapshot& raw) {
  for (int n = 1; n <= raw.max_level; ++n) {
    if (raw.quotiented) {
      for (const auto& v : raw.levels[n].verts)
        if (v.members.size() > 1) return true;
      continue;
    }
    std::map<std::pair<std::pair<Rational, bool>, Rational>, int> seen;
    for (const auto& v : raw.levels[n].verts) {
      if (raw.spec.dimension != 1) {
        for (const auto& w : raw.levels[n].verts) {
          if (&v != &w && v.map.equals(w.map, raw.spec.tol)) return true;
        }
        continue;
      }
      auto key = std::make_pair(std::make_pair(v.map.scale(), v.map.reflect()), v.map.translate1());
      if (!seen.emplace(key, 1).second) return true;
    }
  }
  return false;
}

DegreeProfile degree_profile(const Snapshot& snap) {
  DegreeProfile out;
  for (int n = 0; n <= snap.max_level; ++n) {
    int mx = 0;
    for (int i = 0; i < snap.nverts(n); ++i) {
      const auto& v = snap.vert(n, i);
      mx = std::max(mx, static_cast<int>(v.parents.size() + v.children.size() +
                                         snap.levels[n].adj[i].size()));
    }
    out.max_degree.push_back(mx);
  }
  const std::size_t L = out.max_degree.size();
  if (L >= 4 && out.max_degree[L - 1] > out.max_degree[L - 2] &&
      out.max_degree[L - 2] > out.max_degree[L - 3]) {
    out.growth_suspected = true;
    out.note = "max degree grows over the last levels; separation (OSC/WSC) likely fails "
               "for this structure";
  } else {
    out.note = "max degree bounded over the observed levels (finite-depth heuristic)";
  }
  return out;
}

std::string to_dot(const Snapshot& snap, DotView view) {
  std::ostringstream os;
  os << "graph augtree {\n  rankdir=TB;\n  node [shape=circle, fontsize=10];\n";
  auto node_id = [&](int n, int i) { return "v" + std::to_string(n) + "_" + std::to_string(i); };
  for (int n = 0; n <= snap.max_level; ++n) {
    if (view == DotView::Augmented) {
      // one cluster per component
      for (std::size_t c = 0; c < snap.levels[n].comps.size(); ++c) {
        os << "  subgraph cluster_L" << n << "_" << c << " {\n    style=dotted;\n";
        for (int i : snap.levels[n].comps[c].vertices) {
          const std::string lbl = snap.vertex_name(n, i);
          os << "    " << node_id(n, i) << " [label=\"" << (lbl.empty() ? "\\u03d1" : lbl)
             << "\"];\n";
        }
        os << "  }\n";
      }
    } else {
      for (int i = 0; i < snap.nverts(n); ++i) {
        const std::string lbl = snap.vertex_name(n, i);
        os << "  " << node_id(n, i) << " [label=\"" << (lbl.empty() ? "\\u03d1" : lbl) << "\"];\n";
      }
    }
  }
  for (int n = 1; n <= snap.max_level; ++n)
    for (int i = 0; i < snap.nverts(n); ++i) {
      const auto& v = snap.vert(n, i);
      if (view == DotView::Reduced) {
        os << "  " << node_id(n - 1, v.parents.front()) << " -- " << node_id(n, i) << ";\n";
      } else {
        for (int p : v.parents) os << "  " << node_id(n - 1, p) << " -- " << node_id(n, i) << ";\n";
      }
    }
  if (view == DotView::Augmented)
    for (int n = 0; n <= snap.max_level; ++n)
      for (int i = 0; i < snap.nverts(n); ++i)
        for (int j : snap.levels[n].adj[i])
          if (i < j) os << "  " << node_id(n, i) << " -- " << node_id(n, j) << " [style=dashed];\n";
  os << "}\n";
  return os.str();
}

}  // namespace augtree
