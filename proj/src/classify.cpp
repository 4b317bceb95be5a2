#include "augtree/classify.hpp"

#include <algorithm>
#include <map>

#include "augtree/errors.hpp"

namespace augtree {

namespace {

// exact-key lookup of a map within one level; linear fallback above d=1
struct LevelMapIndex {
  std::map<std::pair<std::pair<Rational, bool>, Rational>, int> exact;
  const SnapLevel* lvl = nullptr;
  const IfsSpec* spec = nullptr;

  void build(const SnapLevel& level, const IfsSpec& s) {
    lvl = &level;
    spec = &s;
    if (s.dimension != 1) return;
    for (int i = 0; i < static_cast<int>(level.verts.size()); ++i) {
      const auto& m = level.verts[i].map;
      exact.emplace(std::make_pair(std::make_pair(m.scale(), m.reflect()), m.translate1()), i);
    }
  }
  int find(const Xform& m) const {
    if (spec->dimension == 1) {
      auto it = exact.find(std::make_pair(std::make_pair(m.scale(), m.reflect()), m.translate1()));
      return it == exact.end() ? -1 : it->second;
    }
    for (int i = 0; i < static_cast<int>(lvl->verts.size()); ++i)
      if (lvl->verts[i].map.equals(m, spec->tol)) return i;
    return -1;
  }
};

// Shared certificate machinery.  May write SnapVertex::vclass when
// inheritance is enabled; otherwise leaves the snapshot untouched.
struct CertEngine {
  Snapshot& s;
  std::vector<LevelMapIndex> map_index;
  bool vclass_rules = false;

  explicit CertEngine(Snapshot& snap) : s(snap) {
    map_index.resize(s.max_level + 1);
    for (int n = 0; n <= s.max_level; ++n) map_index[n].build(s.levels[n], s.spec);
  }

  const std::vector<int>& rchildren(int level, int idx) const {
    return s.vert(level, idx).reduced_children;
  }

  bool vertex_replay_maps(int lt, int t, int lv, int v, const Xform& h, int depth) const {
    if (depth <= 0) return true;
    const auto& ct = rchildren(lt, t);
    const auto& cv = rchildren(lv, v);
    if (ct.size() != cv.size()) return false;
    std::vector<char> used(cv.size(), 0);
    for (int c : ct) {
      const Xform target = h.compose(s.vert(lt + 1, c).map);
      const int j = map_index[lv + 1].find(target);
      if (j < 0) return false;
      bool matched = false;
      for (std::size_t q = 0; q < cv.size(); ++q)
        if (cv[q] == j && !used[q]) {
          used[q] = 1;
          matched = true;
          break;
        }
      if (!matched) return false;
      if (!vertex_replay_maps(lt + 1, c, lv + 1, j, h, depth - 1)) return false;
    }
    return true;
  }

  std::vector<std::uint8_t> suffix_of(int level, int child, int parent_level, int parent) const {
    const auto& pw = s.vert(parent_level, parent).canonical();
    const auto& cw = s.vert(level, child).canonical();
    return std::vector<std::uint8_t>(cw.syms.begin() + pw.syms.size(), cw.syms.end());
  }

  // raw trees: subtree correspondence via identical suffix sets
  bool vertex_replay_suffix(int lt, int t, int lv, int v, int depth) const {
    if (depth <= 0) return true;
    const auto& ct = rchildren(lt, t);
    const auto& cv = rchildren(lv, v);
    if (ct.size() != cv.size()) return false;
    std::vector<std::pair<std::vector<std::uint8_t>, int>> st, sv;
    st.reserve(ct.size());
    sv.reserve(cv.size());
    for (int c : ct) st.emplace_back(suffix_of(lt + 1, c, lt, t), c);
    for (int c : cv) sv.emplace_back(suffix_of(lv + 1, c, lv, v), c);
    std::sort(st.begin(), st.end());
    std::sort(sv.begin(), sv.end());
    for (std::size_t i = 0; i < st.size(); ++i) {
      if (st[i].first != sv[i].first) return false;
      if (!vertex_replay_suffix(lt + 1, st[i].second, lv + 1, sv[i].second, depth - 1))
        return false;
    }
    return true;
  }

  bool try_vertex_cert(int lt, int t, int lv, int v, int depth) const {
    const auto& mt = s.vert(lt, t).map;
    const auto& mv = s.vert(lv, v).map;
    const int delta = lv - lt;
    if (delta < 0) return false;
    if (mv.scale() != mt.scale() * rat_pow(s.spec.r_min, static_cast<unsigned>(delta)))
      return false;
    if (s.quotiented || s.spec.dimension != 1) {
      const Xform h = mv.compose(mt.inverse());
      return vertex_replay_maps(lt, t, lv, v, h, depth);
    }
    return vertex_replay_suffix(lt, t, lv, v, depth);
  }

  // descendants of the two components must correspond component-by-component
  bool comp_replay(int lr, const Component& rep, int lt, const Component& comp, const Xform& h,
                   int depth) const {
    if (depth <= 0) return true;
    if (lr + 1 > s.max_level || lt + 1 > s.max_level) return true;
    const auto offr = offspring_components(s, rep);
    const auto offt = offspring_components(s, comp);
    if (offr.size() != offt.size()) return false;
    std::vector<char> used(offt.size(), 0);
    for (int zr : offr) {
      const auto& Z = s.levels[lr + 1].comps[zr];
      const int probe = map_index[lt + 1].find(h.compose(s.vert(lr + 1, Z.vertices.front()).map));
      if (probe < 0) return false;
      const int zc = s.vert(lt + 1, probe).component;
      bool fresh = false;
      for (std::size_t q = 0; q < offt.size(); ++q)
        if (offt[q] == zc && !used[q]) {
          used[q] = 1;
          fresh = true;
          break;
        }
      if (!fresh) return false;
      const auto& Zc = s.levels[lt + 1].comps[zc];
      if (Z.size() != Zc.size()) return false;
      for (int zv : Z.vertices) {
        const int iv = map_index[lt + 1].find(h.compose(s.vert(lr + 1, zv).map));
        if (iv < 0 || s.vert(lt + 1, iv).component != zc) return false;
      }
      if (!comp_replay(lr + 1, Z, lt + 1, Zc, h, depth - 1)) return false;
    }
    return true;
  }

  std::optional<ConjugacyCertificate> comp_cert(int lr, const Component& rep, int lt,
                                                const Component& comp, int replay_depth) {
    if (rep.size() != comp.size()) return std::nullopt;
    const int delta = lt - lr;
    if (delta < 0) return std::nullopt;
    const Rational factor = rat_pow(s.spec.r_min, static_cast<unsigned>(delta));
    const int comp_idx = s.vert(lt, comp.vertices.front()).component;
    const auto& anchor = s.vert(lr, rep.vertices.front()).map;
    for (int cand : comp.vertices) {
      if (s.vert(lt, cand).map.scale() != anchor.scale() * factor) continue;
      const Xform h = s.vert(lt, cand).map.compose(anchor.inverse());
      std::vector<std::pair<int, int>> pairing;
      std::map<int, int> gmap;
      std::vector<char> used(s.nverts(lt), 0);
      bool ok = true;
      for (int z : rep.vertices) {
        const int img = map_index[lt].find(h.compose(s.vert(lr, z).map));
        if (img < 0 || used[img] || s.vert(lt, img).component != comp_idx) {
          ok = false;
          break;
        }
        used[img] = 1;
        pairing.emplace_back(z, img);
        gmap[z] = img;
      }
      if (!ok) continue;
      std::size_t er = 0, et = 0;
      for (int z : rep.vertices) er += s.levels[lr].adj[z].size();
      for (int z : comp.vertices) et += s.levels[lt].adj[z].size();
      if (er != et) continue;
      for (int z : rep.vertices) {
        for (int nb : s.levels[lr].adj[z]) {
          auto it = gmap.find(nb);
          if (it == gmap.end()) {
            ok = false;  // neighbour escaped the component: inconsistent
            break;
          }
          const auto& adjt = s.levels[lt].adj[gmap[z]];
          if (!std::binary_search(adjt.begin(), adjt.end(), it->second)) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (!ok) continue;
      std::vector<std::pair<int, int>> pending;  // (target vertex, class) to inherit
      if (vclass_rules) {
        for (auto& [a, b] : pairing) {
          const int va = s.vert(lr, a).vclass;
          const int vb = s.vert(lt, b).vclass;
          if (va < 0) throw InternalError("representative member lacks a vertex class");
          if (vb >= 0 && vb != va) {
            ok = false;
            break;
          }
          if (vb < 0) pending.emplace_back(b, va);
        }
        if (!ok) continue;
      }
      if (!comp_replay(lr, rep, lt, comp, h, replay_depth)) continue;
      for (auto& [b, vc] : pending) s.vert(lt, b).vclass = vc;
      ConjugacyCertificate cert;
      cert.h = h;
      cert.pairing = std::move(pairing);
      return cert;
    }
    return std::nullopt;
  }
};

std::string vertex_signature(const Snapshot& s, int level, int v, int depth) {
  if (depth <= 0) return ".";
  std::vector<std::string> kids;
  for (int c : s.vert(level, v).reduced_children)
    kids.push_back(vertex_signature(s, level + 1, c, depth - 1));
  std::sort(kids.begin(), kids.end());
  std::string out = "(";
  for (auto& k : kids) out += k;
  out += ")";
  return out;
}

std::string comp_signature(const Snapshot& s, int level, const Component& comp, int depth) {
  std::vector<std::size_t> degs;
  for (int v : comp.vertices) degs.push_back(s.levels[level].adj[v].size());
  std::sort(degs.begin(), degs.end());
  std::string out = "[" + std::to_string(comp.size()) + ":";
  for (auto d : degs) out += std::to_string(d) + ",";
  if (depth > 0 && level < s.max_level) {
    std::vector<std::string> kids;
    for (int zc : offspring_components(s, comp))
      kids.push_back(comp_signature(s, level + 1, s.levels[level + 1].comps[zc], depth - 1));
    std::sort(kids.begin(), kids.end());
    for (auto& k : kids) out += k;
  }
  out += "]";
  return out;
}

}  // namespace

std::vector<std::vector<BigInt>> ClassTable::u_blocks() const {
  std::vector<std::vector<BigInt>> out;
  out.reserve(comp_classes.size());
  for (const auto& c : comp_classes) out.push_back(c.u);
  return out;
}

std::size_t ClassTable::max_component_size() const {
  std::size_t mx = 0;
  for (const auto& c : comp_classes) mx = std::max(mx, c.size);
  return mx;
}

std::optional<ConjugacyCertificate> conjugacy_equivalent(const Snapshot& snap, const Component& T,
                                                         const Component& Tp, int replay_depth) {
  CertEngine eng(const_cast<Snapshot&>(snap));
  eng.vclass_rules = false;
  return eng.comp_cert(T.level, T, Tp.level, Tp, replay_depth);
}

ClassTable classify(Snapshot& snap, int window, std::size_t max_classes) {
  if (window < 1) throw UsageError("stabilisation window must be >= 1");
  if (snap.max_level < window + 2)
    throw UsageError("classification needs snapshot depth >= window + 2");
  for (int n = 0; n <= snap.max_level; ++n) {
    for (auto& v : snap.levels[n].verts) v.vclass = -1;
    for (auto& c : snap.levels[n].comps) c.cls = -1;
  }

  CertEngine eng(snap);
  eng.vclass_rules = true;

  ClassTable table;
  table.depth = snap.max_level;
  table.window = window;
  table.quotient = snap.quotiented;

  // ---- vertex classes: every level except the deepest, which inherits ----
  for (int n = 0; n < snap.max_level; ++n) {
    const int depth = std::min(window, snap.max_level - n);
    for (int v = 0; v < snap.nverts(n); ++v) {
      int cls = -1;
      for (std::size_t c = 0; c < table.vert_classes.size(); ++c) {
        const auto& rep = table.vert_classes[c];
        if (eng.try_vertex_cert(rep.level, rep.vert, n, v, depth)) {
          cls = static_cast<int>(c);
          break;
        }
      }
      if (cls < 0) {
        if (table.vert_classes.size() >= max_classes)
          throw CapExceeded("vertex class cap exceeded; structure does not stabilize");
        const std::string sig = vertex_signature(snap, n, v, depth);
        for (const auto& rep : table.vert_classes)
          if (vertex_signature(snap, rep.level, rep.vert, depth) == sig) {
            table.ambiguous = true;  // neither certified equal nor refuted
            break;
          }
        cls = static_cast<int>(table.vert_classes.size());
        table.vert_classes.push_back({n, v});
        if (n > 0) table.last_new_class_level = std::max(table.last_new_class_level, n);
      }
      snap.vert(n, v).vclass = cls;
    }
  }

  // ---- component classes -------------------------------------------------
  for (int n = 0; n <= snap.max_level; ++n) {
    const int replay = std::min({window, snap.max_level - n, 2});
    for (int ci = 0; ci < static_cast<int>(snap.levels[n].comps.size()); ++ci) {
      auto& comp = snap.levels[n].comps[ci];
      int cls = -1;
      for (std::size_t c = 0; c < table.comp_classes.size(); ++c) {
        const auto& rep = table.comp_classes[c];
        if (eng.comp_cert(rep.level, snap.levels[rep.level].comps[rep.comp], n, comp, replay)) {
          cls = static_cast<int>(c);
          break;
        }
      }
      if (cls < 0) {
        if (table.comp_classes.size() >= max_classes)
          throw CapExceeded("component class cap exceeded; structure does not stabilize");
        const int sigdepth = std::min(window, snap.max_level - n);
        const std::string sig = comp_signature(snap, n, comp, sigdepth);
        for (const auto& rep : table.comp_classes)
          if (comp_signature(snap, rep.level, snap.levels[rep.level].comps[rep.comp], sigdepth) ==
              sig) {
            table.ambiguous = true;
            break;
          }
        ClassTable::CompClass cc;
        cc.level = n;
        cc.comp = ci;
        cc.size = comp.size();
        cls = static_cast<int>(table.comp_classes.size());
        table.comp_classes.push_back(cc);
        if (n > 0) table.last_new_class_level = std::max(table.last_new_class_level, n);
      }
      comp.cls = cls;
    }
  }

  // ---- matrices and representation vector ---------------------------------
  const std::size_t m = table.comp_classes.size();
  const std::size_t nv = table.vert_classes.size();
  table.A.assign(m, std::vector<BigInt>(m, 0));
  table.B.assign(nv, std::vector<BigInt>(nv, 0));
  bool incomplete = false;

  for (std::size_t i = 0; i < m; ++i) {
    auto& cc = table.comp_classes[i];
    const auto& rep = snap.levels[cc.level].comps[cc.comp];
    cc.u.assign(nv, 0);
    for (int v : rep.vertices) {
      const int vc = snap.vert(cc.level, v).vclass;
      if (vc < 0) {
        incomplete = true;
        continue;
      }
      ++cc.u[vc];
    }
    if (cc.level >= snap.max_level) {
      incomplete = true;
      continue;
    }
    for (int zc : offspring_components(snap, rep)) {
      const int cls = snap.levels[cc.level + 1].comps[zc].cls;
      if (cls < 0) {
        incomplete = true;
        continue;
      }
      ++table.A[i][cls];
    }
  }
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& rep = table.vert_classes[i];
    for (int c : snap.vert(rep.level, rep.vert).reduced_children) {
      const int vc = snap.vert(rep.level + 1, c).vclass;
      if (vc < 0) {
        incomplete = true;
        continue;
      }
      ++table.B[i][vc];
    }
  }

  const bool stabilized = table.last_new_class_level <= snap.max_level - window;
  table.status = (!table.ambiguous && !incomplete && stabilized) ? ClassTable::Status::Simple
                                                                 : ClassTable::Status::NotStabilized;
  return table;
}

std::optional<TreeIsoPlan> tree_isomorphism_by_B(const ClassTable& a, const ClassTable& b,
                                                 int depth) {
  if (!a.simple() || !b.simple()) return std::nullopt;
  if (a.B.size() != b.B.size() || !mat_equal(a.B, b.B)) return std::nullopt;
  TreeIsoPlan plan;
  plan.depth = depth;
  plan.B = a.B;
  Mat pw = mat_identity(a.B.size());
  for (int k = 0; k <= depth; ++k) {
    plan.level_counts.push_back(pw[0]);  // the root sits in class 1 on both sides
    pw = mat_mul(pw, a.B);
  }
  plan.rule =
      "pair the level-k vertices of the two trees class by class: sort each side by "
      "(vertex class, canonical word) and zip; both sides carry the same per-class "
      "counts (B^k)[1][j], giving a level-preserving tree isomorphism";
  return plan;
}

}  // namespace augtree
