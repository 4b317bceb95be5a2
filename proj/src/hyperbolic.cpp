#include "augtree/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "augtree/errors.hpp"

namespace augtree {

GraphView::GraphView(const Snapshot& snap, int k) : snap_(&snap), k_(k) {
  if (k < 1) throw UsageError("view step must be >= 1");
  depth_ = snap.max_level / k;
  up_.resize(depth_ + 1);
  kids_.resize(depth_ + 1);
  offsets_.assign(1, 0);
  for (int kl = 0; kl <= depth_; ++kl) {
    const int n = snap.nverts(kl * k);
    up_[kl].assign(n, -1);
    kids_[kl].assign(n, {});
    offsets_.push_back(offsets_.back() + n);
  }
  for (int kl = 1; kl <= depth_; ++kl) {
    const int base = kl * k;
    for (int i = 0; i < snap.nverts(base); ++i) {
      int lvl = base, v = i;
      for (int step = 0; step < k; ++step) {
        v = snap.vert(lvl, v).parents.front();
        --lvl;
      }
      up_[kl][i] = v;
      kids_[kl - 1][v].push_back(i);
    }
  }
  hdist_.resize(depth_ + 1);
  hdist_ready_.assign(depth_ + 1, 0);
}

const std::vector<int>& GraphView::horizontal(int kl, int i) const {
  return snap_->levels[kl * k_].adj[i];
}

int GraphView::component_of(int kl, int i) const { return snap_->vert(kl * k_, i).component; }

std::vector<int> GraphView::bfs(int kl, int i) const {
  std::vector<int> dist(total_vertices(), -1);
  std::deque<std::pair<int, int>> q;
  dist[flat_id(kl, i)] = 0;
  q.emplace_back(kl, i);
  while (!q.empty()) {
    auto [l, v] = q.front();
    q.pop_front();
    const int d = dist[flat_id(l, v)];
    auto visit = [&](int nl, int nv) {
      int& slot = dist[flat_id(nl, nv)];
      if (slot < 0) {
        slot = d + 1;
        q.emplace_back(nl, nv);
      }
    };
    if (l > 0) visit(l - 1, parent(l, v));
    if (l < depth_)
      for (int c : kids_[l][v]) visit(l + 1, c);
    for (int nb : horizontal(l, v)) visit(l, nb);
  }
  return dist;
}

int GraphView::tree_distance(int klx, int ix, int kly, int iy) const {
  int la = klx, a = ix, lb = kly, b = iy, d = 0;
  while (la > lb) {
    a = parent(la--, a);
    ++d;
  }
  while (lb > la) {
    b = parent(lb--, b);
    ++d;
  }
  while (a != b) {
    a = parent(la--, a);
    b = parent(lb--, b);
    d += 2;
  }
  return d;
}

void GraphView::ensure_hdist(int kl) const {
  if (hdist_ready_[kl]) return;
  const auto& comps = snap_->levels[kl * k_].comps;
  hdist_[kl].resize(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    const std::size_t sz = comp.size();
    auto& table = hdist_[kl][c];
    table.assign(sz * sz, -1);
    // horizontal BFS inside the component
    std::vector<int> pos(snap_->nverts(kl * k_), -1);
    for (std::size_t t = 0; t < sz; ++t) pos[comp.vertices[t]] = static_cast<int>(t);
    for (std::size_t srci = 0; srci < sz; ++srci) {
      std::deque<int> q;
      table[srci * sz + srci] = 0;
      q.push_back(comp.vertices[srci]);
      while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        const int d = table[srci * sz + pos[v]];
        for (int nb : horizontal(kl, v)) {
          int& slot = table[srci * sz + pos[nb]];
          if (slot < 0) {
            slot = d + 1;
            q.push_back(nb);
          }
        }
      }
    }
  }
  hdist_ready_[kl] = 1;
}

int GraphView::horizontal_distance(int kl, int i, int j) const {
  if (component_of(kl, i) != component_of(kl, j)) return -1;
  ensure_hdist(kl);
  const auto& comp = snap_->levels[kl * k_].comps[component_of(kl, i)];
  const std::size_t sz = comp.size();
  const auto pos_of = [&](int v) {
    return static_cast<std::size_t>(
        std::lower_bound(comp.vertices.begin(), comp.vertices.end(), v) - comp.vertices.begin());
  };
  return hdist_[kl][component_of(kl, i)][pos_of(i) * sz + pos_of(j)];
}

int graph_distance(const GraphView& view, int klx, int ix, int kly, int iy) {
  const auto dist = view.bfs(klx, ix);
  const int d = dist[view.flat_id(kly, iy)];
  if (d < 0) throw InternalError("graph is not connected");
  return d;
}

int twice_gromov_product(const GraphView& view, int klx, int ix, int kly, int iy) {
  const int d = graph_distance(view, klx, ix, kly, iy);
  return klx + kly - d;
}

Rational gromov_product(const GraphView& view, int klx, int ix, int kly, int iy) {
  return Rational(twice_gromov_product(view, klx, ix, kly, iy), 2);
}

CanonicalGeodesic canonical_geodesic(const GraphView& view, int klx, int ix, int kly, int iy) {
  return canonical_geodesic(view, klx, ix, kly, iy, graph_distance(view, klx, ix, kly, iy));
}

CanonicalGeodesic canonical_geodesic(const GraphView& view, int klx, int ix, int kly, int iy,
                                     int d_bfs) {
  // ancestor chains
  std::vector<int> ax(klx + 1), ay(kly + 1);
  ax[klx] = ix;
  for (int l = klx; l > 0; --l) ax[l - 1] = view.parent(l, ax[l]);
  ay[kly] = iy;
  for (int l = kly; l > 0; --l) ay[l - 1] = view.parent(l, ay[l]);
  const int top = std::min(klx, kly);
  int best = -1, best_l = -1, best_h = -1;
  for (int l = 0; l <= top; ++l) {
    const int h = ax[l] == ay[l] ? 0 : view.horizontal_distance(l, ax[l], ay[l]);
    if (h < 0) continue;
    const int cand = (klx - l) + h + (kly - l);
    if (best < 0 || cand < best || (cand == best && l < best_l)) {
      best = cand;
      best_l = l;
      best_h = h;
    }
  }
  if (best != d_bfs)
    throw InternalError("no trapezoidal geodesic attains the BFS distance (" +
                        std::to_string(best) + " vs " + std::to_string(d_bfs) + ")");
  // the identity 2|x∧y| = 2l - h is forced once the trapezoid is minimal
  if (klx + kly - d_bfs != 2 * best_l - best_h)
    throw InternalError("Gromov identity violated by the canonical geodesic");
  return {d_bfs, best_l, best_h};
}

int horizontal_geodesic_bound(const GraphView& view) {
  int c_obs = 0;
  for (int kl = 1; kl <= view.depth(); ++kl) {
    const auto& comps = view.snap().levels[view.snap_level(kl)].comps;
    for (const auto& comp : comps) {
      if (comp.size() < 2) continue;
      for (std::size_t a = 0; a < comp.size(); ++a) {
        const auto dist = view.bfs(kl, comp.vertices[a]);
        for (std::size_t b = a + 1; b < comp.size(); ++b) {
          const int h = view.horizontal_distance(kl, comp.vertices[a], comp.vertices[b]);
          const int d = dist[view.flat_id(kl, comp.vertices[b])];
          if (h == d) c_obs = std::max(c_obs, h);
        }
      }
    }
  }
  return c_obs;
}

double visual_metric(const GraphView& view, int klx, int ix, int kly, int iy, double a) {
  if (a <= 0) throw UsageError("visual metric parameter must be positive");
  if (klx == kly && ix == iy) return 0.0;
  return std::exp(-a * 0.5 * twice_gromov_product(view, klx, ix, kly, iy));
}

NearIsometry build_near_isometry(const Snapshot& snap, const ClassTable& table,
                                 const std::vector<RearrangingMatrix>& certs, int k, int depth) {
  if (!table.simple()) throw UsageError("near-isometry needs a simple class table");
  if (depth * k > snap.max_level)
    throw UsageError("snapshot too shallow for the requested near-isometry depth");
  if (certs.size() != table.comp_classes.size())
    throw UsageError("need one rearranging certificate per component class");
  GraphView view(snap, k);

  NearIsometry iso;
  iso.k = k;
  iso.sigma.resize(depth + 1);
  iso.sigma[0] = {0};
  if (depth == 0) return iso;
  iso.sigma[1].resize(view.nverts(1));
  for (int i = 0; i < view.nverts(1); ++i) iso.sigma[1][i] = i;

  const std::size_t nvc = table.vert_classes.size();
  for (int kl = 1; kl < depth; ++kl) {
    const int lvl = view.snap_level(kl);
    const int nxt = view.snap_level(kl + 1);
    iso.sigma[kl + 1].assign(view.nverts(kl + 1), -1);
    std::vector<char> target_used(view.nverts(kl + 1), 0);

    for (const auto& comp : snap.levels[lvl].comps) {
      const int cls = comp.cls;
      if (cls < 0) throw InternalError("unclassified component during construction");
      const auto& cert = certs[cls];
      const auto& ublock = table.comp_classes[cls].u;
      const std::size_t p = comp.size();
      if (cert.C.size() != p)
        throw InternalError("certificate row count does not match the component size");

      // k-step offspring components, grouped by class
      std::vector<int> off;
      {
        std::vector<char> seen(snap.levels[nxt].comps.size(), 0);
        for (int v : comp.vertices)
          for (int c : view.children(kl, v)) {
            const int oc = snap.vert(nxt, c).component;
            if (!seen[oc]) {
              seen[oc] = 1;
              off.push_back(oc);
            }
          }
        std::sort(off.begin(), off.end());
      }
      std::vector<std::vector<int>> by_class(table.comp_classes.size());
      for (int oc : off) {
        const int ocls = snap.levels[nxt].comps[oc].cls;
        if (ocls < 0) throw InternalError("unclassified offspring component");
        by_class[ocls].push_back(oc);
      }
      std::vector<std::size_t> consumed(table.comp_classes.size(), 0);

      // slots to vertices: per vertex class, pair slot order with vertex order
      std::vector<std::vector<int>> verts_by_vc(nvc);
      for (int v : comp.vertices) {
        const int vc = snap.vert(lvl, v).vclass;
        if (vc < 0) throw InternalError("unclassified vertex during construction");
        verts_by_vc[vc].push_back(v);
      }
      for (std::size_t j = 0; j < nvc; ++j)
        if (ublock[j] != static_cast<long long>(verts_by_vc[j].size()))
          throw InternalError("component representation differs from its class block");
      std::vector<std::size_t> vc_cursor(nvc, 0);

      for (std::size_t s = 0; s < p; ++s) {
        const int jstar = cert.slot_class[s];
        if (vc_cursor[jstar] >= verts_by_vc[jstar].size())
          throw InternalError("certificate targets more vertices of a class than available");
        const int x = verts_by_vc[jstar][vc_cursor[jstar]++];
        const int y = iso.sigma[kl][x];
        if (y < 0) throw InternalError("source vertex without an image");

        // group Λ_s: C[s][j] offspring components of class j
        std::vector<int> group;
        for (std::size_t j = 0; j < cert.C[s].size(); ++j) {
          BigInt cnt = cert.C[s][j];
          for (BigInt t = 0; t < cnt; ++t) {
            if (consumed[j] >= by_class[j].size())
              throw InternalError("certificate asks for more offspring of a class than exist");
            group.push_back(by_class[j][consumed[j]++]);
          }
        }
        // sources: vertices of the group, by vertex class
        std::vector<std::vector<int>> src_by_vc(nvc);
        for (int oc : group)
          for (int v : snap.levels[nxt].comps[oc].vertices) {
            const int vc = snap.vert(nxt, v).vclass;
            if (vc < 0) throw InternalError("unclassified offspring vertex");
            src_by_vc[vc].push_back(v);
          }
        // targets: k-step children of y, by vertex class
        std::vector<std::vector<int>> tgt_by_vc(nvc);
        for (int c : view.children(kl, y)) {
          const int vc = snap.vert(nxt, c).vclass;
          if (vc < 0) throw InternalError("unclassified target vertex");
          tgt_by_vc[vc].push_back(c);
        }
        for (std::size_t j = 0; j < nvc; ++j) {
          if (src_by_vc[j].size() != tgt_by_vc[j].size())
            throw InternalError("slot class counts do not match the target children");
          for (std::size_t t = 0; t < src_by_vc[j].size(); ++t) {
            const int src = src_by_vc[j][t];
            const int tgt = tgt_by_vc[j][t];
            if (iso.sigma[kl + 1][src] >= 0 || target_used[tgt])
              throw InternalError("near-isometry assignment collided");
            iso.sigma[kl + 1][src] = tgt;
            target_used[tgt] = 1;
          }
        }
      }
      for (std::size_t j = 0; j < table.comp_classes.size(); ++j)
        if (consumed[j] != by_class[j].size())
          throw InternalError("certificate left offspring components unassigned");
    }
    for (int v : iso.sigma[kl + 1])
      if (v < 0) throw InternalError("near-isometry left a vertex unmapped");
  }
  return iso;
}

NearIsoVerification verify_near_isometry(const GraphView& view, const NearIsometry& iso,
                                         long long pair_cap) {
  NearIsoVerification out;
  out.c_obs = horizontal_geodesic_bound(view);
  const int D = static_cast<int>(iso.sigma.size()) - 1;

  long long total_pairs = 0;
  int total_verts = 0;
  for (int kl = 0; kl <= D; ++kl) total_verts += view.nverts(kl);
  total_pairs = static_cast<long long>(total_verts) * (total_verts - 1) / 2;
  const bool exhaustive = pair_cap < 0 || total_pairs <= pair_cap;

  std::mt19937 rng(12345);
  auto consider = [&](int klx, int ix, int kly, int iy, const std::vector<int>& dist_row) {
    const int dg = dist_row[view.flat_id(kly, iy)];
    const int dt = view.tree_distance(klx, iso.sigma[klx][ix], kly, iso.sigma[kly][iy]);
    const int dev = std::abs(dt - dg);
    ++out.pairs;
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.witness[0] = klx;
      out.witness[1] = ix;
      out.witness[2] = kly;
      out.witness[3] = iy;
    }
  };

  if (exhaustive) {
    for (int klx = 0; klx <= D; ++klx)
      for (int ix = 0; ix < view.nverts(klx); ++ix) {
        const auto dist_row = view.bfs(klx, ix);
        for (int kly = klx; kly <= D; ++kly)
          for (int iy = (kly == klx ? ix + 1 : 0); iy < view.nverts(kly); ++iy)
            consider(klx, ix, kly, iy, dist_row);
      }
  } else {
    // sampled mode: draw sources, compare against every vertex
    std::uniform_int_distribution<int> pick_level(0, D);
    const long long sources = std::max<long long>(1, pair_cap / std::max(1, total_verts));
    for (long long t = 0; t < sources; ++t) {
      const int klx = pick_level(rng);
      std::uniform_int_distribution<int> pick_vert(0, view.nverts(klx) - 1);
      const int ix = pick_vert(rng);
      const auto dist_row = view.bfs(klx, ix);
      for (int kly = 0; kly <= D; ++kly)
        for (int iy = 0; iy < view.nverts(kly); ++iy)
          if (kly != klx || iy != ix) consider(klx, ix, kly, iy, dist_row);
    }
  }
  out.bound_holds = out.max_deviation <= out.c_obs + 2;
  if (!out.bound_holds)
    throw InternalError(
        "near-isometry bound violated: deviation " + std::to_string(out.max_deviation) +
        " exceeds c_obs + 2 = " + std::to_string(out.c_obs + 2) + " at pair (" +
        view.snap().vertex_name(view.snap_level(out.witness[0]), out.witness[1]) + ", " +
        view.snap().vertex_name(view.snap_level(out.witness[2]), out.witness[3]) + ")");
  return out;
}

NearIsometryReport near_isometry_pipeline(const Snapshot& snap, const ClassTable& table,
                                          int k_max) {
  if (!table.simple()) throw UsageError("near-isometry needs a simple class table");
  NearIsometryReport report;
  report.wlog_k = wlog_power(table);
  report.verdict = is_rearrangeable(table.A, table.B, table.u_blocks(), k_max);
  if (!report.verdict.yes())
    throw UsageError("incidence matrix is not (B,u)-rearrangeable up to k_max = " +
                     std::to_string(k_max));
  // smallest multiple of the verified power that also satisfies the row-sum
  // condition; powers lift along multiples only
  int k = report.verdict.power;
  {
    const BigInt max_size = static_cast<long long>(table.max_component_size());
    for (int j = 1; j <= 64; ++j) {
      k = report.verdict.power * j;
      Mat bk = mat_pow(table.B, static_cast<unsigned>(k));
      BigInt min_row_sum = -1;
      for (const auto& row : bk) {
        BigInt s = 0;
        for (const auto& e : row) s += e;
        if (min_row_sum < 0 || s < min_row_sum) min_row_sum = s;
      }
      if (min_row_sum >= max_size) break;
      if (j == 64) throw CapExceeded("no admissible construction power found");
    }
  }
  report.k = k;
  std::vector<RearrangingMatrix> certs;
  if (k == report.verdict.power) {
    certs = report.verdict.certificates;
  } else {
    const Mat Ak = mat_pow(table.A, static_cast<unsigned>(k));
    const Mat Bk = mat_pow(table.B, static_cast<unsigned>(k));
    for (std::size_t i = 0; i < table.A.size(); ++i) {
      auto c = solve_row(Ak, Bk, table.u_blocks(), static_cast<int>(i));
      if (!c) throw InternalError("power lifting of a rearrangeable matrix failed to solve");
      certs.push_back(std::move(*c));
    }
  }
  const int depth = snap.max_level / k;
  report.sigma = build_near_isometry(snap, table, certs, k, depth);
  GraphView view(snap, k);
  report.verification = verify_near_isometry(view, report.sigma);
  return report;
}

}  // namespace augtree
