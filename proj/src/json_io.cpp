#include "augtree/json_io.hpp"

#include "augtree/errors.hpp"

namespace augtree {

Json meta_json() {
  Json j;
  j["tool"] = "augtree";
  j["version"] = "0.1.0";
  return j;
}

Json mat_json(const Mat& m) {
  Json rows = Json::array();
  for (const auto& r : m) {
    Json row = Json::array();
    for (const auto& e : r) row.push_back(e.str());
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array()) throw UsageError("matrix must be an array of rows");
  Mat m;
  for (const auto& row : j) {
    if (!row.is_array()) throw UsageError("matrix row must be an array");
    std::vector<BigInt> r;
    for (const auto& e : row) {
      if (e.is_number_integer())
        r.emplace_back(e.get<long long>());
      else if (e.is_string())
        r.emplace_back(BigInt(e.get<std::string>()));
      else
        throw UsageError("matrix entries must be integers");
    }
    m.push_back(std::move(r));
  }
  return m;
}

Json ublocks_json(const UBlocks& u) { return mat_json(u); }

UBlocks ublocks_from_json(const Json& j) { return mat_from_json(j); }

AbuInput abu_from_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("matrix file parse error: ") + e.what());
  }
  AbuInput in;
  try {
    in.A = mat_from_json(j.at("A"));
    in.B = mat_from_json(j.at("B"));
    in.u = ublocks_from_json(j.at("u"));
  } catch (const Json::exception& e) {
    throw UsageError(std::string("matrix file needs fields A, B, u: ") + e.what());
  }
  return in;
}

namespace {

std::string vname(const Snapshot& snap, int level, int idx) {
  const std::string s = snap.vertex_name(level, idx);
  return s;
}

}  // namespace

Json snapshot_stats_json(const Snapshot& snap) {
  Json j;
  j["meta"] = meta_json();
  j["quotient"] = snap.quotiented;
  j["depth"] = snap.max_level;
  j["kappa"] = format_rational(snap.spec.kappa);
  j["r_min"] = format_rational(snap.spec.r_min);
  j["mode"] = snap.opts.mode == EdgeMode::Hull ? "hull" : "certified";
  if (snap.spec.dimension == 1) {
    j["hull"] = {format_rational(snap.hull.lo), format_rational(snap.hull.hi)};
  }
  Json levels = Json::array();
  for (int n = 0; n <= snap.max_level; ++n) {
    Json l;
    l["level"] = n;
    l["vertices"] = snap.nverts(n);
    l["horizontal_edges"] = snap.levels[n].edge_count;
    l["components"] = snap.levels[n].comps.size();
    std::size_t mx = 0;
    for (const auto& c : snap.levels[n].comps) mx = std::max(mx, c.size());
    l["max_component"] = mx;
    levels.push_back(l);
  }
  j["levels"] = levels;
  return j;
}

Json components_json(const Snapshot& snap, int level) {
  Json j;
  j["meta"] = meta_json();
  j["level"] = level;
  Json comps = Json::array();
  for (const auto& c : components_at(snap, level)) {
    Json jc;
    Json verts = Json::array();
    for (int v : c.vertices) verts.push_back(vname(snap, level, v));
    jc["vertices"] = verts;
    if (c.cls >= 0) jc["class"] = c.cls + 1;
    comps.push_back(jc);
  }
  j["components"] = comps;
  return j;
}

Json class_table_json(const Snapshot& snap, const ClassTable& table) {
  Json j;
  j["meta"] = meta_json();
  j["status"] = table.simple() ? "simple" : "not_stabilized";
  j["depth"] = table.depth;
  j["window"] = table.window;
  j["quotient"] = table.quotient;
  j["last_new_class_level"] = table.last_new_class_level;
  Json cc = Json::array();
  for (const auto& c : table.comp_classes) {
    Json e;
    e["level"] = c.level;
    Json verts = Json::array();
    for (int v : snap.levels[c.level].comps[c.comp].vertices) verts.push_back(vname(snap, c.level, v));
    e["representative"] = verts;
    e["size"] = c.size;
    Json ub = Json::array();
    for (const auto& x : c.u) ub.push_back(x.str());
    e["u"] = ub;
    cc.push_back(e);
  }
  j["component_classes"] = cc;
  Json vc = Json::array();
  for (const auto& v : table.vert_classes) {
    Json e;
    e["level"] = v.level;
    e["representative"] = vname(snap, v.level, v.vert);
    vc.push_back(e);
  }
  j["vertex_classes"] = vc;
  j["A"] = mat_json(table.A);
  j["B"] = mat_json(table.B);
  j["u"] = ublocks_json(table.u_blocks());
  return j;
}

Json certificate_json(const RearrangingMatrix& cert) {
  Json j;
  j["row"] = cert.row + 1;
  j["C"] = mat_json(cert.C);
  Json sc = Json::array();
  for (int c : cert.slot_class) sc.push_back(c + 1);
  j["slot_classes"] = sc;
  return j;
}

Json rearrange_json(const RearrangeVerdict& verdict) {
  Json j;
  j["meta"] = meta_json();
  j["verdict"] = verdict.yes() ? "yes" : "no";
  j["k_max"] = verdict.k_max;
  if (verdict.yes()) {
    j["power"] = verdict.power;
    Json certs = Json::array();
    for (const auto& c : verdict.certificates) certs.push_back(certificate_json(c));
    j["certificates"] = certs;
  } else {
    j["note"] = "exhausted powers up to k_max; not a mathematical negative";
    if (verdict.failed_row >= 0) j["failed_row"] = verdict.failed_row + 1;
  }
  return j;
}

Json tree_iso_json(const TreeIsoPlan& plan) {
  Json j;
  j["B"] = mat_json(plan.B);
  j["depth"] = plan.depth;
  Json counts = Json::array();
  for (const auto& lvl : plan.level_counts) {
    Json row = Json::array();
    for (const auto& e : lvl) row.push_back(e.str());
    counts.push_back(row);
  }
  j["level_class_counts"] = counts;
  j["rule"] = plan.rule;
  return j;
}

Json dimension_json(const DimensionResult& dim) {
  Json j;
  j["meta"] = meta_json();
  j["rho"] = dim.spectral.rho;
  j["rho_bracket"] = {dim.spectral.lo, dim.spectral.hi};
  j["iterations"] = dim.spectral.iterations;
  j["ratio"] = format_rational(dim.ratio);
  j["dimension"] = dim.dimension;
  j["dimension_bracket"] = {dim.dim_lo, dim.dim_hi};
  j["degenerate"] = dim.degenerate;
  return j;
}

Json disconnected_json(const DisconnectednessReport& rep) {
  Json j;
  j["meta"] = meta_json();
  j["max_component_size"] = rep.max_component_size;
  if (rep.verdict == DisconnectednessReport::Verdict::BoundedObserved) {
    j["verdict"] = "bounded_observed";
    j["bound"] = rep.bound;
  } else {
    j["verdict"] = "growth_observed";
  }
  j["note"] = rep.note;
  return j;
}

Json degree_json(const DegreeProfile& prof) {
  Json j;
  j["max_degree"] = prof.max_degree;
  j["growth_suspected"] = prof.growth_suspected;
  j["note"] = prof.note;
  return j;
}

Json near_isometry_json(const Snapshot& snap, const NearIsometryReport& rep, bool emit_sigma) {
  Json j;
  j["meta"] = meta_json();
  j["k"] = rep.k;
  j["wlog_k"] = rep.wlog_k;
  j["rearrangeable"] = rearrange_json(rep.verdict);
  j["c_obs"] = rep.verification.c_obs;
  j["max_deviation"] = rep.verification.max_deviation;
  j["bound"] = "c_obs + 2 at tested depth";
  j["bound_holds"] = rep.verification.bound_holds;
  j["pairs_checked"] = rep.verification.pairs;
  if (emit_sigma) {
    Json sig = Json::array();
    for (std::size_t kl = 0; kl < rep.sigma.sigma.size(); ++kl) {
      const int lvl = static_cast<int>(kl) * rep.k;
      for (std::size_t i = 0; i < rep.sigma.sigma[kl].size(); ++i) {
        sig.push_back(Json::array(
            {vname(snap, lvl, static_cast<int>(i)), vname(snap, lvl, rep.sigma.sigma[kl][i])}));
      }
    }
    j["sigma"] = sig;
  }
  return j;
}

Json lipschitz_json(const LipschitzReport& rep) {
  Json j;
  j["meta"] = meta_json();
  switch (rep.verdict) {
    case LipschitzReport::Verdict::Equivalent:
      j["verdict"] = "equivalent";
      break;
    case LipschitzReport::Verdict::Inconclusive:
      j["verdict"] = "inconclusive";
      break;
    case LipschitzReport::Verdict::NotComparable:
      j["verdict"] = "not_comparable";
      break;
  }
  j["ratio_multiset_equal"] = rep.ratio_multiset_equal;
  j["coincidences"] = {rep.coincidences_left, rep.coincidences_right};
  if (rep.snap_left && !rep.left.comp_classes.empty())
    j["left"] = class_table_json(*rep.snap_left, rep.left);
  if (rep.snap_right && !rep.right.comp_classes.empty())
    j["right"] = class_table_json(*rep.snap_right, rep.right);
  j["shared_B"] = rep.shared_B;
  if (rep.plan) j["tree_isomorphism"] = tree_iso_json(*rep.plan);
  if (rep.rearrange_left.k_max > 0) j["rearrangeable_left"] = rearrange_json(rep.rearrange_left);
  if (rep.rearrange_right.k_max > 0) j["rearrangeable_right"] = rearrange_json(rep.rearrange_right);
  if (rep.dim_left) j["dimension_left"] = dimension_json(*rep.dim_left);
  if (rep.dim_right) j["dimension_right"] = dimension_json(*rep.dim_right);
  j["notes"] = rep.notes;
  return j;
}

}  // namespace augtree
