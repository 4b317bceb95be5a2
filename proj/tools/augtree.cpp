#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "augtree/errors.hpp"
#include "augtree/json_io.hpp"

namespace {

using namespace augtree;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + out_path + "'");
  out << text << "\n";
}

struct CommonOpts {
  std::string spec_path;
  int depth = 6;
  std::string kappa_override;
  std::string mode = "hull";
  bool quotient = false;
  std::string out;
  std::string format = "json";
};

BuildOptions build_options(const CommonOpts& c) {
  BuildOptions b;
  if (c.mode == "hull")
    b.mode = EdgeMode::Hull;
  else if (c.mode == "certified")
    b.mode = EdgeMode::Certified;
  else
    throw UsageError("mode must be 'hull' or 'certified'");
  if (const char* cap = std::getenv("AUGTREE_MAX_LEVEL_VERTICES")) {
    b.max_vertices_per_level = static_cast<std::size_t>(std::stoll(cap));
  }
  return b;
}

IfsSpec load_spec(const CommonOpts& c) {
  IfsSpec spec = IfsSpec::from_json_text(slurp(c.spec_path));
  if (!c.kappa_override.empty()) {
    spec.kappa = parse_rational(c.kappa_override);
    if (spec.kappa < 0) throw UsageError("kappa must be >= 0");
  }
  return spec;
}

Snapshot load_snapshot(const CommonOpts& c) {
  IfsSpec spec = load_spec(c);
  Snapshot raw = build_snapshot(spec, c.depth, build_options(c));
  if (c.quotient) return build_quotient(raw);
  return raw;
}

void add_common(CLI::App* cmd, CommonOpts& c, bool with_spec = true) {
  if (with_spec) cmd->add_option("spec", c.spec_path, "IFS spec file (JSON)")->required();
  cmd->add_option("--depth", c.depth, "levels to build");
  cmd->add_option("--kappa", c.kappa_override, "override the horizontal-edge constant (p/q)");
  cmd->add_option("--mode", c.mode, "edge test: hull | certified");
  cmd->add_flag("--quotient", c.quotient, "work on the quotient space");
  cmd->add_option("--out", c.out, "write output here instead of stdout");
  cmd->add_option("--format", c.format, "json | dot | text (where applicable)");
}

int run(int argc, char** argv) {
  CLI::App app{"augmented-tree analysis of iterated function systems"};
  app.require_subcommand(1);

  CommonOpts cb;
  auto* cmd_build = app.add_subcommand("build", "build the augmented tree and print level stats");
  add_common(cmd_build, cb);
  std::string dot_view = "augmented";
  cmd_build->add_option("--view", dot_view, "dot view: augmented | vertical | reduced");

  CommonOpts cc;
  int comp_level = 1;
  auto* cmd_comp = app.add_subcommand("components", "horizontal components of one level");
  add_common(cmd_comp, cc);
  cmd_comp->add_option("--level", comp_level, "level to report")->required();

  CommonOpts ccl;
  int window = 3;
  auto* cmd_classify = app.add_subcommand("classify", "equivalence classes and A, B, u");
  add_common(cmd_classify, ccl);
  cmd_classify->add_option("--window", window, "stabilisation window");

  CommonOpts cq;
  auto* cmd_quotient = app.add_subcommand("quotient", "quotient space summary / exports");
  add_common(cmd_quotient, cq);
  std::string qview = "augmented";
  cmd_quotient->add_option("--view", qview, "dot view: augmented | vertical | reduced");

  std::string abu_path, rear_out;
  int k_max = 6;
  auto* cmd_rear = app.add_subcommand("rearrange", "decide (B,u)-rearrangeability of A");
  cmd_rear->add_option("--matrices", abu_path, "JSON file with A, B, u")->required();
  cmd_rear->add_option("--k-max", k_max, "largest power to try");
  cmd_rear->add_option("--out", rear_out, "write output here instead of stdout");

  CommonOpts cni;
  int ni_window = 3, ni_kmax = 6;
  bool emit_sigma = false;
  auto* cmd_ni = app.add_subcommand("near-isometry", "build and verify the near-isometry");
  add_common(cmd_ni, cni);
  cmd_ni->add_option("--window", ni_window, "stabilisation window");
  cmd_ni->add_option("--k-max", ni_kmax, "largest rearrangeability power to try");
  cmd_ni->add_flag("--emit-sigma", emit_sigma, "include the word-pair table");

  std::string dim_matrix_path, dim_ratio, dim_out;
  auto* cmd_dim = app.add_subcommand("dimension", "Hausdorff dimension from a finite-type matrix");
  cmd_dim->add_option("--matrix", dim_matrix_path, "JSON matrix file")->required();
  cmd_dim->add_option("--ratio", dim_ratio, "minimum contraction ratio p/q")->required();
  cmd_dim->add_option("--out", dim_out, "write output here instead of stdout");

  CommonOpts cd;
  auto* cmd_disc = app.add_subcommand("disconnected", "total-disconnectedness profile");
  add_common(cmd_disc, cd);

  CommonOpts ce;
  std::string spec2_path, dimm1, dimm2;
  int eq_window = 3, eq_kmax = 6;
  auto* cmd_eq = app.add_subcommand("equivalence", "Lipschitz-equivalence report for two systems");
  cmd_eq->add_option("spec", ce.spec_path, "first IFS spec file")->required();
  cmd_eq->add_option("spec2", spec2_path, "second IFS spec file")->required();
  cmd_eq->add_option("--depth", ce.depth, "levels to build");
  cmd_eq->add_option("--kappa", ce.kappa_override, "override kappa for both");
  cmd_eq->add_option("--mode", ce.mode, "edge test: hull | certified");
  cmd_eq->add_option("--window", eq_window, "stabilisation window");
  cmd_eq->add_option("--k-max", eq_kmax, "largest rearrangeability power to try");
  cmd_eq->add_option("--dim-matrix1", dimm1, "finite-type matrix for the first system");
  cmd_eq->add_option("--dim-matrix2", dimm2, "finite-type matrix for the second system");
  cmd_eq->add_option("--out", ce.out, "write output here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  if (cmd_build->parsed()) {
    Snapshot snap = load_snapshot(cb);
    if (cb.format == "dot") {
      DotView v = dot_view == "vertical"  ? DotView::Vertical
                  : dot_view == "reduced" ? DotView::Reduced
                                          : DotView::Augmented;
      emit(to_dot(snap, v), cb.out);
    } else {
      Json j = snapshot_stats_json(snap);
      j["degree_profile"] = degree_json(degree_profile(snap));
      emit(j.dump(2), cb.out);
    }
    return 0;
  }
  if (cmd_comp->parsed()) {
    Snapshot snap = load_snapshot(cc);
    emit(components_json(snap, comp_level).dump(2), cc.out);
    return 0;
  }
  if (cmd_classify->parsed()) {
    Snapshot snap = load_snapshot(ccl);
    ClassTable table = classify(snap, window);
    emit(class_table_json(snap, table).dump(2), ccl.out);
    return 0;
  }
  if (cmd_quotient->parsed()) {
    CommonOpts c = cq;
    c.quotient = true;
    Snapshot snap = load_snapshot(c);
    if (c.format == "dot") {
      DotView v = qview == "vertical"  ? DotView::Vertical
                  : qview == "reduced" ? DotView::Reduced
                                       : DotView::Augmented;
      emit(to_dot(snap, v), c.out);
    } else {
      Json j = snapshot_stats_json(snap);
      j["degree_profile"] = degree_json(degree_profile(snap));
      emit(j.dump(2), c.out);
    }
    return 0;
  }
  if (cmd_rear->parsed()) {
    AbuInput in = abu_from_text(slurp(abu_path));
    RearrangeVerdict v = is_rearrangeable(in.A, in.B, in.u, k_max);
    Json j = rearrange_json(v);
    j["necessary_identity"] = necessary_check(in.A, in.B, in.u);
    emit(j.dump(2), rear_out);
    return 0;
  }
  if (cmd_ni->parsed()) {
    Snapshot snap = load_snapshot(cni);
    ClassTable table = classify(snap, ni_window);
    if (!table.simple())
      throw UsageError("classification did not stabilize; increase depth or use --quotient");
    NearIsometryReport rep = near_isometry_pipeline(snap, table, ni_kmax);
    emit(near_isometry_json(snap, rep, emit_sigma).dump(2), cni.out);
    return 0;
  }
  if (cmd_dim->parsed()) {
    Json jm;
    try {
      jm = Json::parse(slurp(dim_matrix_path));
    } catch (const Json::parse_error& e) {
      throw UsageError(std::string("matrix file parse error: ") + e.what());
    }
    Mat M = jm.is_object() ? mat_from_json(jm.at("matrix")) : mat_from_json(jm);
    DimensionResult dim = hausdorff_dimension(M, parse_rational(dim_ratio));
    emit(dimension_json(dim).dump(2), dim_out);
    return 0;
  }
  if (cmd_disc->parsed()) {
    Snapshot snap = load_snapshot(cd);
    emit(disconnected_json(disconnectedness_profile(snap)).dump(2), cd.out);
    return 0;
  }
  if (cmd_eq->parsed()) {
    IfsSpec a = IfsSpec::from_json_text(slurp(ce.spec_path));
    IfsSpec b = IfsSpec::from_json_text(slurp(spec2_path));
    if (!ce.kappa_override.empty()) {
      a.kappa = parse_rational(ce.kappa_override);
      b.kappa = a.kappa;
    }
    LipschitzOptions opt;
    opt.depth = ce.depth;
    opt.window = eq_window;
    opt.k_max = eq_kmax;
    CommonOpts tmp = ce;
    opt.build = build_options(tmp);
    if (!dimm1.empty()) opt.dim_matrix_left = mat_from_json(Json::parse(slurp(dimm1)));
    if (!dimm2.empty()) opt.dim_matrix_right = mat_from_json(Json::parse(slurp(dimm2)));
    LipschitzReport rep = lipschitz_report(a, b, opt);
    emit(lipschitz_json(rep).dump(2), ce.out);
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const augtree::InternalError& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const augtree::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const augtree::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
