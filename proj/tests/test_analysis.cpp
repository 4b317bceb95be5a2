#include "doctest.h"

#include <cmath>

#include "augtree/errors.hpp"
#include "test_support.hpp"

using namespace augtree;
using testsup::load_spec;
using testsup::mat;
using testsup::rat;

TEST_CASE("spectral radius") {
  SpectralResult r = spectral_radius(mat({{2, 1, 1}, {1, 2, 1}, {0, 2, 1}}));
  const double want = 2.0 + std::sqrt(3.0);
  CHECK(std::abs(r.rho - want) < 1e-10);
  CHECK(r.hi - r.lo < 1e-12);
  CHECK(r.lo <= want + 1e-12);
  CHECK(r.hi >= want - 1e-12);

  CHECK(spectral_radius(mat({{2}})).rho == doctest::Approx(2.0));
  SpectralResult rb = spectral_radius(mat({{3, 1}, {2, 1}}));
  CHECK(std::abs(rb.rho - want) < 1e-10);  // same characteristic root 2 + sqrt(3)

  // zero matrix
  CHECK(spectral_radius(mat({{0, 0}, {0, 0}})).rho == 0.0);
  // reducible: block maximum
  CHECK(spectral_radius(mat({{2, 5}, {0, 1}})).rho == doctest::Approx(2.0));
  // periodic block: brackets still close because of the +I shift
  CHECK(spectral_radius(mat({{0, 1}, {1, 0}})).rho == doctest::Approx(1.0));
}

TEST_CASE("Perron row-sum bounds hold") {
  for (const Mat& M : {mat({{2, 1, 1}, {1, 2, 1}, {0, 2, 1}}), mat({{3, 1}, {2, 1}}),
                       mat({{1, 1}, {1, 0}}), mat({{4}})}) {
    SpectralResult r = spectral_radius(M);
    long double mins = 1e300L, maxs = 0.0L;
    for (const auto& row : M) {
      long double s = 0;
      for (const auto& e : row) s += static_cast<long double>(e.convert_to<double>());
      mins = std::min(mins, s);
      maxs = std::max(maxs, s);
    }
    CHECK(r.rho >= static_cast<double>(mins) - 1e-9);
    CHECK(r.rho <= static_cast<double>(maxs) + 1e-9);
  }
}

TEST_CASE("Hausdorff dimension") {
  DimensionResult d = hausdorff_dimension(mat({{2, 1, 1}, {1, 2, 1}, {0, 2, 1}}), rat("1/4"));
  const double want = std::log(2.0 + std::sqrt(3.0)) / std::log(4.0);
  CHECK(std::abs(d.dimension - want) < 1e-9);
  CHECK(d.dim_lo <= want + 1e-12);
  CHECK(d.dim_hi >= want - 1e-12);
  CHECK_FALSE(d.degenerate);

  DimensionResult cantor = hausdorff_dimension(mat({{2}}), rat("1/3"));
  CHECK(cantor.dimension == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-12));
  DimensionResult line = hausdorff_dimension(mat({{2}}), rat("1/2"));
  CHECK(line.dimension == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(hausdorff_dimension(mat({{2}}), rat("5/4")), UsageError);
}

TEST_CASE("dimension grows with extra maps") {
  // a separated system gains dimension when a map is added
  DimensionResult two = hausdorff_dimension(mat({{2}}), rat("1/5"));
  DimensionResult three = hausdorff_dimension(mat({{3}}), rat("1/5"));
  CHECK(three.dimension > two.dimension);
}

TEST_CASE("disconnectedness profiles") {
  Snapshot cantor = build_snapshot(load_spec("cantor.json"), 8);
  DisconnectednessReport rc = disconnectedness_profile(cantor);
  CHECK(rc.verdict == DisconnectednessReport::Verdict::BoundedObserved);
  CHECK(rc.bound == 1);

  Snapshot interval = build_snapshot(load_spec("interval.json"), 10);
  DisconnectednessReport ri = disconnectedness_profile(interval);
  CHECK(ri.verdict == DisconnectednessReport::Verdict::GrowthObserved);
  for (int n = 0; n <= 10; ++n)
    CHECK(ri.max_component_size[n] == static_cast<std::size_t>(1) << n);

  Snapshot raw = build_snapshot(load_spec("k2.json"), 6);
  Snapshot q = build_quotient(raw);
  DisconnectednessReport rq = disconnectedness_profile(q);
  CHECK(rq.verdict == DisconnectednessReport::Verdict::BoundedObserved);
}

TEST_CASE("Lipschitz equivalence of the published pair") {
  LipschitzOptions opt;
  LipschitzReport rep =
      lipschitz_report(load_spec("example28.json"), load_spec("k2.json"), opt);
  CHECK(rep.equivalent());
  CHECK(rep.ratio_multiset_equal);
  CHECK(rep.coincidences_left);
  CHECK(rep.coincidences_right);
  CHECK(rep.shared_B);
  REQUIRE(rep.plan.has_value());
  CHECK(rep.rearrange_left.yes());
  CHECK(rep.rearrange_right.yes());
}

TEST_CASE("Lipschitz equivalence of the intermediate parameter") {
  LipschitzOptions opt;
  LipschitzReport rep = lipschitz_report(load_spec("k15_8.json"), load_spec("k2.json"), opt);
  CHECK(rep.equivalent());
}

TEST_CASE("a system is equivalent to itself") {
  LipschitzOptions opt;
  opt.depth = 5;
  LipschitzReport rep =
      lipschitz_report(load_spec("example44.json"), load_spec("example44.json"), opt);
  CHECK(rep.equivalent());
}

TEST_CASE("ratio mismatch is not comparable") {
  LipschitzOptions opt;
  LipschitzReport rep = lipschitz_report(load_spec("cantor.json"), load_spec("interval.json"), opt);
  CHECK(rep.verdict == LipschitzReport::Verdict::NotComparable);
}

TEST_CASE("dimension mismatch is not comparable") {
  LipschitzOptions opt;
  opt.dim_matrix_left = mat({{2}});
  opt.dim_matrix_right = mat({{3}});
  LipschitzReport rep = lipschitz_report(load_spec("cantor.json"), load_spec("cantor.json"), opt);
  CHECK(rep.verdict == LipschitzReport::Verdict::NotComparable);
}

TEST_CASE("touching pair from the dust comparison") {
  // the unequal-ratio system with touching pieces against its dust-like
  // variant: same tree, so equivalence composes
  LipschitzOptions opt;
  opt.depth = 5;
  LipschitzReport rep =
      lipschitz_report(load_spec("example44.json"), load_spec("example44_dust.json"), opt);
  CHECK(rep.equivalent());
}

TEST_CASE("non-stabilizing input stays inconclusive") {
  LipschitzOptions opt;
  opt.depth = 6;
  LipschitzReport rep = lipschitz_report(load_spec("interval.json"), load_spec("interval.json"), opt);
  CHECK(rep.verdict == LipschitzReport::Verdict::Inconclusive);
}
