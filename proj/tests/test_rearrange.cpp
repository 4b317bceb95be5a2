#include "doctest.h"

#include <random>

#include "augtree/json_io.hpp"
#include "augtree/errors.hpp"
#include "test_support.hpp"

using namespace augtree;
using testsup::fixture_path;
using testsup::load_spec;
using testsup::mat;
using testsup::slurp;

namespace {

AbuInput ex32() { return abu_from_text(slurp(fixture_path("abu_ex32.json"))); }
AbuInput ex33() { return abu_from_text(slurp(fixture_path("abu_ex33.json"))); }

}  // namespace

TEST_CASE("necessary identity on the published data") {
  AbuInput d = ex32();
  CHECK(necessary_check(d.A, d.B, d.u));
  // both sides of the identity equal [[3,1],[8,3],[11,4]]
  const Mat want = mat({{3, 1}, {8, 3}, {11, 4}});
  for (std::size_t i = 0; i < d.A.size(); ++i)
    for (std::size_t k = 0; k < d.B.size(); ++k) {
      BigInt lhs = 0;
      for (std::size_t j = 0; j < d.A.size(); ++j) lhs += d.A[i][j] * d.u[j][k];
      CHECK(lhs == want[i][k]);
    }

  AbuInput e = ex33();
  CHECK(necessary_check(e.A, e.B, e.u));

  CHECK(necessary_check(mat({{2}}), mat({{2}}), {{BigInt(1)}}));
  CHECK_FALSE(necessary_check(mat({{3}}), mat({{2}}), {{BigInt(1)}}));
}

TEST_CASE("dimension guards") {
  CHECK_THROWS_AS(necessary_check(mat({{1, 2}}), mat({{2}}), {{BigInt(1)}}), UsageError);
  CHECK_THROWS_AS(necessary_check(mat({{2}}), mat({{2}}), {}), UsageError);
}

TEST_CASE("solve_row finds certificates the validator accepts") {
  AbuInput d = ex32();
  for (int i = 0; i < 3; ++i) {
    auto c = solve_row(d.A, d.B, d.u, i);
    REQUIRE(c.has_value());
    std::string why;
    CHECK(validate_certificate(d.A, d.B, d.u, i, c->C, &why));
    CHECK(why.empty());
  }
  AbuInput e = ex33();
  for (int i = 0; i < 5; ++i) {
    auto c = solve_row(e.A, e.B, e.u, i);
    REQUIRE(c.has_value());
    CHECK(validate_certificate(e.A, e.B, e.u, i, c->C));
  }
}

TEST_CASE("the published certificates validate verbatim") {
  AbuInput d = ex32();
  CHECK(validate_certificate(d.A, d.B, d.u, 0, mat({{1, 1, 0}})));
  CHECK(validate_certificate(d.A, d.B, d.u, 1, mat({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})));
  CHECK(validate_certificate(d.A, d.B, d.u, 2,
                             mat({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 1}})));

  // the squared system with its printed certificates
  const Mat A2 = mat_pow(d.A, 2);
  const Mat B2 = mat_pow(d.B, 2);
  CHECK(mat_equal(A2, mat({{2, 3, 1}, {4, 7, 4}, {5, 9, 6}})));
  CHECK(mat_equal(B2, mat({{11, 4}, {8, 3}})));
  CHECK(validate_certificate(A2, B2, d.u, 0, mat({{2, 3, 1}})));
  CHECK(validate_certificate(A2, B2, d.u, 1, mat({{3, 4, 0}, {1, 2, 1}, {0, 1, 3}})));
  CHECK(validate_certificate(A2, B2, d.u, 2,
                             mat({{3, 4, 0}, {0, 1, 3}, {0, 1, 3}, {2, 3, 0}})));

  AbuInput e = ex33();
  CHECK(validate_certificate(e.A, e.B, e.u, 0, mat({{1, 1, 1, 0, 0}})));
  CHECK(validate_certificate(e.A, e.B, e.u, 1, mat({{1, 1, 1, 0, 0}, {0, 0, 1, 1, 0}})));
  CHECK(validate_certificate(e.A, e.B, e.u, 2, mat({{1, 0, 1, 0, 0}, {0, 0, 0, 0, 1}})));
  CHECK(validate_certificate(e.A, e.B, e.u, 3,
                             mat({{1, 1, 1, 0, 0}, {0, 0, 1, 1, 0}, {0, 0, 1, 1, 0}})));
  CHECK(validate_certificate(e.A, e.B, e.u, 4,
                             mat({{1, 1, 1, 0, 0}, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}})));
}

TEST_CASE("full verdicts") {
  AbuInput d = ex32();
  RearrangeVerdict v = is_rearrangeable(d.A, d.B, d.u, 6);
  REQUIRE(v.yes());
  CHECK(v.power == 1);
  CHECK(v.certificates.size() == 3);

  AbuInput e = ex33();
  RearrangeVerdict ve = is_rearrangeable(e.A, e.B, e.u, 6);
  REQUIRE(ve.yes());
  CHECK(ve.power == 1);

  // A^2 against (B^2, u)
  RearrangeVerdict v2 = is_rearrangeable(mat_pow(d.A, 2), mat_pow(d.B, 2), d.u, 1);
  CHECK(v2.yes());

  CHECK(is_rearrangeable(mat({{2}}), mat({{2}}), {{BigInt(1)}}, 3).yes());
  // 3^k never equals 2^k: the necessary identity fails at every power
  RearrangeVerdict no = is_rearrangeable(mat({{3}}), mat({{2}}), {{BigInt(1)}}, 4);
  CHECK_FALSE(no.yes());
}

TEST_CASE("power lifting of certificates") {
  // when A is rearrangeable at power one, C~ = C*A witnesses the square
  AbuInput d = ex32();
  RearrangeVerdict v = is_rearrangeable(d.A, d.B, d.u, 1);
  REQUIRE(v.yes());
  const Mat A2 = mat_pow(d.A, 2);
  const Mat B2 = mat_pow(d.B, 2);
  for (const auto& cert : v.certificates) {
    const Mat lifted = mat_mul(cert.C, d.A);
    CHECK(validate_certificate(A2, B2, d.u, cert.row, lifted));
  }
}

TEST_CASE("wlog power from class tables") {
  Snapshot raw = build_snapshot(load_spec("example28.json"), 6);
  Snapshot q = build_quotient(raw);
  ClassTable t = classify(q, 3);
  REQUIRE(t.simple());
  CHECK(t.max_component_size() == 4);
  CHECK(wlog_power(t) == 2);  // B row sums (4,3) < 4, squared sums (15,11) suffice

  Snapshot cantor = build_snapshot(load_spec("cantor.json"), 5);
  ClassTable tc = classify(cantor, 3);
  CHECK(wlog_power(tc) == 1);

  Snapshot s44 = build_snapshot(load_spec("example44.json"), 5);
  ClassTable t44 = classify(s44, 3);
  CHECK(wlog_power(t44) == 1);  // max component size 3 <= min row sum 3
}

TEST_CASE("validator rejects single-entry mutations") {
  // every +-1 mutation of a valid certificate breaks a column sum, so the
  // validator must reject all of them
  std::vector<std::pair<AbuInput, Mat>> valid;
  AbuInput d = ex32();
  AbuInput e = ex33();
  std::vector<std::pair<AbuInput, int>> rows;
  for (int i = 0; i < 3; ++i) rows.push_back({d, i});
  for (int i = 0; i < 5; ++i) rows.push_back({e, i});

  std::mt19937 rng(20240817);
  int rejected = 0, total = 0;
  while (total < 1000) {
    for (auto& [input, row] : rows) {
      if (total >= 1000) break;
      auto cert = solve_row(input.A, input.B, input.u, row);
      REQUIRE(cert.has_value());
      Mat mutated = cert->C;
      std::uniform_int_distribution<std::size_t> pick_r(0, mutated.size() - 1);
      std::uniform_int_distribution<std::size_t> pick_c(0, mutated[0].size() - 1);
      const std::size_t r = pick_r(rng), c = pick_c(rng);
      const bool up = (rng() & 1u) != 0 || mutated[r][c] == 0;
      mutated[r][c] += up ? 1 : -1;
      ++total;
      std::string why;
      if (!validate_certificate(input.A, input.B, input.u, row, mutated, &why)) ++rejected;
    }
  }
  CHECK(total == 1000);
  CHECK(rejected == 1000);  // zero false accepts
}
