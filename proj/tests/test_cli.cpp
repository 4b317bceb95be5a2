#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "augtree/json_io.hpp"
#include "augtree/errors.hpp"
#include "test_support.hpp"

using namespace augtree;
using testsup::fixture_path;
using testsup::slurp;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string out_path = "cli_out_" + std::to_string(counter++) + ".txt";
  const std::string cmd = std::string(AUGTREE_BIN) + " " + args + " > " + out_path + " 2>&1";
  RunResult r;
  const int rc = std::system(cmd.c_str());
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out_path);
  std::remove(out_path.c_str());
  return r;
}

}  // namespace

TEST_CASE("classify subcommand reproduces the quotient table") {
  RunResult r = run_cli("classify " + fixture_path("example28.json") + " --depth 6 --quotient");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j.at("status") == "simple");
  CHECK(j.at("A") == Json::parse(R"([["1","1","0"],["1","2","1"],["1","2","2"]])"));
  CHECK(j.at("B") == Json::parse(R"([["3","1"],["2","1"]])"));
  CHECK(j.at("u") == Json::parse(R"([["1","0"],["2","1"],["3","1"]])"));
}

TEST_CASE("classify output is byte-identical across runs") {
  const std::string args = "classify " + fixture_path("example28.json") + " --depth 5 --quotient";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("rearrange subcommand on raw matrices") {
  RunResult r = run_cli("rearrange --matrices " + fixture_path("abu_ex32.json"));
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j.at("verdict") == "yes");
  CHECK(j.at("power") == 1);
  CHECK(j.at("necessary_identity") == true);
  CHECK(j.at("certificates").size() == 3);
}

TEST_CASE("dimension subcommand") {
  RunResult r =
      run_cli("dimension --matrix " + fixture_path("ft_ex45.json") + " --ratio 1/4");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  const double want = std::log(2.0 + std::sqrt(3.0)) / std::log(4.0);
  CHECK(std::abs(j.at("dimension").get<double>() - want) < 1e-9);
}

TEST_CASE("equivalence subcommand") {
  RunResult r = run_cli("equivalence " + fixture_path("example28.json") + " " +
                        fixture_path("k2.json") + " --depth 6");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j.at("verdict") == "equivalent");
  CHECK(j.contains("tree_isomorphism"));
  CHECK(j.at("rearrangeable_left").at("verdict") == "yes");
  CHECK(j.at("rearrangeable_right").at("verdict") == "yes");
}

TEST_CASE("near-isometry subcommand") {
  RunResult r = run_cli("near-isometry " + fixture_path("example44.json") + " --depth 5");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j.at("k") == 1);
  CHECK(j.at("bound_holds") == true);
}

TEST_CASE("build and components subcommands") {
  RunResult r = run_cli("build " + fixture_path("cantor.json") + " --depth 3");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j.at("levels").size() == 4);
  CHECK(j.at("levels").at(2).at("vertices") == 4);

  RunResult c = run_cli("components " + fixture_path("example28.json") + " --depth 2 --level 1");
  REQUIRE(c.status == 0);
  Json jc = Json::parse(c.out);
  CHECK(jc.at("components").size() == 2);

  RunResult d = run_cli("build " + fixture_path("cantor.json") + " --depth 2 --format dot");
  REQUIRE(d.status == 0);
  CHECK(d.out.find("graph augtree") != std::string::npos);

  RunResult q = run_cli("quotient " + fixture_path("example28.json") + " --depth 3 --format dot --view reduced");
  REQUIRE(q.status == 0);
  CHECK(q.out.find("--") != std::string::npos);
}

TEST_CASE("disconnected subcommand") {
  RunResult r = run_cli("disconnected " + fixture_path("interval.json") + " --depth 8");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j.at("verdict") == "growth_observed");
}

TEST_CASE("usage errors exit with one") {
  RunResult r = run_cli("classify /nonexistent.json");
  CHECK(r.status == 1);
  RunResult r2 = run_cli("dimension --matrix " + fixture_path("ft_ex45.json") + " --ratio 5/4");
  CHECK(r2.status == 1);
  RunResult r3 = run_cli("bogus-subcommand");
  CHECK(r3.status != 0);
}

TEST_CASE("exported class tables revalidate") {
  RunResult r = run_cli("classify " + fixture_path("k15_8.json") + " --depth 6 --quotient");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  const Mat A = mat_from_json(j.at("A"));
  const Mat B = mat_from_json(j.at("B"));
  const UBlocks u = ublocks_from_json(j.at("u"));
  CHECK(necessary_check(A, B, u));
  RearrangeVerdict v = is_rearrangeable(A, B, u, 4);
  CHECK(v.yes());
  for (const auto& cert : v.certificates)
    CHECK(validate_certificate(A, B, u, cert.row, cert.C));
}
