#include <doctest.h>

#include "recruit/cli.hpp"

using recruit::cli::run;

TEST_CASE("repro prints the four worked rows") {
  const auto r = run({"repro"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("P1") != std::string::npos);
  CHECK(r.out.find("P4") != std::string::npos);
  CHECK(r.out.find("0.576") != std::string::npos);
  CHECK(r.out.find("0.57021686747") != std::string::npos);
  CHECK(r.out.find("0.0892318946598") != std::string::npos);
  // All four verdicts and no failed condition.
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = r.out.find("Backfires", pos)) != std::string::npos;
       ++pos)
    ++count;
  CHECK(count == 4);
  CHECK(r.out.find("false") == std::string::npos);
}

TEST_CASE("exact on the no-search P1 builtin") {
  const auto r = run({"exact", "-s", "P1.before"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("truncation_mass: 0") != std::string::npos);
  CHECK(r.out.find("0.576") != std::string::npos);
}

TEST_CASE("builtin ids accept the colon spelling") {
  const auto a = run({"exact", "-s", "P1.before"});
  const auto b = run({"exact", "-s", "P1:before"});
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  // Identical modulo the echoed scenario name.
  CHECK(a.out.find("0.576") != std::string::npos);
  CHECK(b.out.find("0.576") != std::string::npos);
}

TEST_CASE("overrides are applied before validation") {
  const auto r = run({"validate", "-s", "P1.after", "--set", "A.qH=0.95"});
  REQUIRE(r.exit_code == 0);  // validate reports instead of failing
  CHECK(r.out.find("ok: false") != std::string::npos);
  CHECK(r.out.find("assumption") != std::string::npos);

  const auto bad = run({"validate", "-s", "P1.after", "--set", "muA=0.9"});
  REQUIRE(bad.exit_code == 0);
  CHECK(bad.out.find("hard_ok: false") != std::string::npos);
  CHECK(bad.out.find("search probabilities exceed 1") != std::string::npos);
}

TEST_CASE("parse diagnostics name the offending key") {
  const auto r = run({"exact", "-s", "P1.after", "--set", "A.qH=1.2"});
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("A.qH out of [0,1]") != std::string::npos);
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run({"frobnicate"}).exit_code != 0);
  CHECK(run({"simulate", "-s", "P1.before", "--trials", "0"}).exit_code != 0);
  CHECK(run({"exact"}).exit_code != 0);  // missing --scenario
  CHECK(run({"exact", "-s", "/no/such/file"}).exit_code == 2);
}

TEST_CASE("simulate is reproducible byte for byte") {
  const std::vector<std::string> args = {"simulate", "-s",     "P1.before",
                                         "--trials", "20000",  "--seed",
                                         "99",       "--horizon", "300",
                                         "-f",       "json"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"seed\": 99") != std::string::npos);
  CHECK(a.out.find("\"meta\"") != std::string::npos);
  CHECK(a.out.find("\"results\"") != std::string::npos);
}

TEST_CASE("csv and json renderings are deterministic") {
  for (const char* fmt : {"csv", "json"}) {
    const auto a = run({"repro", "-f", fmt});
    const auto b = run({"repro", "-f", fmt});
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
  }
  const auto csv = run({"exact", "-s", "P3.after", "-f", "csv"});
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.out.find("scenario,quantity,lo,hi,mid") != std::string::npos);
}

TEST_CASE("action-trace starts from the documented first moves") {
  const auto r = run({"action-trace", "-s", "P3.after", "--depth", "2"});
  REQUIRE(r.exit_code == 0);
  // B is evaluated first under the index rule at these parameters.
  CHECK(r.out.find("evaluate B#1") != std::string::npos);
  CHECK(r.out.find("hired B") != std::string::npos);

  const auto m = run({"action-trace", "-s", "P1.after", "--depth", "3"});
  REQUIRE(m.exit_code == 0);
  CHECK(m.out.find("evaluate A#0") != std::string::npos);
  CHECK(m.out.find("search") != std::string::npos);
}

TEST_CASE("indices tabulates values for both categories plus the search index") {
  const auto r = run({"indices", "-s", "P1.after", "--depth", "2"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("uS        0.642") != std::string::npos);
  CHECK(r.out.find("VS") != std::string::npos);
  CHECK(r.out.find("0.958904109") != std::string::npos);  // V^B(empty)
}

TEST_CASE("sweep over qH^A via the CLI") {
  const auto r = run({"sweep", "-s", "P1.after", "--vary", "A.qH=0.6,0.95",
                      "--shift", "expansion"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("Backfires") != std::string::npos);
  CHECK(r.out.find("Helps") != std::string::npos);

  const auto bad = run({"sweep", "-s", "P2.before", "--shift", "realloc"});
  CHECK(bad.exit_code == 2);  // realloc requires --zeta
  const auto ok = run({"sweep", "-s", "P2.before", "--shift", "realloc",
                       "--zeta", "0.04"});
  REQUIRE(ok.exit_code == 0);
  CHECK(ok.out.find("Backfires") != std::string::npos);
}
