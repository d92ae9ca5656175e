#include "doctest.h"

#include "json.hpp"
#include "superdirac/verify.hpp"

using namespace superdirac;

TEST_SUITE("verify") {
  TEST_CASE("reports are sorted, finite and consistent") {
    VerifyOptions o;
    o.suite = "clifford";
    o.chart = "flat2";
    o.samples = 3;
    const VerificationReport rep = run_verify(o);
    CHECK(rep.pass);
    CHECK(rep.chart == "flat2");
    REQUIRE(rep.checks.size() >= 5);
    for (size_t k = 1; k < rep.checks.size(); ++k) CHECK(rep.checks[k - 1].id < rep.checks[k].id);
    for (const auto& c : rep.checks) {
      CHECK(std::isfinite(c.max_residual));
      CHECK(c.pass == (c.max_residual <= c.tolerance));
      CHECK(c.id.rfind("clifford.", 0) == 0);
    }
    const auto j = nlohmann::json::parse(rep.to_json());
    CHECK(j.at("suite") == "clifford");
    CHECK(j.at("pass") == true);
    CHECK(j.at("checks").size() == rep.checks.size());
    CHECK_FALSE(j.at("checks")[0].contains("wall_ms"));
    CHECK(rep.to_human().find("overall PASS") != std::string::npos);
    o.timing = true;
    CHECK(nlohmann::json::parse(run_verify(o).to_json()).at("checks")[0].contains("wall_ms"));
  }

  TEST_CASE("all runs every applicable suite") {
    VerifyOptions o;
    o.suite = "all";
    o.chart = "flat3";
    o.samples = 2;
    const VerificationReport rep = run_verify(o);
    CHECK(rep.pass);
    CHECK(rep.find("cartan.d_d"));
    CHECK(rep.find("hodge.coderivative"));
    CHECK(rep.find("superconnection.special"));
    CHECK_FALSE(rep.find("lichnerowicz.formula"));  // odd dimension
    CHECK_FALSE(rep.find("clifford.chirality"));
    CHECK_FALSE(rep.find("sw.functional"));
    o.sw = SWConfig{};
    CHECK(run_verify(o).find("sw.functional"));
  }

  TEST_CASE("seed changes the samples, not the verdict") {
    VerifyOptions o;
    o.suite = "levi-civita";
    o.chart = "poly3";
    o.samples = 3;
    const auto a = run_verify(o);
    o.seed = 2;
    const auto b = run_verify(o);
    CHECK(a.pass);
    CHECK(b.pass);
    CHECK(a.to_json() != b.to_json());
  }

  TEST_CASE("usage errors") {
    VerifyOptions o;
    o.suite = "nosuch";
    CHECK_THROWS_AS(run_verify(o), ConfigError);
    o.suite = "sw";
    CHECK_THROWS_AS(run_verify(o), ConfigError);
    o.suite = "lichnerowicz";
    o.chart = "minkowski2";
    CHECK_THROWS_AS(run_verify(o), ConfigError);
    o.chart = "nosuch";
    o.suite = "cartan";
    CHECK_THROWS_AS(run_verify(o), ConfigError);
    o.chart = "flat";
    o.samples = 0;
    CHECK_THROWS_AS(run_verify(o), ConfigError);
    o.suite = "sw";
    o.samples = 2;
    o.sw = sw_random_config(2, 8, 1);
    CHECK_THROWS_AS(run_verify(o), DomainError);
  }
}
