#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gammalab/verify.h"

using namespace gammalab;

TEST_CASE("each scope passes on the shipped configuration") {
  for (const std::string& scope : {"convex_core", "action_path", "path_opt", "gamma_lab"}) {
    CAPTURE(scope);
    VerifyOptions options;
    options.scope = scope;
    options.samples = 40;
    const VerifyReport report = verify_suite(options);
    for (const InvariantResult& r : report.results) {
      CAPTURE(r.name);
      CAPTURE(r.offending.dump());
      CHECK(r.module == scope);
      CHECK(r.failures == 0);
    }
    CHECK(report.passed());
  }
}

TEST_CASE("scope filter") {
  VerifyOptions options;
  options.scope = "convex_core";
  options.samples = 5;
  const VerifyReport report = verify_suite(options);
  CHECK(report.find("slope_chain") != nullptr);
  CHECK(report.find("interpolation_lemma_bound") == nullptr);
  options.scope = "everything";
  CHECK_THROWS_AS(verify_suite(options), InvalidArgument);
}

TEST_CASE("planted lambda fault is detected") {
  VerifyOptions options;
  options.scope = "convex_core";
  options.samples = 40;
  options.plant_lambda_fault = true;
  const VerifyReport report = verify_suite(options);
  const InvariantResult* chain = report.find("slope_chain");
  REQUIRE(chain != nullptr);
  CHECK(chain->failures > 0);
  CHECK_FALSE(chain->offending.empty());
  CHECK(chain->offending[0].contains("function"));
  CHECK_FALSE(report.passed());
}

TEST_CASE("reports are deterministic per seed") {
  VerifyOptions options;
  options.scope = "convex_core";
  options.samples = 10;
  options.seed = 7;
  const std::string a = to_json(verify_suite(options)).dump();
  const std::string b = to_json(verify_suite(options)).dump();
  CHECK(a == b);
  options.seed = 8;
  CHECK(to_json(verify_suite(options)).dump() != a);
}
