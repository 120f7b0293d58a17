#include <doctest.h>

#include <fstream>

#include "bmkit/cli.hpp"
#include "bmkit/corpus.hpp"
#include "bmkit/verify.hpp"

using namespace bmkit;

namespace {
int run(std::vector<std::string> args) {
  args.insert(args.begin(), "bmkit");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

const SpaceParams kP1{{2.0}, 3.0, 6.0};
}  // namespace

TEST_SUITE("verify_cli") {
  TEST_CASE("suite registry") {
    CHECK(suite_names().size() == 11);
    CHECK_THROWS_AS(run_suite("nope"), ParseError);
  }

  TEST_CASE("empty corpus gives a vacuous report") {
    const auto r = run_suite("wavelet", SuiteConfig{0, 4, 0});
    CHECK(r.vacuous);
    CHECK(r.checks.empty());
    CHECK(r.passed());
  }

  TEST_CASE("reports are deterministic and anchored") {
    const std::string a = dump_report(run_suite("norms-exact"));
    CHECK(a == dump_report(run_suite("norms-exact")));
    const auto r = run_suite("norms-exact");
    for (const auto& c : r.checks) CHECK(!c.anchor.empty());
    CHECK(r.find("closed-form-1d") != nullptr);
    CHECK(r.find("closed-form-1d")->pass);
  }

  TEST_CASE("operator norm estimates") {
    FunctionCorpus c;
    c.count = 3;
    const auto seeds = generate_corpus(c);
    EstimateConfig ec;
    ec.budget = 30;
    const NormEstimate id = estimate_operator_norm(OperatorSpec{"identity"}, seeds, kP1, kP1, ec);
    CHECK(id.best == doctest::Approx(1.0).epsilon(1e-14));
    const NormEstimate m = estimate_operator_norm(OperatorSpec{"dyadic-maximal"}, seeds, kP1, kP1, ec);
    CHECK(m.best >= 1.0);
    CHECK(m.recomputed == doctest::Approx(m.best).epsilon(1e-10));
    CHECK(bm_value(m.witness, kP1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.evaluations == ec.budget);
    const SpaceParams l2{{2.0}, 2.0, kInf};
    const NormEstimate rz = estimate_operator_norm(OperatorSpec{"riesz"}, seeds, l2, l2, ec);
    CHECK(rz.best <= 1.0 + 1e-10);
  }

  TEST_CASE("cli exit codes") {
    CHECK(run({"bogus"}) == 2);
    CHECK(run({"verify", "heat", "--count", "0", "--out", "/dev/null"}) == 0);
    CHECK(run({"verify", "nope"}) == 2);
    const std::string bad = "cli_bad.json", good = "cli_good.json";
    std::ofstream(bad) << R"({"dim":1,"J":0,"origin":[0],"shape":[1],"values":[[1,0]])";
    std::ofstream(good) << R"({"dim":1,"J":0,"origin":[0],"shape":[1],"values":[[1,0]]})";
    CHECK(run({"norm", "bm", "--params", R"({"p":[2],"t":3,"r":6})", "--in", bad}) == 2);
    CHECK(run({"norm", "bm", "--params", R"({"p":[2],"t":3,"r":6})", "--in", good, "--out", "/dev/null"}) == 0);
    CHECK(run({"norm", "block", "--params", R"({"p":[2],"t":3,"r":2})", "--in", good}) == 3);
    CHECK(run({"apply", "frac", "--alpha", "1.5", "--in", good}) == 3);
  }
}
