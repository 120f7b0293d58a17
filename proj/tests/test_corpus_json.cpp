#include <doctest.h>

#include "bmkit/corpus.hpp"
#include "bmkit/json_io.hpp"

using namespace bmkit;

TEST_SUITE("corpus_json") {
  TEST_CASE("corpus is deterministic and stream-separated") {
    for (const auto& fam : corpus_families()) {
      FunctionCorpus c;
      c.family = fam;
      c.count = 3;
      const auto a = generate_corpus(c), b = generate_corpus(c);
      REQUIRE(a.size() == 3);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].values == b[i].values);
      CHECK(a[0].values != a[1].values);
    }
    FunctionCorpus bad;
    bad.family = "nope";
    CHECK_THROWS_AS(generate_corpus(bad), ParseError);
  }

  TEST_CASE("uniform01 range") {
    auto g = make_stream(1, 2, 3);
    for (int i = 0; i < 1000; ++i) {
      const double u = uniform01(g);
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }

  TEST_CASE("grid function round trip") {
    FunctionCorpus c;
    c.dim = 2;
    c.J = 3;
    const GridFunction f = generate_corpus(c)[0];
    const GridFunction g = grid_function_from_json(parse_json(to_json(f).dump()));
    CHECK(g.values == f.values);
    CHECK(g.origin == f.origin);
    CHECK(g.shape == f.shape);
  }

  TEST_CASE("parse errors are pointered") {
    CHECK_THROWS_WITH_AS(parse_json("{\"dim\": 1,"), doctest::Contains("byte"), ParseError);
    const json j = parse_json(R"({"dim":1,"J":0,"origin":[0],"shape":[2],"values":[[1,0],[2]]})");
    CHECK_THROWS_WITH_AS(grid_function_from_json(j), doctest::Contains("/values/1"), ParseError);
  }

  TEST_CASE("infinity serialization") {
    CHECK(number_to_json(kInf) == "inf");
    CHECK(std::isinf(number_from_json(json("inf"), "x")));
    const SpaceParams sp = space_params_from_json(parse_json(R"({"p":[2,"inf"],"t":3,"r":"inf"})"));
    CHECK(std::isinf(sp.p[1]));
    CHECK(std::isinf(sp.r));
  }
}
