#include <doctest.h>

#include "bmkit/block_predual.hpp"
#include "bmkit/corpus.hpp"

using namespace bmkit;

namespace {
const SpaceParams kP1{{2.0}, 3.0, 6.0};

GridFunction unit(int J) {
  DyadicCube q;
  return indicator(q, J);
}
}  // namespace

TEST_SUITE("block_predual") {
  TEST_CASE("regime check") {
    CHECK_NOTHROW(check_block_regime(kP1));
    CHECK_THROWS_AS(check_block_regime(SpaceParams{{2.0}, 3.0, 3.0}), PreconditionError);
    CHECK_THROWS_AS(check_block_regime(SpaceParams{{2.0}, 2.0, 6.0}), PreconditionError);
    CHECK_THROWS_AS(check_block_regime(SpaceParams{{2.0}, 3.0, kInf}), PreconditionError);
  }

  TEST_CASE("block bound is a power of the cube volume") {
    CHECK(block_bound(kP1, 0) == doctest::Approx(1.0));
    CHECK(block_bound(kP1, 1) == doctest::Approx(std::exp2(-kP1.delta())));
    CHECK(block_bound(SpaceParams{{2.0, 4.0}, 4.0, 8.0}, 2) == doctest::Approx(std::exp2(-2 * 2 * (0.25 - 0.375))));
  }

  TEST_CASE("slice norm of the unit interval at scale one") {
    CHECK(slice_norm(unit(4), kP1, 1) == doctest::Approx(std::pow(2.0, 1.0 / 6.0)).epsilon(1e-13));
  }

  TEST_CASE("decompositions reconstruct and are normalized") {
    FunctionCorpus c;
    c.count = 4;
    for (const auto& f : generate_corpus(c)) {
      const BlockDecomposition d = finite_decomposition(f, kP1);
      for (const auto& b : d.blocks) CHECK(is_normalized_block(b, kP1));
      const auto [x, y] = align(reconstruct(d), f);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x.values[i] - y.values[i]) <= 1e-13);
      CHECK(d.weight_norm == doctest::Approx(block_norm_upper(f, kP1).value).epsilon(1e-12));
    }
  }

  TEST_CASE("normalized blocks have upper bound at most one") {
    FunctionCorpus c;
    c.family = "blocks";
    c.count = 6;
    for (const auto& b : generate_corpus(c)) CHECK(block_norm_upper(b, kP1).value <= 1.0 + 1e-12);
  }

  TEST_CASE("sandwich and witness") {
    FunctionCorpus c;
    c.count = 2;
    for (const auto& f : generate_corpus(c)) {
      const double up = block_norm_upper(f, kP1).value;
      const auto inf = block_norm_infimum(f, kP1);
      const auto lo = block_norm_lower(f, kP1);
      CHECK(lo.value <= inf.value * (1.0 + 1e-12));
      CHECK(inf.value <= up * (1.0 + 1e-12));
      CHECK(bm_value(lo.witness, kP1) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(pairing(lo.witness, f)) == doctest::Approx(lo.value).epsilon(1e-12));
    }
  }
}
