#include <doctest.h>

#include "bmkit/corpus.hpp"
#include "bmkit/mixed_lebesgue.hpp"

using namespace bmkit;

namespace {

GridFunction random_grid(std::uint64_t seed, int dim, int J) {
  FunctionCorpus c;
  c.seed = seed;
  c.dim = dim;
  c.J = J;
  return generate_corpus(c)[0];
}

// Direct nested sums, x_1 innermost.
double brute_mixed(const GridFunction& f, double p1, double p2) {
  const double h = f.h();
  double outer = 0.0;
  for (std::int64_t b = 0; b < f.shape[1]; ++b) {
    double inner = 0.0;
    for (std::int64_t a = 0; a < f.shape[0]; ++a) inner += std::pow(std::abs(f.at_rel({a, b, 0})), p1) * h;
    outer += std::pow(inner, p2 / p1) * h;
  }
  return std::pow(outer, 1.0 / p2);
}

}  // namespace

TEST_SUITE("mixed_lebesgue") {
  TEST_CASE("mixed norm matches nested sums") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const GridFunction f = random_grid(s, 2, 3);
      CHECK(mixed_norm(f, {1.5, 4.0}) == doctest::Approx(brute_mixed(f, 1.5, 4.0)).epsilon(1e-13));
      CHECK(mixed_norm(f, {3.0, 1.0}) == doctest::Approx(brute_mixed(f, 3.0, 1.0)).epsilon(1e-13));
    }
  }

  TEST_CASE("order of integration matters") {
    GridFunction f(2, 0, {0, 0, 0}, {2, 1, 1});
    f.values = {1.0, 1.0};
    CHECK(mixed_norm(f, {1.0, kInf}) == doctest::Approx(2.0));
    CHECK(mixed_norm(f, {kInf, 1.0}) == doctest::Approx(1.0));
  }

  TEST_CASE("conjugate exponents") {
    CHECK(conjugate(ExponentVector{2.0})[0] == 2.0);
    CHECK(conjugate(ExponentVector{kInf})[0] == 1.0);
    CHECK(conjugate(ExponentVector{1.0})[0] == kInf);
    CHECK(conjugate(ExponentVector{4.0, 1.5})[1] == doctest::Approx(3.0));
  }

  TEST_CASE("hoelder ratio at most one") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto r = holder_check(random_grid(s, 2, 3), random_grid(s + 100, 2, 3), {3.0, 1.5});
      CHECK(r.ratio <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("hoelder equality for norming pairs") {
    const GridFunction f = random_grid(3, 1, 4);
    const GridFunction g = map_values(f, [](cplx v) { return cplx{std::abs(v), 0.0}; });
    CHECK(holder_check(f, g, {2.0}).ratio == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("young with positive functions in L1 is an identity") {
    DyadicCube q;
    const GridFunction f = indicator(q, 2);
    const auto r = young_check(f, f, {1.0}, {1.0});
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("pairing is bilinear") {
    const GridFunction f = random_grid(1, 1, 4), g = random_grid(2, 1, 4);
    const cplx a = pairing(f, g), b = pairing(scaled(f, 2.0) + g, g);
    const cplx gg = pairing(g, g);
    CHECK(std::abs(b - (2.0 * a + gg)) < 1e-13);
  }

  TEST_CASE("invalid exponents are rejected") {
    CHECK_THROWS_AS(check_exponents({0.0}, 1), PreconditionError);
    CHECK_THROWS_AS(check_exponents({2.0}, 2), PreconditionError);
  }
}
