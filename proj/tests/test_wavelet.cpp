#include <doctest.h>

#include <numeric>

#include "bmkit/corpus.hpp"
#include "bmkit/wavelet.hpp"

using namespace bmkit;

TEST_SUITE("wavelet") {
  TEST_CASE("filters") {
    for (const char* f : {"haar", "db2", "db3", "db4", "db5", "db6"}) {
      const auto s = WaveletSystem::make(f);
      CHECK(std::accumulate(s.h.begin(), s.h.end(), 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
      CHECK(std::inner_product(s.h.begin(), s.h.end(), s.h.begin(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(moment_residual(s) <= 1e-10);
    }
    CHECK_THROWS_AS(WaveletSystem::make("db9"), ParseError);
  }

  TEST_CASE("hypotheses") {
    CHECK_FALSE(WaveletSystem::make("haar").meets_hypotheses(1));
    CHECK_FALSE(WaveletSystem::make("db4").meets_hypotheses(1));
    CHECK(WaveletSystem::make("db6").meets_hypotheses(1));
  }

  TEST_CASE("orthonormality") {
    CHECK(haar_gram_error(1, 3) == 0.0);
    CHECK(haar_gram_error(2, 2) == 0.0);
    CHECK(dwt_gram_error(WaveletSystem::make("db4"), 8, 4) <= 1e-10);
  }

  TEST_CASE("cumulative table limits") {
    const CumulativeTable t(WaveletSystem::make("db2"), 4);
    CHECK(t.at(0, 0, -1) == 0.0);
    CHECK(t.at(0, 0, 3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t.at(1, 0, 3) == doctest::Approx(0.0).epsilon(1e-14) );
  }

  TEST_CASE("haar plancherel") {
    FunctionCorpus c;
    c.count = 3;
    const auto sys = WaveletSystem::make("haar");
    for (const auto& f : generate_corpus(c)) {
      const WaveletWindow w = default_wavelet_window(f);
      const GridFunction S = wavelet_square_function(f, sys, w);
      const double lhs = std::pow(mixed_norm(S, {2.0}), 2.0);
      const double rhs = std::pow(mixed_norm(f, {2.0}), 2.0) - std::pow(mixed_norm(conditional_expectation(f, w.jlo), {2.0}), 2.0);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }

  TEST_CASE("zeroing a coefficient lowers the square function") {
    FunctionCorpus c;
    const GridFunction f = generate_corpus(c)[0];
    CoefficientSet cs = wavelet_coefficients(f, WaveletSystem::make("db3"), default_wavelet_window(f));
    const GridFunction a = wavelet_square_function(cs);
    cs.coeffs[cs.coeffs.size() / 2].value = 0.0;
    const auto [x, y] = align(wavelet_square_function(cs), a);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x.values[i].real() <= y.values[i].real() + 1e-15);
  }
}
