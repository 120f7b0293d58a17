#include <doctest.h>

#include "bmkit/corpus.hpp"
#include "bmkit/real_operators.hpp"

using namespace bmkit;

namespace {
GridFunction unit(int J) {
  DyadicCube q;
  return indicator(q, J);
}

double potential(double x) {
  if (x <= 0.0) return 2.0 * (std::sqrt(1.0 - x) - std::sqrt(-x));
  if (x >= 1.0) return 2.0 * (std::sqrt(x) - std::sqrt(x - 1.0));
  return 2.0 * (std::sqrt(x) + std::sqrt(1.0 - x));
}
}  // namespace

TEST_SUITE("real_operators") {
  TEST_CASE("dyadic maximal of the unit interval") {
    const GridFunction m = dyadic_maximal(unit(3));
    for (std::int64_t k = 8; k < 16; ++k) CHECK(m.at_abs({k, 0, 0}).real() == 0.5);
    for (std::int64_t k = 0; k < 8; ++k) CHECK(m.at_abs({k, 0, 0}).real() == 1.0);
  }

  TEST_CASE("martingale maximal equals dyadic maximal") {
    FunctionCorpus c;
    c.count = 3;
    for (const auto& f : generate_corpus(c)) {
      const auto [a, b] = align(martingale_maximal(f), dyadic_maximal(f));
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.values[i].real() == doctest::Approx(b.values[i].real()).epsilon(1e-13));
    }
  }

  TEST_CASE("one-dimensional maximal function example") {
    CHECK(maximal_1d(StepFunction{{0.0, 1.0}, {1.0}}, 3.0, 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("iterated maximal bracket") {
    FunctionCorpus c;
    c.dim = 2;
    c.J = 3;
    const Bracketed b = iterated_maximal(generate_corpus(c)[0]);
    for (std::size_t i = 0; i < b.mid.size(); ++i) {
      CHECK(b.lo.values[i].real() <= b.mid.values[i].real() * (1 + 1e-14));
      CHECK(b.mid.values[i].real() <= b.hi.values[i].real() * (1 + 1e-14));
    }
  }

  TEST_CASE("shifted proxy dominates the dyadic maximal") {
    FunctionCorpus c;
    const GridFunction f = generate_corpus(c)[0];
    const auto [d, p] = align(dyadic_maximal(f), hl_maximal_proxy(f));
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.values[i].real() <= p.values[i].real() + 1e-14);
  }

  TEST_CASE("fractional integral of the unit interval") {
    const FractionalResult r = fractional_integral(unit(4), 0.5);
    for (std::size_t i = 0; i < r.value.size(); ++i) {
      const double x = (static_cast<double>(r.value.origin[0] + static_cast<std::int64_t>(i)) + 0.5) * r.value.h();
      CHECK(r.value.values[i].real() == doctest::Approx(potential(x)).epsilon(1e-12));
    }
    CHECK(fractional_integral_at(unit(4), 0.5, 0.5) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(fractional_integral_at(unit(4), 0.5, 2.0) == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-14));
  }

  TEST_CASE("two-dimensional fractional integral carries a small certificate") {
    FunctionCorpus c;
    c.dim = 2;
    c.J = 3;
    const FractionalResult r = fractional_integral(abs_of(generate_corpus(c)[0]), 0.5);
    CHECK(r.quadrature_error <= 1e-6 * r.value.max_abs());
    for (const auto& v : r.value.values) CHECK(v.real() >= 0.0);
  }

  TEST_CASE("vector maximal with one entry is the scalar maximal") {
    FunctionCorpus c;
    const GridFunction f = generate_corpus(c)[0];
    const auto [a, b] = align(vector_maximal(std::vector<GridFunction>{f}, 2.0), dyadic_maximal(f));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.values[i].real() == doctest::Approx(b.values[i].real()));
  }
}
