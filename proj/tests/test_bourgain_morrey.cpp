#include <doctest.h>

#include "bmkit/bourgain_morrey.hpp"
#include "bmkit/corpus.hpp"

using namespace bmkit;

namespace {

GridFunction unit(int n, int J) {
  DyadicCube q;
  q.dim = n;
  return indicator(q, J);
}

// Scale-by-scale sum for the unit cube indicator: 2^{jn} cubes with a_Q = 2^{-jn/t} for j >= 0,
// one cube with a_Q = 2^{-j n delta} for j < 0.
double unit_series(int n, const SpaceParams& sp) {
  double s = 0.0;
  for (int j = -400; j <= 400; ++j) {
    if (j >= 0) {
      s += std::exp2(j * n) * std::exp2(-j * n * sp.r / sp.t);
    } else {
      s += std::exp2(-j * n * sp.delta() * sp.r);
    }
  }
  return std::pow(s, 1.0 / sp.r);
}

}  // namespace

TEST_SUITE("bourgain_morrey") {
  TEST_CASE("unit cube norms against the scale series") {
    const SpaceParams a{{2.0}, 3.0, 6.0};
    const SpaceParams b{{2.0, 4.0}, 4.0, 8.0};
    CHECK(bm_value(unit(1, 4), a) == doctest::Approx(unit_series(1, a)).epsilon(1e-12));
    CHECK(bm_value(unit(2, 3), b) == doctest::Approx(unit_series(2, b)).epsilon(1e-12));
    CHECK(bm_value(unit(1, 4), a) == doctest::Approx(std::pow(3.0, 1.0 / 6.0)).epsilon(1e-12));
    CHECK(bm_value(unit(2, 3), b) == doctest::Approx(std::pow(5.0 / 3.0, 1.0 / 8.0)).epsilon(1e-12));
  }

  TEST_CASE("breakdown sums to the total") {
    const SpaceParams sp{{2.0}, 3.0, 6.0};
    const NormBreakdown b = bm_norm(unit(1, 3), sp);
    double s = b.coarse_tail + b.fine_tail;
    for (double v : b.per_scale) s += v;
    CHECK(std::pow(s, 1.0 / sp.r) == doctest::Approx(b.total).epsilon(1e-14));
    CHECK(b.divergence == Divergence::none);
  }

  TEST_CASE("divergence classification") {
    CHECK(bm_norm(unit(1, 3), SpaceParams{{2.0}, 2.0, 6.0}).divergence == Divergence::coarse_tail);
    CHECK(bm_norm(unit(1, 3), SpaceParams{{2.0}, 3.0, 3.0}).divergence == Divergence::fine_tail);
    CHECK(std::isinf(bm_norm(unit(2, 3), SpaceParams{{2.0, 4.0}, 8.0 / 3.0, 8.0}).total));
    CHECK(std::isfinite(bm_norm(unit(1, 3), SpaceParams{{2.0}, 2.0, kInf}).total));
    CHECK(to_string(Divergence::coarse_tail) == "coarse-tail");
    CHECK(to_string(Divergence::fine_tail) == "fine-tail");
  }

  TEST_CASE("zero function has zero norm") {
    GridFunction z(1, 3, {0, 0, 0}, {8, 1, 1});
    CHECK(bm_value(z, SpaceParams{{2.0}, 3.0, 6.0}) == 0.0);
  }

  TEST_CASE("dilation law") {
    FunctionCorpus c;
    c.count = 4;
    for (const auto& f : generate_corpus(c)) {
      for (int m : {-2, -1, 1, 2}) {
        const LawCheck l = check_dilation(f, SpaceParams{{2.0}, 3.0, 6.0}, m);
        CHECK(l.rel_err <= 1e-12);
      }
    }
    const LawCheck e = check_dilation(unit(1, 4), SpaceParams{{2.0}, 3.0, 6.0}, 1);
    CHECK(e.lhs == doctest::Approx(std::exp2(-1.0 / 3.0) * std::pow(3.0, 1.0 / 6.0)).epsilon(1e-12));
  }

  TEST_CASE("integer translation of the unit cube") {
    const SpaceParams sp{{2.0, 4.0}, 4.0, 8.0};
    const GridFunction f = unit(2, 3);
    CHECK(check_translation(f, sp, {3, -2, 0}, 0).rel_err <= 1e-12);
  }

  TEST_CASE("monotone in r") {
    FunctionCorpus c;
    c.count = 5;
    for (const auto& f : generate_corpus(c)) {
      double prev = kInf;
      for (double r : {4.0, 6.0, 12.0, kInf}) {
        const double v = bm_value(f, SpaceParams{{2.0}, 3.0, r});
        CHECK(v <= prev);
        prev = v;
      }
    }
  }

  TEST_CASE("interval maximal function") {
    CHECK(maximal_interval_indicator(0.0, 1.0, 3.0) == doctest::Approx(1.0 / 3.0));
    CHECK(maximal_interval_indicator(0.0, 1.0, 0.5) == 1.0);
    CHECK(maximal_interval_indicator(0.0, 1.0, -1.0) == doctest::Approx(0.5));
  }

  TEST_CASE("l^u aggregate of one function is its modulus") {
    FunctionCorpus c;
    const GridFunction f = generate_corpus(c)[0];
    const GridFunction a = lu_aggregate({f}, 2.0);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(a.values[i].real() == doctest::Approx(std::abs(f.values[i])));
  }

  TEST_CASE("approximation by conditional expectations") {
    FunctionCorpus c;
    const GridFunction f = generate_corpus(c)[0];
    const auto r = approximation_check(f, SpaceParams{{2.0}, 3.0, 6.0}, {1, 2, 3, 4});
    CHECK(r.final_zero);
    CHECK(r.residual.front() >= r.residual.back());
  }
}
