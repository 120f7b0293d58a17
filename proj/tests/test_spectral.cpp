#include <doctest.h>

#include <numbers>

#include "bmkit/corpus.hpp"
#include "bmkit/spectral.hpp"

using namespace bmkit;

namespace {
GridFunction wave(std::uint64_t seed, int dim = 1) {
  FunctionCorpus c;
  c.seed = seed;
  c.family = "band-limited";
  c.dim = dim;
  return generate_corpus(c)[0];
}
}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("profile") {
    const Partition p;
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(p.psi(1.0) == 1.0);
    CHECK(p.psi(2.0) == 1.0);
    CHECK(p.psi(4.0) == 0.0);
    CHECK(p.psi(3.0) > 0.0);
    CHECK(p.psi(3.0) < 1.0);
  }

  TEST_CASE("partition of unity") {
    CHECK(partition_unity_error(BandWindow{-6, 3}, Partition{}) <= 1e-12);
  }

  TEST_CASE("round trip and reconstruction") {
    const GridFunction f = wave(1);
    CHECK(roundtrip_error(f, 2) <= 1e-12);
    const BandWindow w = band_window(f);
    const auto bands = band_projections(f, w);
    GridFunction s = bands[0];
    for (std::size_t k = 1; k < bands.size(); ++k) s = s + bands[k];
    const auto [a, b] = align(s, f);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-9);
  }

  TEST_CASE("heat on a Gaussian") {
    const GridFunction g = sampled_gaussian(1, 4, -6, 6, {0, 0, 0}, 1.0);
    const double alpha = 0.25;
    const GridFunction u = heat(g, alpha);
    const double s = 1.0 + 4.0 * std::numbers::pi * alpha;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = (static_cast<double>(u.origin[0] + static_cast<std::int64_t>(i)) + 0.5) * u.h();
      CHECK(std::abs(u.values[i] - std::exp(-std::numbers::pi * x * x / s) / std::sqrt(s)) <= 1e-6);
    }
  }

  TEST_CASE("heat residual decreases") {
    const HeatCheck h = heat_characterization_check(wave(2), {0.5, 0.125, 0.03125}, SpaceParams{{2.0}, 3.0, 6.0});
    CHECK(h.decreasing);
    CHECK(h.residual[2] < h.residual[0]);
  }

  TEST_CASE("riesz and band-sign contract L2") {
    FunctionCorpus c;
    const GridFunction f = generate_corpus(c)[0];
    CHECK(mixed_norm(riesz(f, 0), {2.0}) <= mixed_norm(f, {2.0}) * (1 + 1e-10));
    const BandWindow w = band_window(f);
    std::vector<int> eps(static_cast<std::size_t>(w.jhi - w.jlo + 1));
    for (std::size_t k = 0; k < eps.size(); ++k) eps[k] = k % 2 ? 1 : -1;
    CHECK(mixed_norm(band_sign(f, eps, w), {2.0}) <= mixed_norm(f, {2.0}) * (1 + 1e-10));
    std::fill(eps.begin(), eps.end(), 0);
    CHECK(band_sign(f, eps, w).max_abs() == 0.0);
  }

  TEST_CASE("peetre maximal dominates the band") {
    const GridFunction f = wave(3);
    const int j = band_window(f).jhi - 1;
    const auto [b, p] = align(abs_of(band_project(f, j)), peetre_maximal(f, j, 2.0));
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.values[i].real() <= p.values[i].real() + 1e-14);
  }

  TEST_CASE("chain rule ratio is scale invariant") {
    ChainRuleParams cp;
    cp.sp1 = SpaceParams{{1.5}, 2.0, 4.0};
    cp.sp2 = SpaceParams{{4.0}, 6.0, 12.0};
    const GridFunction u = wave(4);
    const double r = chain_rule_check(u, cp).ratio;
    CHECK(std::isfinite(r));
    CHECK(chain_rule_check(scaled(u, 3.0), cp).ratio == doctest::Approx(r).epsilon(1e-10));
  }
}
