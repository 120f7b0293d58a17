#include <doctest.h>

#include "bmkit/corpus.hpp"
#include "bmkit/dyadic.hpp"

using namespace bmkit;

TEST_SUITE("dyadic") {
  TEST_CASE("parent and children") {
    DyadicCube q;
    q.dim = 2;
    q.scale = 3;
    q.pos = {5, 2, 0};
    const auto kids = children(q);
    CHECK(kids.size() == 4);
    for (const auto& k : kids) {
      CHECK(parent(k) == q);
      CHECK(contains(q, k));
    }
  }

  TEST_CASE("shifted grids are nested") {
    for (int a : {1, 2}) {
      DyadicCube q;
      q.scale = 4;
      q.pos = {7, 0, 0};
      q.shift = {a, 0, 0};
      for (int k = 1; k <= 3; ++k) CHECK(contains(parent(q, k), q));
    }
  }

  TEST_CASE("covering by shifted cubes") {
    auto g = make_stream(11, 0, 0);
    for (int trial = 0; trial < 500; ++trial) {
      RationalCube r;
      r.dim = 2;
      r.den = 64;
      r.side_num = uniform_int(g, 1, 40);
      r.corner_num = {uniform_int(g, -200, 200), uniform_int(g, -200, 200), 0};
      const DyadicCube c = cover_by_shifted(r);
      CHECK(contains(c, r));
      const double side = std::ldexp(1.0, -c.scale);
      CHECK(side <= 6.0 * static_cast<double>(r.side_num) / static_cast<double>(r.den));
    }
  }

  TEST_CASE("enumeration covers the box") {
    CubeRange cr;
    cr.jmin = 0;
    cr.jmax = 2;
    cr.box.dim = 1;
    cr.box.scale = 2;
    cr.box.lo = {0, 0, 0};
    cr.box.hi = {4, 1, 1};
    const auto cubes = enumerate(cr);
    CHECK(cubes.size() == 1 + 2 + 4);
  }
}
