#include "bmkit/dyadic.hpp"

#include <algorithm>

namespace bmkit {

std::int64_t lower_units(const DyadicCube& c, int axis, int L) {
  require(L >= c.scale, "unit resolution finer than cube scale");
  return (3 * c.pos[axis] + grid_sign(c.scale) * c.shift[axis]) * pow2i(L - c.scale);
}

DyadicCube parent(const DyadicCube& c, int k) {
  require(k >= 0, "parent: k >= 0");
  DyadicCube p = c;
  for (int step = 0; step < k; ++step) {
    const int s = grid_sign(p.scale);
    for (int i = 0; i < p.dim; ++i) p.pos[i] = floor_div(p.pos[i] + s * p.shift[i], 2);
    --p.scale;
  }
  return p;
}

std::vector<DyadicCube> children(const DyadicCube& c) {
  std::vector<DyadicCube> out;
  const int s = grid_sign(c.scale);
  const int count = 1 << c.dim;
  for (int mask = 0; mask < count; ++mask) {
    DyadicCube ch = c;
    ch.scale = c.scale + 1;
    for (int i = 0; i < c.dim; ++i) ch.pos[i] = 2 * c.pos[i] + s * c.shift[i] + ((mask >> i) & 1);
    out.push_back(ch);
  }
  std::sort(out.begin(), out.end(), [&](const DyadicCube& a, const DyadicCube& b) {
    for (int i = c.dim - 1; i >= 0; --i)
      if (a.pos[i] != b.pos[i]) return a.pos[i] < b.pos[i];
    return false;
  });
  return out;
}

bool contains(const DyadicCube& outer, const DyadicCube& inner) {
  if (inner.scale < outer.scale) return false;
  const int L = inner.scale;
  for (int i = 0; i < outer.dim; ++i) {
    const auto lo = lower_units(outer, i, L), hi = lo + side_units(outer, L);
    const auto ilo = lower_units(inner, i, L), ihi = ilo + side_units(inner, L);
    if (ilo < lo || ihi > hi) return false;
  }
  return true;
}

namespace {

// Compares a/b with c/d for positive b, d.
int cmp_frac(__int128 a, __int128 b, __int128 c, __int128 d) {
  const __int128 l = a * d, r = c * b;
  return (l < r) ? -1 : (l > r ? 1 : 0);
}

// Interval [lo, lo + side) of grid `shift` at `scale` along one axis, as a fraction over `den`.
struct Frac {
  __int128 num, den;
};

Frac cube_lower(int scale, std::int64_t pos, int shift) {
  const __int128 u = 3 * static_cast<__int128>(pos) + grid_sign(scale) * shift;
  if (scale >= 0) return {u, 3 * (static_cast<__int128>(1) << scale)};
  return {u * (static_cast<__int128>(1) << (-scale)), 3};
}

}  // namespace

bool contains(const DyadicCube& outer, const RationalCube& q) {
  for (int i = 0; i < outer.dim; ++i) {
    Frac lo = cube_lower(outer.scale, outer.pos[i], outer.shift[i]);
    Frac hi = cube_lower(outer.scale, outer.pos[i] + 1, outer.shift[i]);
    if (cmp_frac(q.corner_num[i], q.den, lo.num, lo.den) < 0) return false;
    if (cmp_frac(q.corner_num[i] + q.side_num, q.den, hi.num, hi.den) > 0) return false;
  }
  return true;
}

DyadicCube cover_by_shifted(const RationalCube& q) {
  require(q.side_num > 0 && q.den > 0, "cover_by_shifted: positive side");
  require(q.dim >= 1 && q.dim <= kMaxDim, "cover_by_shifted: dimension 1..3");
  // Sign of 2^-j - side.
  auto cmp_side = [&](int j) {
    if (j >= 0) return cmp_frac(1, static_cast<__int128>(1) << j, q.side_num, q.den);
    return cmp_frac(static_cast<__int128>(1) << (-j), 1, q.side_num, q.den);
  };
  // Finest scale whose side is at least the side of q.
  int j = 0;
  while (cmp_side(j) < 0) --j;
  while (cmp_side(j + 1) >= 0) ++j;
  for (int scale = j; scale > j - 8; --scale) {
    DyadicCube c;
    c.dim = q.dim;
    c.scale = scale;
    bool ok = true;
    for (int i = 0; i < q.dim && ok; ++i) {
      bool found = false;
      for (int a = 0; a < 3 && !found; ++a) {
        // m = floor((3 * 2^scale * x - sigma a) / 3)
        const __int128 x = q.corner_num[i];
        __int128 num, den;
        if (scale >= 0) {
          num = 3 * x * (static_cast<__int128>(1) << scale) - grid_sign(scale) * a * static_cast<__int128>(q.den);
          den = 3 * static_cast<__int128>(q.den);
        } else {
          num = 3 * x - grid_sign(scale) * a * static_cast<__int128>(q.den) * (static_cast<__int128>(1) << (-scale));
          den = 3 * static_cast<__int128>(q.den) * (static_cast<__int128>(1) << (-scale));
        }
        __int128 m = num / den;
        if ((num % den != 0) && (num < 0)) --m;
        DyadicCube probe = c;
        probe.pos[i] = static_cast<std::int64_t>(m);
        probe.shift[i] = a;
        Frac hi = cube_lower(scale, probe.pos[i] + 1, a);
        if (cmp_frac(q.corner_num[i] + q.side_num, q.den, hi.num, hi.den) <= 0) {
          c.pos[i] = probe.pos[i];
          c.shift[i] = a;
          found = true;
        }
      }
      ok = found;
    }
    if (ok) return c;
  }
  throw PreconditionError("cover_by_shifted: no covering cube found");
}

std::pair<std::int64_t, std::int64_t> position_range(int scale, int shift, int L, std::int64_t lo, std::int64_t hi) {
  // Cube m spans [(3m + s a) 2^(L-j), (3m + s a + 3) 2^(L-j)).
  const std::int64_t w = pow2i(L - scale);
  const std::int64_t off = grid_sign(scale) * shift;
  // need (3m + off + 3) w > lo  and (3m + off) w < hi
  const std::int64_t mmin = floor_div(floor_div(lo, w) - off - 3, 3) ;
  const std::int64_t mmax = floor_div(floor_div(hi - 1, w) - off, 3) + 1;
  std::int64_t a = mmin, b = mmax;
  while ((3 * a + off + 3) * w <= lo) ++a;
  while ((3 * b + off) * w >= hi) --b;
  return {a, b};
}

std::vector<DyadicCube> enumerate(const CubeRange& range) {
  const int n = range.box.dim;
  require(n >= 1 && n <= kMaxDim, "enumerate: dimension 1..3");
  std::vector<DyadicCube> out;
  for (int j = range.jmin; j <= range.jmax; ++j) {
    const int L = std::max(j, range.box.scale);
    std::array<std::pair<std::int64_t, std::int64_t>, kMaxDim> pr{};
    for (int i = 0; i < n; ++i) {
      const std::int64_t lo = 3 * range.box.lo[i] * pow2i(L - range.box.scale);
      const std::int64_t hi = 3 * range.box.hi[i] * pow2i(L - range.box.scale);
      pr[i] = position_range(j, range.shift[i], L, lo, hi);
      if (pr[i].first > pr[i].second) goto next_scale;
    }
    {
      DyadicCube c;
      c.dim = n;
      c.scale = j;
      c.shift = range.shift;
      Index m{};
      for (int i = 0; i < n; ++i) m[i] = pr[i].first;
      for (;;) {
        c.pos = m;
        out.push_back(c);
        int i = 0;
        for (; i < n; ++i) {
          if (++m[i] <= pr[i].second) break;
          m[i] = pr[i].first;
        }
        if (i == n) break;
      }
    }
  next_scale:;
  }
  return out;
}

}  // namespace bmkit
