#include "bmkit/grid_function.hpp"

#include <algorithm>

namespace bmkit {

GridFunction::GridFunction(int dim_, int J_, Index origin_, Index shape_)
    : dim(dim_), J(J_), origin(origin_), shape(shape_) {
  require(dim >= 1 && dim <= kMaxDim, "dimension must be 1..3");
  require(J >= 0, "resolution J >= 0");
  for (int i = dim; i < kMaxDim; ++i) {
    origin[i] = 0;
    shape[i] = 1;
  }
  std::size_t total = 1;
  for (int i = 0; i < kMaxDim; ++i) {
    require(shape[i] >= 1, "shape entries >= 1");
    total *= static_cast<std::size_t>(shape[i]);
  }
  values.assign(total, cplx{});
}

Index GridFunction::unflat(std::size_t idx) const {
  Index r{0, 0, 0};
  auto i = static_cast<std::int64_t>(idx);
  r[0] = i % shape[0];
  i /= shape[0];
  r[1] = i % shape[1];
  r[2] = i / shape[1];
  return r;
}

bool GridFunction::inside_abs(const Index& k) const {
  for (int i = 0; i < dim; ++i)
    if (k[i] < origin[i] || k[i] >= origin[i] + shape[i]) return false;
  return true;
}

cplx GridFunction::at_abs(const Index& k) const {
  if (!inside_abs(k)) return {};
  Index rel{0, 0, 0};
  for (int i = 0; i < dim; ++i) rel[i] = k[i] - origin[i];
  return at_rel(rel);
}

Box GridFunction::box() const {
  Box b;
  b.dim = dim;
  b.scale = J;
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = origin[i];
    b.hi[i] = origin[i] + shape[i];
  }
  return b;
}

bool GridFunction::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](const cplx& v) { return v == cplx{}; });
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

GridFunction zeros_like_box(int dim, int J, const Box& box) {
  Box b = box_at(box, J);
  Index shape{1, 1, 1};
  for (int i = 0; i < dim; ++i) shape[i] = b.hi[i] - b.lo[i];
  return GridFunction(dim, J, b.lo, shape);
}

Box box_at(const Box& b, int J) {
  require(J >= b.scale, "box_at: target resolution must be finer");
  Box r = b;
  r.scale = J;
  for (int i = 0; i < b.dim; ++i) {
    r.lo[i] = b.lo[i] * pow2i(J - b.scale);
    r.hi[i] = b.hi[i] * pow2i(J - b.scale);
  }
  return r;
}

Box box_union(const Box& a, const Box& b) {
  const int J = std::max(a.scale, b.scale);
  Box x = box_at(a, J), y = box_at(b, J);
  for (int i = 0; i < a.dim; ++i) {
    x.lo[i] = std::min(x.lo[i], y.lo[i]);
    x.hi[i] = std::max(x.hi[i], y.hi[i]);
  }
  return x;
}

Box pad_box(const Box& b, std::int64_t pad) {
  Box r = b;
  for (int i = 0; i < b.dim; ++i) {
    r.lo[i] -= pad;
    r.hi[i] += pad;
  }
  return r;
}

GridFunction indicator(const DyadicCube& q, int J) {
  require(!q.shifted(), "cube not resolvable");
  require(q.scale <= J, "cube not resolvable");
  Index origin{0, 0, 0}, shape{1, 1, 1};
  for (int i = 0; i < q.dim; ++i) {
    origin[i] = q.pos[i] * pow2i(J - q.scale);
    shape[i] = pow2i(J - q.scale);
  }
  GridFunction f(q.dim, J, origin, shape);
  std::fill(f.values.begin(), f.values.end(), cplx{1.0, 0.0});
  return f;
}

GridFunction refine(const GridFunction& f, int J) {
  require(J >= f.J, "refine: target resolution must be finer");
  if (J == f.J) return f;
  const std::int64_t r = pow2i(J - f.J);
  Index origin{0, 0, 0}, shape{1, 1, 1};
  for (int i = 0; i < f.dim; ++i) {
    origin[i] = f.origin[i] * r;
    shape[i] = f.shape[i] * r;
  }
  GridFunction g(f.dim, J, origin, shape);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    Index rel = g.unflat(idx), src{0, 0, 0};
    for (int i = 0; i < f.dim; ++i) src[i] = rel[i] / r;
    g.values[idx] = f.at_rel(src);
  }
  return g;
}

GridFunction embed(const GridFunction& f, const Box& box) {
  Box b = box_at(box, f.J);
  GridFunction g = zeros_like_box(f.dim, f.J, b);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    if (f.values[idx] == cplx{}) continue;
    Index rel = f.unflat(idx), abs{0, 0, 0}, grel{0, 0, 0};
    for (int i = 0; i < f.dim; ++i) {
      abs[i] = rel[i] + f.origin[i];
      grel[i] = abs[i] - g.origin[i];
    }
    require(g.inside_abs(abs), "embed: target box does not contain the support");
    g.at_rel(grel) = f.values[idx];
  }
  return g;
}

GridFunction trim(const GridFunction& f) {
  Index lo{0, 0, 0}, hi{0, 0, 0};
  bool any = false;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    if (f.values[idx] == cplx{}) continue;
    Index rel = f.unflat(idx);
    for (int i = 0; i < f.dim; ++i) {
      if (!any) {
        lo[i] = rel[i];
        hi[i] = rel[i] + 1;
      } else {
        lo[i] = std::min(lo[i], rel[i]);
        hi[i] = std::max(hi[i], rel[i] + 1);
      }
    }
    any = true;
  }
  if (!any) return f;
  Index origin{0, 0, 0}, shape{1, 1, 1};
  for (int i = 0; i < f.dim; ++i) {
    origin[i] = f.origin[i] + lo[i];
    shape[i] = hi[i] - lo[i];
  }
  GridFunction g(f.dim, f.J, origin, shape);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    Index rel = g.unflat(idx);
    for (int i = 0; i < f.dim; ++i) rel[i] += lo[i];
    g.values[idx] = f.at_rel(rel);
  }
  return g;
}

std::pair<GridFunction, GridFunction> align(const GridFunction& a, const GridFunction& b) {
  require(a.dim == b.dim, "align: dimension mismatch");
  const int J = std::max(a.J, b.J);
  Box u = box_union(a.box(), b.box());
  return {embed(refine(a, J), u), embed(refine(b, J), u)};
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  auto [x, y] = align(a, b);
  for (std::size_t i = 0; i < x.size(); ++i) x.values[i] += y.values[i];
  return x;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  auto [x, y] = align(a, b);
  for (std::size_t i = 0; i < x.size(); ++i) x.values[i] -= y.values[i];
  return x;
}

GridFunction scaled(const GridFunction& f, cplx c) {
  GridFunction g = f;
  for (auto& v : g.values) v *= c;
  return g;
}

GridFunction abs_of(const GridFunction& f) {
  return map_values(f, [](cplx v) { return cplx{std::abs(v), 0.0}; });
}

GridFunction map_values(const GridFunction& f, const std::function<cplx(cplx)>& op) {
  GridFunction g = f;
  for (auto& v : g.values) v = op(v);
  return g;
}

GridFunction restrict_to(const GridFunction& f, const DyadicCube& q) {
  require(!q.shifted(), "cube not resolvable");
  require(q.dim == f.dim, "restrict: dimension mismatch");
  GridFunction src = q.scale > f.J ? refine(f, q.scale) : f;
  GridFunction out = indicator(q, src.J);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    Index rel = out.unflat(idx), abs{0, 0, 0};
    for (int i = 0; i < f.dim; ++i) abs[i] = rel[i] + out.origin[i];
    out.values[idx] = src.at_abs(abs);
  }
  return out;
}

GridFunction dilate_dyadic(const GridFunction& f, int m) {
  GridFunction g = f;
  const int target = f.J + m;
  if (target >= 0) {
    g.J = target;
    return g;
  }
  GridFunction lifted = refine(f, f.J - target);
  lifted.J = 0;
  return lifted;
}

GridFunction translate_lattice(const GridFunction& f, const Index& k, int scale) {
  require(scale <= f.J, "translate_lattice: shift scale must not exceed J");
  GridFunction g = f;
  for (int i = 0; i < f.dim; ++i) g.origin[i] += k[i] * pow2i(f.J - scale);
  return g;
}

GridFunction conditional_expectation(const GridFunction& f, int k) {
  require(k <= f.J, "conditional_expectation: k must not exceed J");
  const std::int64_t r = pow2i(f.J - k);
  Box cubes;
  cubes.dim = f.dim;
  cubes.scale = k;
  for (int i = 0; i < f.dim; ++i) {
    cubes.lo[i] = floor_div(f.origin[i], r);
    cubes.hi[i] = floor_div(f.origin[i] + f.shape[i] - 1, r) + 1;
  }
  Index shape{1, 1, 1};
  for (int i = 0; i < f.dim; ++i) shape[i] = cubes.hi[i] - cubes.lo[i];
  std::vector<std::vector<double>> re(static_cast<std::size_t>(shape[0] * shape[1] * shape[2]));
  std::vector<std::vector<double>> im(re.size());
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    Index rel = f.unflat(idx), c{0, 0, 0};
    for (int i = 0; i < f.dim; ++i) c[i] = floor_div(rel[i] + f.origin[i], r) - cubes.lo[i];
    const auto ci = static_cast<std::size_t>(c[0] + shape[0] * (c[1] + shape[1] * c[2]));
    re[ci].push_back(f.values[idx].real());
    im[ci].push_back(f.values[idx].imag());
  }
  const double vol = std::pow(static_cast<double>(r), f.dim);
  GridFunction coarse;
  coarse.dim = f.dim;
  coarse.J = std::max(k, 0);
  const int lift = std::max(0, -k);
  for (int i = 0; i < kMaxDim; ++i) {
    coarse.origin[i] = i < f.dim ? cubes.lo[i] * pow2i(lift) : 0;
    coarse.shape[i] = i < f.dim ? shape[i] * pow2i(lift) : 1;
  }
  coarse.values.assign(static_cast<std::size_t>(coarse.shape[0] * coarse.shape[1] * coarse.shape[2]), cplx{});
  for (std::size_t idx = 0; idx < coarse.size(); ++idx) {
    Index rel = coarse.unflat(idx), c{0, 0, 0};
    for (int i = 0; i < f.dim; ++i) c[i] = rel[i] >> lift;
    const auto ci = static_cast<std::size_t>(c[0] + shape[0] * (c[1] + shape[1] * c[2]));
    coarse.values[idx] = cplx{pairwise_sum(re[ci]) / vol, pairwise_sum(im[ci]) / vol};
  }
  return coarse;
}

}  // namespace bmkit
