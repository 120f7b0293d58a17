#include "bmkit/real_operators.hpp"

#include <algorithm>

namespace bmkit {

namespace {

// Integrals of |f| over boxes with corners in units of 2^-J / 3, via a multilinear prefix table.
class BoxIntegrator {
 public:
  explicit BoxIntegrator(const GridFunction& f) : f_(f) {
    for (int i = 0; i < kMaxDim; ++i) ext_[i] = i < f.dim ? f.shape[i] + 1 : 1;
    table_.assign(static_cast<std::size_t>(ext_[0] * ext_[1] * ext_[2]), 0.0);
    for (std::int64_t z = 0; z < f.shape[2]; ++z)
      for (std::int64_t y = 0; y < f.shape[1]; ++y)
        for (std::int64_t x = 0; x < f.shape[0]; ++x) {
          const Index q{x + (f.dim > 0), y + (f.dim > 1), z + (f.dim > 2)};
          at(q) = std::abs(f.at_rel({x, y, z}));
        }
    for (int ax = 0; ax < f.dim; ++ax)
      for (std::int64_t z = 0; z < ext_[2]; ++z)
        for (std::int64_t y = 0; y < ext_[1]; ++y)
          for (std::int64_t x = 0; x < ext_[0]; ++x) {
            Index q{x, y, z};
            if (q[ax] == 0) continue;
            Index p = q;
            --p[ax];
            at(q) += at(p);
          }
    vol_ = std::pow(f.h(), f.dim);
  }

  // Integral over prod [lo3_i, hi3_i) (thirds of a cell, absolute).
  double integral(const Index& lo3, const Index& hi3) const {
    const int n = f_.dim;
    double total = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      Index u{0, 0, 0};
      int sign = 1;
      for (int i = 0; i < n; ++i) {
        if (mask & (1 << i)) {
          u[i] = hi3[i];
        } else {
          u[i] = lo3[i];
          sign = -sign;
        }
      }
      total += sign * corner(u);
    }
    return total * vol_;
  }

 private:
  double& at(const Index& q) { return table_[static_cast<std::size_t>(q[0] + ext_[0] * (q[1] + ext_[1] * q[2]))]; }
  double get(const Index& q) const { return table_[static_cast<std::size_t>(q[0] + ext_[0] * (q[1] + ext_[1] * q[2]))]; }

  // Cumulative integral up to u, without the cell volume.
  double corner(const Index& u3) const {
    const int n = f_.dim;
    std::array<std::int64_t, kMaxDim> k{0, 0, 0};
    std::array<double, kMaxDim> w{0, 0, 0};
    for (int i = 0; i < n; ++i) {
      const std::int64_t rel3 = u3[i] - 3 * f_.origin[i];
      if (rel3 <= 0) return 0.0;
      if (rel3 >= 3 * f_.shape[i]) {
        k[i] = f_.shape[i];
        w[i] = 0.0;
      } else {
        k[i] = rel3 / 3;
        w[i] = static_cast<double>(rel3 - 3 * k[i]) / 3.0;
      }
    }
    double s = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      double wt = 1.0;
      Index q{0, 0, 0};
      bool skip = false;
      for (int i = 0; i < n; ++i) {
        const bool up = mask & (1 << i);
        wt *= up ? w[i] : 1.0 - w[i];
        q[i] = k[i] + (up ? 1 : 0);
        if (q[i] > f_.shape[i]) skip = true;
      }
      if (skip || wt == 0.0) continue;
      s += wt * get(q);
    }
    return s;
  }

  const GridFunction& f_;
  Index ext_{1, 1, 1};
  std::vector<double> table_;
  double vol_ = 1.0;
};

std::int64_t coarse_limit(const Box& out) {
  std::int64_t K = 1;
  for (int i = 0; i < out.dim; ++i) K = std::max({K, std::abs(out.lo[i]), std::abs(out.hi[i])});
  return K;
}

// Coarsest scale that can still change which part of the support a cube meets.
int coarsest_scale(int J, const Box& out) {
  const std::int64_t K = coarse_limit(out);
  int e = 0;
  while (pow2i(e) < 3 * K) ++e;
  return J - e;
}

GridFunction output_grid(const GridFunction& f, std::int64_t pad) {
  return zeros_like_box(f.dim, f.J, maximal_output_box(f, pad));
}

StepFunction compress(const std::vector<double>& vals, std::int64_t origin) {
  StepFunction g;
  const std::size_t N = vals.size();
  std::size_t a = 0, b = N;
  while (a < N && vals[a] == 0.0) ++a;
  while (b > a && vals[b - 1] == 0.0) --b;
  if (a == b) return g;
  g.s.push_back(static_cast<double>(origin + static_cast<std::int64_t>(a)));
  for (std::size_t k = a; k < b; ++k) {
    if (k > a && vals[k] == vals[k - 1]) continue;
    if (k > a) g.s.push_back(static_cast<double>(origin + static_cast<std::int64_t>(k)));
    g.v.push_back(vals[k]);
  }
  g.s.push_back(static_cast<double>(origin + static_cast<std::int64_t>(b)));
  return g;
}

double step_value_at(const StepFunction& g, double x) {
  if (g.v.empty() || x < g.s.front() || x >= g.s.back()) return 0.0;
  const auto it = std::upper_bound(g.s.begin(), g.s.end(), x);
  return g.v[static_cast<std::size_t>(it - g.s.begin()) - 1];
}

}  // namespace

Box maximal_output_box(const GridFunction& f_in, std::int64_t pad) {
  const GridFunction f = trim(f_in);
  std::int64_t p = pad;
  if (p < 0) {
    p = 1;
    for (int i = 0; i < f.dim; ++i) p = std::max(p, f.shape[i]);
  }
  return pad_box(f.box(), p);
}

GridFunction dyadic_maximal(const GridFunction& f_in, const std::array<int, kMaxDim>& shift, std::int64_t pad) {
  const GridFunction f = trim(f_in);
  GridFunction out = output_grid(f, pad);
  if (f.is_zero()) return out;
  const int n = f.dim, J = f.J;
  const BoxIntegrator integ(f);
  const int jc = coarsest_scale(J, out.box());
  parallel_for(out.size(), [&](std::size_t idx) {
    const Index rel = out.unflat(idx);
    Index abs{0, 0, 0};
    for (int i = 0; i < n; ++i) abs[i] = rel[i] + out.origin[i];
    double best = std::abs(f.at_abs(abs));
    for (int j = J; j >= jc; --j) {
      const std::int64_t s = pow2i(J - j);
      const int sg = grid_sign(j);
      Index lo3{0, 0, 0}, hi3{0, 0, 0};
      for (int i = 0; i < n; ++i) {
        const std::int64_t mid6 = midpoint_units6(abs[i]);
        const std::int64_t m = floor_div(mid6 - 2 * sg * shift[i] * s, 6 * s);
        lo3[i] = (3 * m + sg * shift[i]) * s;
        hi3[i] = lo3[i] + 3 * s;
      }
      const double vol = std::pow(std::ldexp(1.0, -j), n);
      best = std::max(best, integ.integral(lo3, hi3) / vol);
    }
    out.values[idx] = best;
  });
  return out;
}

GridFunction hl_maximal_proxy(const GridFunction& f, std::int64_t pad) {
  const int n = f.dim;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  GridFunction acc;
  for (int code = 0; code < total; ++code) {
    std::array<int, kMaxDim> a{0, 0, 0};
    int c = code;
    for (int i = 0; i < n; ++i) {
      a[i] = c % 3;
      c /= 3;
    }
    GridFunction m = dyadic_maximal(f, a, pad);
    acc = code == 0 ? m : acc + m;
  }
  return acc;
}

double maximal_1d(const StepFunction& g, double xl, double xr) {
  if (g.v.empty()) return 0.0;
  // Candidate endpoints: breakpoints left of xl plus xl, breakpoints right of xr plus xr.
  std::vector<double> A, B;
  for (double s : g.s)
    if (s < xl) A.push_back(s);
  A.push_back(xl);
  B.push_back(xr);
  for (double s : g.s)
    if (s > xr) B.push_back(s);
  std::vector<double> GA(A.size()), GB(B.size());
  {
    // Prefix integrals at the breakpoints; candidates interpolate.
    std::vector<double> P(g.s.size(), 0.0);
    for (std::size_t k = 0; k < g.v.size(); ++k) P[k + 1] = P[k] + g.v[k] * (g.s[k + 1] - g.s[k]);
    auto G = [&](double x) {
      if (x <= g.s.front()) return 0.0;
      if (x >= g.s.back()) return P.back();
      const auto it = std::upper_bound(g.s.begin(), g.s.end(), x);
      const std::size_t k = static_cast<std::size_t>(it - g.s.begin()) - 1;
      return g.s[k] == x ? P[k] : P[k] + g.v[k] * (x - g.s[k]);
    };
    for (std::size_t i = 0; i < A.size(); ++i) GA[i] = G(A[i]);
    for (std::size_t i = 0; i < B.size(); ++i) GB[i] = G(B[i]);
  }
  double lambda;
  if (xl == xr) {
    lambda = std::max(step_value_at(g, xl), step_value_at(g, std::nextafter(xl, -kInf)));
  } else {
    lambda = (GB[0] - GA.back()) / (xr - xl);
  }
  // Dinkelbach iteration on max (G(b) - G(a)) / (b - a).
  for (int it = 0; it < 200; ++it) {
    std::size_t ia = 0, ib = 0;
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < A.size(); ++i) {
      const double v = GA[i] - lambda * A[i];
      if (v < lo) {
        lo = v;
        ia = i;
      }
    }
    for (std::size_t i = 0; i < B.size(); ++i) {
      const double v = GB[i] - lambda * B[i];
      if (v > hi) {
        hi = v;
        ib = i;
      }
    }
    const double len = B[ib] - A[ia];
    if (len <= 0.0) break;
    const double cand = (GB[ib] - GA[ia]) / len;
    if (!(cand > lambda * (1.0 + 1e-15))) break;
    lambda = cand;
  }
  return lambda;
}

namespace {

// One 1-d pass along `axis`: for every line of the input (values on `in`'s box), evaluate the maximal
// function at the cell midpoints (mid) and its cellwise bracket over `out_lo..out_hi` along the axis.
struct PassOut {
  GridFunction mid, lo, hi;
};

PassOut maximal_pass(const GridFunction& mid_in, const GridFunction& lo_in, const GridFunction& hi_in, int axis,
                     std::int64_t out_lo, std::int64_t out_hi) {
  const int n = mid_in.dim;
  Index origin = mid_in.origin, shape = mid_in.shape;
  origin[axis] = out_lo;
  shape[axis] = out_hi - out_lo;
  PassOut r{GridFunction(n, mid_in.J, origin, shape), GridFunction(n, mid_in.J, origin, shape),
            GridFunction(n, mid_in.J, origin, shape)};
  Index lines = mid_in.shape;
  lines[axis] = 1;
  const std::size_t count = static_cast<std::size_t>(lines[0] * lines[1] * lines[2]);
  const std::int64_t len = mid_in.shape[axis];
  parallel_for(count, [&](std::size_t li) {
    Index base{static_cast<std::int64_t>(li) % lines[0], (static_cast<std::int64_t>(li) / lines[0]) % lines[1],
               static_cast<std::int64_t>(li) / (lines[0] * lines[1])};
    auto line = [&](const GridFunction& g) {
      std::vector<double> v(static_cast<std::size_t>(len));
      for (std::int64_t k = 0; k < len; ++k) {
        Index q = base;
        q[axis] = k;
        v[static_cast<std::size_t>(k)] = std::abs(g.at_rel(q));
      }
      return compress(v, mid_in.origin[axis]);
    };
    const StepFunction gm = line(mid_in), gl = line(lo_in), gh = line(hi_in);
    for (std::int64_t k = out_lo; k < out_hi; ++k) {
      Index q = base;
      q[axis] = k - out_lo;
      const double x0 = static_cast<double>(k), x1 = static_cast<double>(k + 1);
      const std::size_t o = r.mid.flat(q);
      r.mid.values[o] = maximal_1d(gm, x0 + 0.5, x0 + 0.5);
      r.lo.values[o] = std::max(step_value_at(gl, x0 + 0.5), maximal_1d(gl, x0, x1));
      r.hi.values[o] = std::max(maximal_1d(gh, x0, x0), maximal_1d(gh, x1, x1));
    }
  });
  return r;
}

}  // namespace

Bracketed iterated_maximal(const GridFunction& f_in, std::int64_t pad) {
  const GridFunction f = trim(f_in);
  require(f.dim <= 2, "iterated maximal supports n <= 2");
  const Box ob = maximal_output_box(f, pad);
  Bracketed res;
  if (f.is_zero()) {
    res.mid = res.lo = res.hi = zeros_like_box(f.dim, f.J, ob);
    return res;
  }
  GridFunction a = abs_of(f);
  GridFunction m = a, l = a, h = a;
  for (int axis = 0; axis < f.dim; ++axis) {
    // Extend the remaining axes to the output box so zero lines are present.
    PassOut p = maximal_pass(m, l, h, axis, ob.lo[axis], ob.hi[axis]);
    m = p.mid;
    l = p.lo;
    h = p.hi;
  }
  res.mid = embed(m, ob);
  res.lo = embed(l, ob);
  res.hi = embed(h, ob);
  return res;
}

GridFunction martingale_maximal(const GridFunction& f_in, std::int64_t pad) {
  const GridFunction f = trim(f_in);
  GridFunction out = output_grid(f, pad);
  if (f.is_zero()) return out;
  const GridFunction a = abs_of(f);
  const int jc = coarsest_scale(f.J, out.box());
  for (std::size_t i = 0; i < out.size(); ++i) {
    Index rel = out.unflat(i), abs{0, 0, 0};
    for (int d = 0; d < f.dim; ++d) abs[d] = rel[d] + out.origin[d];
    out.values[i] = std::abs(a.at_abs(abs));
  }
  for (int k = f.J - 1; k >= jc; --k) {
    const GridFunction e = conditional_expectation(a, k);
    const std::int64_t s = pow2i(f.J - std::max(k, 0));
    for (std::size_t i = 0; i < out.size(); ++i) {
      Index rel = out.unflat(i), q{0, 0, 0};
      for (int d = 0; d < f.dim; ++d) q[d] = floor_div(rel[d] + out.origin[d], s);
      out.values[i] = std::max(out.values[i].real(), std::abs(e.at_abs(q)));
    }
  }
  return out;
}

namespace {

double cell_kernel_1d(double alpha, double d) {
  auto A = [&](double y) { return (y < 0 ? -1.0 : 1.0) * std::pow(std::abs(y), alpha) / alpha; };
  return A(d + 0.5) - A(d - 0.5);
}

// int over [0,a] x [0,a] of |y|^{alpha-2}, via polar coordinates over the two triangles.
double origin_quadrant_2d(double alpha, double a) {
  const Quadrature& q = gauss_legendre01(20);
  const double th = std::atan(1.0);
  double s = 0.0;
  for (std::size_t k = 0; k < q.x.size(); ++k) s += q.w[k] * std::pow(1.0 / std::cos(th * q.x[k]), alpha);
  return 2.0 * std::pow(a, alpha) / alpha * th * s;
}

double rect_gauss_2d(double alpha, double x0, double x1, double y0, double y1, int order) {
  const Quadrature& q = gauss_legendre01(order);
  double s = 0.0;
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    const double x = x0 + (x1 - x0) * q.x[i];
    for (std::size_t j = 0; j < q.x.size(); ++j) {
      const double y = y0 + (y1 - y0) * q.x[j];
      s += q.w[i] * q.w[j] * std::pow(x * x + y * y, 0.5 * (alpha - 2.0));
    }
  }
  return s * (x1 - x0) * (y1 - y0);
}

// Integral of |y|^{alpha-2} over the unit cell centered at offset (d0, d1), in cell units; err gets the
// difference between two quadrature orders.
double cell_kernel_2d(double alpha, std::int64_t d0, std::int64_t d1, double& err) {
  if (d0 == 0 && d1 == 0) {
    err = 0.0;
    return 4.0 * origin_quadrant_2d(alpha, 0.5);
  }
  const std::int64_t r = std::max(std::abs(d0), std::abs(d1));
  const int sub = r <= 2 ? 4 : 1;
  double fine = 0.0, coarse = 0.0;
  for (int a = 0; a < sub; ++a)
    for (int b = 0; b < sub; ++b) {
      const double x0 = static_cast<double>(d0) - 0.5 + static_cast<double>(a) / sub;
      const double y0 = static_cast<double>(d1) - 0.5 + static_cast<double>(b) / sub;
      fine += rect_gauss_2d(alpha, x0, x0 + 1.0 / sub, y0, y0 + 1.0 / sub, 10);
      coarse += rect_gauss_2d(alpha, x0, x0 + 1.0 / sub, y0, y0 + 1.0 / sub, 6);
    }
  err = std::abs(fine - coarse);
  return fine;
}

}  // namespace

FractionalResult fractional_integral(const GridFunction& f_in, double alpha, std::int64_t pad) {
  const GridFunction f = trim(f_in);
  const int n = f.dim;
  require(alpha > 0.0 && alpha < n, "fractional integral requires 0 < alpha < n");
  require(n <= 2, "fractional integral supports n <= 2");
  FractionalResult res;
  res.value = output_grid(f, pad);
  if (f.is_zero()) return res;
  GridFunction& out = res.value;
  const double scale = std::pow(f.h(), alpha);
  Index span{1, 1, 1};
  for (int i = 0; i < n; ++i) span[i] = out.shape[i] + f.shape[i];
  // Kernel table indexed by offset d = x_cell - y_cell + f.shape - 1 + (origin differences).
  Index dmin{0, 0, 0};
  for (int i = 0; i < n; ++i) dmin[i] = out.origin[i] - (f.origin[i] + f.shape[i] - 1);
  std::vector<double> W(static_cast<std::size_t>(span[0] * span[1]));
  std::vector<double> E(W.size(), 0.0);
  parallel_for(W.size(), [&](std::size_t t) {
    const std::int64_t a = static_cast<std::int64_t>(t) % span[0], b = static_cast<std::int64_t>(t) / span[0];
    const std::int64_t d0 = dmin[0] + a, d1 = n > 1 ? dmin[1] + b : 0;
    if (n == 1) {
      W[t] = scale * cell_kernel_1d(alpha, static_cast<double>(d0));
    } else {
      double err = 0.0;
      W[t] = scale * cell_kernel_2d(alpha, d0, d1, err);
      E[t] = scale * err;
    }
  });
  double err_total = 0.0;
  std::vector<double> errs(out.size(), 0.0);
  parallel_for(out.size(), [&](std::size_t o) {
    const Index ro = out.unflat(o);
    std::vector<double> re(f.size()), im(f.size());
    double e = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) {
      const Index rc = f.unflat(c);
      const std::int64_t a = (ro[0] + out.origin[0]) - (rc[0] + f.origin[0]) - dmin[0];
      const std::int64_t b = n > 1 ? (ro[1] + out.origin[1]) - (rc[1] + f.origin[1]) - dmin[1] : 0;
      const std::size_t t = static_cast<std::size_t>(a + span[0] * b);
      const cplx v = f.values[c] * W[t];
      re[c] = v.real();
      im[c] = v.imag();
      e += std::abs(f.values[c]) * E[t];
    }
    out.values[o] = cplx{pairwise_sum(re), pairwise_sum(im)};
    errs[o] = e;
  });
  for (double e : errs) err_total = std::max(err_total, e);
  res.quadrature_error = err_total;
  return res;
}

double fractional_integral_at(const GridFunction& f, double alpha, double x) {
  require(f.dim == 1, "point evaluation supports n = 1");
  require(alpha > 0.0 && alpha < 1.0, "fractional integral requires 0 < alpha < n");
  const double h = f.h();
  auto A = [&](double y) { return (y < 0 ? -1.0 : 1.0) * std::pow(std::abs(y), alpha) / alpha; };
  std::vector<double> t(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double lo = static_cast<double>(f.origin[0] + static_cast<std::int64_t>(c)) * h;
    t[c] = std::real(f.values[c]) * (A(x - lo) - A(x - lo - h));
  }
  return pairwise_sum(t);
}

GridFunction apply_maximal(const GridFunction& f, MaximalKind kind, std::int64_t pad) {
  switch (kind) {
    case MaximalKind::dyadic:
      return dyadic_maximal(f, {0, 0, 0}, pad);
    case MaximalKind::proxy:
      return hl_maximal_proxy(f, pad);
    case MaximalKind::iterated:
      return iterated_maximal(f, pad).mid;
    case MaximalKind::martingale:
      return martingale_maximal(f, pad);
  }
  return f;
}

GridFunction vector_maximal(const std::vector<GridFunction>& fs, double u, MaximalKind kind) {
  require(!fs.empty(), "vector maximal: empty family");
  std::vector<GridFunction> ms(fs.size());
  parallel_for(fs.size(), [&](std::size_t k) { ms[k] = apply_maximal(fs[k], kind); });
  return lu_aggregate(ms, u);
}

GridFunction lu_aggregate(const std::vector<std::vector<GridFunction>>& fs, double u1, double u2) {
  require(!fs.empty(), "vector aggregate: empty family");
  std::vector<GridFunction> inner;
  for (const auto& row : fs) inner.push_back(lu_aggregate(row, u1));
  return lu_aggregate(inner, u2);
}

GridFunction vector_maximal(const std::vector<std::vector<GridFunction>>& fs, double u1, double u2, MaximalKind kind) {
  std::vector<std::vector<GridFunction>> ms(fs.size());
  for (std::size_t a = 0; a < fs.size(); ++a) {
    ms[a].resize(fs[a].size());
    parallel_for(fs[a].size(), [&](std::size_t b) { ms[a][b] = apply_maximal(fs[a][b], kind); });
  }
  return lu_aggregate(ms, u1, u2);
}

}  // namespace bmkit
