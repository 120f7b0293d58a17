#include "bmkit/mixed_lebesgue.hpp"

#include <algorithm>

namespace bmkit {

double sum_recip(const ExponentVector& p) {
  double s = 0.0;
  for (double v : p) s += recip(v);
  return s;
}

ExponentVector conjugate(const ExponentVector& p) {
  ExponentVector q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = conjugate(p[i]);
  return q;
}

void check_exponents(const ExponentVector& p, int dim) {
  require(static_cast<int>(p.size()) == dim, "exponent vector length must equal the dimension");
  for (double v : p) require(v > 0.0, "exponents must lie in (0, inf]");
}

std::array<AxisOverlap, kMaxDim> cube_overlaps(const GridFunction& f, const DyadicCube& c) {
  std::array<AxisOverlap, kMaxDim> out;
  const int L = std::max(f.J, c.scale);
  const std::int64_t cell = 3 * pow2i(L - f.J);
  const std::int64_t side = side_units(c, L);
  for (int i = 0; i < f.dim; ++i) {
    const std::int64_t lo = lower_units(c, i, L), hi = lo + side;
    std::int64_t k0 = std::max(floor_div(lo, cell), f.origin[i]);
    std::int64_t k1 = std::min(floor_div(hi - 1, cell), f.origin[i] + f.shape[i] - 1);
    for (std::int64_t k = k0; k <= k1; ++k) {
      const std::int64_t a = std::max(lo, k * cell), b = std::min(hi, (k + 1) * cell);
      if (b <= a) continue;
      out[i].rel.push_back(k - f.origin[i]);
      out[i].frac.push_back(static_cast<double>(b - a) / static_cast<double>(side));
    }
  }
  return out;
}

double iterated_mean(std::vector<double> v, const Index& dims_in, const std::array<std::vector<double>, kMaxDim>& weights,
                     const ExponentVector& p, int dim) {
  double M = 0.0;
  for (double x : v) M = std::max(M, x);
  if (M == 0.0) return 0.0;
  if (std::isinf(M)) return kInf;
  for (double& x : v) x /= M;
  Index dims = dims_in;
  for (int ax = 0; ax < dim; ++ax) {
    const std::int64_t d = dims[ax];
    std::int64_t outer = 1;
    for (int b = ax + 1; b < dim; ++b) outer *= dims[b];
    std::vector<double> next(static_cast<std::size_t>(outer));
    std::vector<double> terms(static_cast<std::size_t>(d));
    const double pe = p[ax];
    for (std::int64_t o = 0; o < outer; ++o) {
      const double* row = v.data() + o * d;
      if (std::isinf(pe)) {
        double m = 0.0;
        for (std::int64_t k = 0; k < d; ++k)
          if (weights[ax][k] > 0.0) m = std::max(m, row[k]);
        next[o] = m;
      } else {
        for (std::int64_t k = 0; k < d; ++k) terms[k] = row[k] == 0.0 ? 0.0 : weights[ax][k] * std::pow(row[k], pe);
        const double s = pairwise_sum(terms);
        next[o] = s == 0.0 ? 0.0 : std::pow(s, 1.0 / pe);
      }
    }
    v.swap(next);
    dims[ax] = 1;
  }
  return M * v[0];
}

namespace {

double block_mean(const GridFunction& f, const std::array<AxisOverlap, kMaxDim>& ov, const ExponentVector& p) {
  Index dims{1, 1, 1};
  std::array<std::vector<double>, kMaxDim> w;
  for (int i = 0; i < f.dim; ++i) {
    if (ov[i].rel.empty()) return 0.0;
    dims[i] = static_cast<std::int64_t>(ov[i].rel.size());
    w[i] = ov[i].frac;
  }
  for (int i = f.dim; i < kMaxDim; ++i) w[i] = {1.0};
  std::vector<double> vals(static_cast<std::size_t>(dims[0] * dims[1] * dims[2]));
  std::size_t t = 0;
  for (std::int64_t c = 0; c < dims[2]; ++c)
    for (std::int64_t b = 0; b < dims[1]; ++b)
      for (std::int64_t a = 0; a < dims[0]; ++a) {
        Index rel{ov[0].rel[a], f.dim > 1 ? ov[1].rel[b] : 0, f.dim > 2 ? ov[2].rel[c] : 0};
        vals[t++] = std::abs(f.at_rel(rel));
      }
  return iterated_mean(std::move(vals), dims, w, p, f.dim);
}

}  // namespace

double normalized_local_norm(const GridFunction& f, const ExponentVector& p, const DyadicCube& q) {
  check_exponents(p, f.dim);
  require(q.dim == f.dim, "cube dimension mismatch");
  return block_mean(f, cube_overlaps(f, q), p);
}

double mixed_norm(const GridFunction& f, const ExponentVector& p) {
  check_exponents(p, f.dim);
  std::array<std::vector<double>, kMaxDim> w;
  for (int i = 0; i < kMaxDim; ++i) w[i].assign(static_cast<std::size_t>(f.shape[i]), i < f.dim ? f.h() : 1.0);
  std::vector<double> vals(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) vals[i] = std::abs(f.values[i]);
  return iterated_mean(std::move(vals), f.shape, w, p, f.dim);
}

double mixed_norm_on_cube(const GridFunction& f, const ExponentVector& p, const DyadicCube& q) {
  return normalized_local_norm(f, p, q) * std::exp2(-q.scale * sum_recip(p));
}

InequalityResult holder_check(const GridFunction& f, const GridFunction& g, const ExponentVector& p) {
  auto [a, b] = align(f, g);
  GridFunction prod = a;
  for (std::size_t i = 0; i < prod.size(); ++i) prod.values[i] = a.values[i] * b.values[i];
  InequalityResult r;
  r.lhs = mixed_norm(prod, ExponentVector(f.dim, 1.0));
  r.rhs = mixed_norm(a, p) * mixed_norm(b, conjugate(p));
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

GridFunction convolve_projected(const GridFunction& f_in, const GridFunction& g_in, int kappa) {
  require(f_in.dim == g_in.dim, "convolution: dimension mismatch");
  const int J = std::max(f_in.J, g_in.J);
  const GridFunction f = refine(f_in, J), g = refine(g_in, J);
  const int n = f.dim;
  // Discrete convolution of cell values; f * g = sum_c d_c T(x - c h) with T the tensor tent.
  Index dshape{1, 1, 1}, dorigin{0, 0, 0};
  for (int i = 0; i < n; ++i) {
    dshape[i] = f.shape[i] + g.shape[i] - 1;
    dorigin[i] = f.origin[i] + g.origin[i];
  }
  std::vector<cplx> d(static_cast<std::size_t>(dshape[0] * dshape[1] * dshape[2]));
  for (std::size_t a = 0; a < f.size(); ++a) {
    if (f.values[a] == cplx{}) continue;
    Index ra = f.unflat(a);
    for (std::size_t b = 0; b < g.size(); ++b) {
      Index rb = g.unflat(b);
      const auto idx = static_cast<std::size_t>((ra[0] + rb[0]) + dshape[0] * ((ra[1] + rb[1]) + dshape[1] * (ra[2] + rb[2])));
      d[idx] += f.values[a] * g.values[b];
    }
  }
  const std::int64_t K = pow2i(kappa);
  const double h = f.h();
  std::vector<double> tent(static_cast<std::size_t>(2 * K));
  for (std::int64_t u = 0; u < 2 * K; ++u)
    tent[u] = h * (2.0 * static_cast<double>(std::min(u, 2 * K - 1 - u)) + 1.0) / (2.0 * static_cast<double>(K));
  Index oshape{1, 1, 1}, oorigin{0, 0, 0};
  for (int i = 0; i < n; ++i) {
    oshape[i] = (dshape[i] + 1) * K;
    oorigin[i] = dorigin[i] * K;
  }
  GridFunction out(n, J + kappa, oorigin, oshape);
  const std::int64_t span = 2 * K;
  const std::int64_t u1max = n > 1 ? span : 1, u2max = n > 2 ? span : 1;
  for (std::size_t c = 0; c < d.size(); ++c) {
    if (d[c] == cplx{}) continue;
    Index rc{static_cast<std::int64_t>(c) % dshape[0], (static_cast<std::int64_t>(c) / dshape[0]) % dshape[1],
             static_cast<std::int64_t>(c) / (dshape[0] * dshape[1])};
    for (std::int64_t u2 = 0; u2 < u2max; ++u2)
      for (std::int64_t u1 = 0; u1 < u1max; ++u1)
        for (std::int64_t u0 = 0; u0 < span; ++u0) {
          double w = tent[u0];
          if (n > 1) w *= tent[u1];
          if (n > 2) w *= tent[u2];
          Index ro{rc[0] * K + u0, n > 1 ? rc[1] * K + u1 : 0, n > 2 ? rc[2] * K + u2 : 0};
          out.at_rel(ro) += d[c] * w;
        }
  }
  return out;
}

InequalityResult young_check(const GridFunction& f, const GridFunction& g, const ExponentVector& p, const ExponentVector& q,
                             int kappa) {
  check_exponents(p, f.dim);
  check_exponents(q, f.dim);
  ExponentVector s(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double inv = recip(p[i]) + recip(q[i]) - 1.0;
    require(inv >= -1e-15, "young_check: 1/p + 1/q >= 1 required");
    s[i] = inv <= 0.0 ? kInf : 1.0 / inv;
  }
  InequalityResult r;
  const GridFunction c = convolve_projected(f, g, kappa);
  r.lhs = mixed_norm(c, s);
  r.rhs = mixed_norm(f, p) * mixed_norm(g, q);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  const double finer = mixed_norm(convolve_projected(f, g, kappa + 1), s);
  r.tolerance = r.rhs > 0.0 ? std::abs(finer - r.lhs) / r.rhs : 0.0;
  return r;
}

cplx pairing(const GridFunction& f, const GridFunction& g) {
  auto [a, b] = align(f, g);
  std::vector<double> re(a.size()), im(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx v = a.values[i] * b.values[i];
    re[i] = v.real();
    im[i] = v.imag();
  }
  const double vol = std::pow(a.h(), a.dim);
  return cplx{pairwise_sum(re) * vol, pairwise_sum(im) * vol};
}

}  // namespace bmkit
