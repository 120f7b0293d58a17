#include "bmkit/bourgain_morrey.hpp"

#include <algorithm>

namespace bmkit {

namespace {

constexpr double kClassifyTol = 1e-13;

void validate(const GridFunction& f, const SpaceParams& sp) {
  check_exponents(sp.p, f.dim);
  require(sp.t > 0.0 && sp.r > 0.0, "t and r must be positive");
  require(sp.dim() * recip(sp.t) <= sum_recip(sp.p) + kClassifyTol, "inadmissible parameters: sum 1/p_i >= n/t required");
}

// Closed-form sum of 2^(k g) over k >= k0 with step `step`.
double geometric(double g, int k0, int step) { return std::exp2(k0 * g) / (1.0 - std::exp2(step * g)); }

struct FineType {
  std::int64_t c0 = 0;  // relative index of the first cell
  int ncell = 1;
  double w0 = 1.0, w1 = 0.0;
  int alpha = 1, beta = 0;  // count polynomial alpha 2^k + beta
};

}  // namespace

bool SpaceParams::nontrivial() const {
  const double crit = dim() / sum_recip(p);
  if (std::isinf(r)) return crit <= t && !std::isinf(t);
  return crit < t && t < r;
}

std::string to_string(Divergence d) {
  switch (d) {
    case Divergence::none: return "none";
    case Divergence::coarse_tail: return "coarse-tail";
    case Divergence::fine_tail: return "fine-tail";
    case Divergence::both: return "both";
  }
  return "none";
}

NormBreakdown bm_norm(const GridFunction& f, const SpaceParams& sp) { return bm_norm_shifted(f, sp, {0, 0, 0}); }

double bm_value(const GridFunction& f, const SpaceParams& sp) { return bm_norm(f, sp).total; }

NormBreakdown bm_norm_shifted(const GridFunction& f_in, const SpaceParams& sp, const std::array<int, kMaxDim>& shift) {
  validate(f_in, sp);
  for (int i = 0; i < f_in.dim; ++i) require(shift[i] >= 0 && shift[i] <= 2, "grid shift entries must be 0, 1 or 2");
  NormBreakdown out;
  const GridFunction f = trim(f_in);
  const int n = f.dim, J = f.J;
  out.jmin = out.jmax = J;
  if (f.is_zero()) return out;
  const double r = sp.r;
  const bool rinf = std::isinf(r);
  const double wexp = n * recip(sp.t);
  const double delta = sp.delta();

  bool shifted_any = false;
  for (int i = 0; i < n; ++i) shifted_any = shifted_any || shift[i] != 0;

  // Below scale jc every nonzero cube sees the same restriction of f.
  std::int64_t K = 1;
  for (int i = 0; i < n; ++i) K = std::max({K, std::abs(f.origin[i]), std::abs(f.origin[i] + f.shape[i])});
  int jc = J;
  while (3 * K > pow2i(J - jc)) --jc;
  out.jmin = jc;

  std::vector<std::vector<double>> a(static_cast<std::size_t>(J - jc + 1));
  double M = 0.0;
  for (int j = jc; j <= J; ++j) {
    std::array<std::pair<std::int64_t, std::int64_t>, kMaxDim> pr{};
    for (int i = 0; i < kMaxDim; ++i) pr[i] = {0, 0};
    for (int i = 0; i < n; ++i) pr[i] = position_range(j, shift[i], J, 3 * f.origin[i], 3 * (f.origin[i] + f.shape[i]));
    const double wj = std::exp2(-j * wexp);
    auto& terms = a[static_cast<std::size_t>(j - jc)];
    DyadicCube c;
    c.dim = n;
    c.scale = j;
    c.shift = shift;
    for (std::int64_t m2 = pr[2].first; m2 <= pr[2].second; ++m2)
      for (std::int64_t m1 = pr[1].first; m1 <= pr[1].second; ++m1)
        for (std::int64_t m0 = pr[0].first; m0 <= pr[0].second; ++m0) {
          c.pos = {m0, m1, m2};
          const double v = wj * normalized_local_norm(f, sp.p, c);
          if (v > 0.0) {
            terms.push_back(v);
            M = std::max(M, v);
          }
        }
  }

  bool coarse_div = rinf ? delta > kClassifyTol : delta >= -kClassifyTol;
  bool fine_div = !rinf && (std::isinf(sp.t) || r <= sp.t * (1.0 + kClassifyTol));
  if (coarse_div && fine_div) out.divergence = Divergence::both;
  else if (coarse_div) out.divergence = Divergence::coarse_tail;
  else if (fine_div) out.divergence = Divergence::fine_tail;

  // Coarse tail.
  const auto& base = a.front();
  double coarse_norm = 0.0;  // normalized by M^r for r < inf
  if (coarse_div) {
    coarse_norm = kInf;
  } else if (rinf) {
    double mb = 0.0;
    for (double v : base) mb = std::max(mb, v);
    coarse_norm = delta < -kClassifyTol ? mb * std::exp2(n * delta) : mb;
  } else {
    const double theta_r = std::pow(std::exp2(n * delta), r);
    std::vector<double> tt;
    for (double v : base) tt.push_back(std::pow(v / M, r));
    coarse_norm = pairwise_sum(tt) * (theta_r / (1.0 - theta_r));
  }

  // Fine tail: per-axis cell and boundary types; the pattern of straddling cubes repeats with the parity of the scale.
  double fine_norm = 0.0;
  if (fine_div) {
    fine_norm = kInf;
  } else {
    const double rt = rinf ? 0.0 : r * recip(sp.t);
    std::vector<double> tt;
    double fine_sup = 0.0;
    const int classes = shifted_any ? 2 : 1;
    for (int cls = 0; cls < classes; ++cls) {
      const int k0 = cls + 1;
      const int jpar = J + k0;
      std::array<std::vector<FineType>, kMaxDim> types;
      for (int i = 0; i < kMaxDim; ++i) {
        if (i >= n) {
          types[i].push_back(FineType{0, 1, 1.0, 0.0, 0, 1});
          continue;
        }
        for (std::int64_t c = 0; c < f.shape[i]; ++c)
          types[i].push_back(FineType{c, 1, 1.0, 0.0, 1, shift[i] == 0 ? 0 : -1});
        if (shift[i] != 0) {
          const int sa = ((grid_sign(jpar) * shift[i]) % 3 + 3) % 3;
          const double below = sa == 1 ? 2.0 / 3.0 : 1.0 / 3.0;
          for (std::int64_t c = 0; c <= f.shape[i]; ++c)
            types[i].push_back(FineType{c - 1, 2, below, 1.0 - below, 0, 1});
        }
      }
      for (const auto& t2 : types[2])
        for (const auto& t1 : types[1])
          for (const auto& t0 : types[0]) {
            const FineType* ts[kMaxDim] = {&t0, &t1, &t2};
            Index dims{1, 1, 1};
            std::array<std::vector<double>, kMaxDim> w;
            for (int i = 0; i < kMaxDim; ++i) {
              dims[i] = ts[i]->ncell;
              w[i] = ts[i]->ncell == 1 ? std::vector<double>{ts[i]->w0} : std::vector<double>{ts[i]->w0, ts[i]->w1};
            }
            std::vector<double> vals(static_cast<std::size_t>(dims[0] * dims[1] * dims[2]));
            std::size_t q = 0;
            bool any = false;
            for (std::int64_t z = 0; z < dims[2]; ++z)
              for (std::int64_t y = 0; y < dims[1]; ++y)
                for (std::int64_t x = 0; x < dims[0]; ++x) {
                  Index rel{ts[0]->c0 + x, ts[1]->c0 + y, ts[2]->c0 + z};
                  bool in = true;
                  for (int i = 0; i < n; ++i) in = in && rel[i] >= 0 && rel[i] < f.shape[i];
                  vals[q] = in ? std::abs(f.at_rel(rel)) : 0.0;
                  any = any || vals[q] > 0.0;
                  ++q;
                }
            if (!any) continue;
            const double N = iterated_mean(std::move(vals), dims, w, sp.p, n);
            if (N == 0.0) continue;
            if (rinf) {
              fine_sup = std::max(fine_sup, std::exp2(-(J + k0) * wexp) * N);
              continue;
            }
            // Count polynomial in X = 2^k.
            std::array<double, kMaxDim + 1> coef{1.0, 0.0, 0.0, 0.0};
            for (int i = 0; i < n; ++i) {
              std::array<double, kMaxDim + 1> next{0.0, 0.0, 0.0, 0.0};
              for (int e = 0; e < kMaxDim; ++e) {
                next[e + 1] += coef[e] * ts[i]->alpha;
                next[e] += coef[e] * ts[i]->beta;
              }
              coef = next;
            }
            double series = 0.0;
            for (int e = 0; e <= n; ++e) {
              if (coef[e] == 0.0) continue;
              const double g = e - n * rt;
              series += coef[e] * (shifted_any ? geometric(g, k0, 2) : geometric(g, 1, 1));
            }
            tt.push_back(std::pow(std::exp2(-J * wexp) * N / M, r) * series);
          }
    }
    fine_norm = rinf ? fine_sup : pairwise_sum(tt);
  }

  out.per_scale.resize(a.size());
  if (rinf) {
    double total = M;
    for (std::size_t s = 0; s < a.size(); ++s) {
      double mx = 0.0;
      for (double v : a[s]) mx = std::max(mx, v);
      out.per_scale[s] = mx;
    }
    out.coarse_tail = coarse_norm;
    out.fine_tail = fine_norm;
    total = std::max({total, coarse_norm, fine_norm});
    out.total = total;
    return out;
  }
  const double Mr = std::pow(M, r);
  double S = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    std::vector<double> tt(a[s].size());
    for (std::size_t q = 0; q < a[s].size(); ++q) tt[q] = std::pow(a[s][q] / M, r);
    const double part = pairwise_sum(tt);
    out.per_scale[s] = part * Mr;
    S += part;
  }
  out.coarse_tail = coarse_norm * Mr;
  out.fine_tail = fine_norm * Mr;
  S += coarse_norm;
  S += fine_norm;
  out.total = std::isinf(S) ? kInf : M * std::pow(S, 1.0 / r);
  return out;
}

double bm_norm_window(const GridFunction& f_in, const SpaceParams& sp, int jlo, int jhi) {
  validate(f_in, sp);
  const GridFunction f = trim(f_in);
  if (f.is_zero()) return 0.0;
  const int n = f.dim;
  std::vector<double> terms;
  for (int j = jlo; j <= jhi; ++j) {
    CubeRange range;
    range.jmin = range.jmax = j;
    range.box = f.box();
    const double wj = std::exp2(-j * n * recip(sp.t));
    for (const auto& c : enumerate(range)) {
      const double v = wj * normalized_local_norm(f, sp.p, c);
      if (v > 0.0) terms.push_back(v);
    }
  }
  double M = 0.0;
  for (double v : terms) M = std::max(M, v);
  if (M == 0.0 || std::isinf(sp.r)) return M;
  for (double& v : terms) v = std::pow(v / M, sp.r);
  return M * std::pow(pairwise_sum(terms), 1.0 / sp.r);
}

double maximal_interval_indicator(double a, double b, double x) {
  if (x >= a && x <= b) return 1.0;
  if (x > b) return (b - a) / (x - a);
  return (b - a) / (b - x);
}

namespace {

// Integral of (M chi_[a,b])^e over [lo, hi], split at the kinks a and b.
double weight_integral(double a, double b, double e, double lo, double hi) {
  const auto& q = gauss_legendre01(8);
  std::vector<double> cuts{lo};
  for (double k : {a, b})
    if (k > lo && k < hi) cuts.push_back(k);
  cuts.push_back(hi);
  double s = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double u = cuts[c], v = cuts[c + 1];
    for (std::size_t i = 0; i < q.x.size(); ++i) {
      const double x = u + (v - u) * q.x[i];
      s += (v - u) * q.w[i] * std::pow(maximal_interval_indicator(a, b, x), e);
    }
  }
  return s;
}

}  // namespace

int support_scale(const GridFunction& f_in) {
  const GridFunction f = trim(f_in);
  std::int64_t side = 1;
  for (int i = 0; i < f.dim; ++i) side = std::max(side, f.shape[i]);
  int e = 0;
  while (pow2i(e) < side) ++e;
  return f.J - e;
}

WeightedNorm bm_norm_weighted(const GridFunction& f_in, const SpaceParams& sp, double eta) {
  validate(f_in, sp);
  for (double p : sp.p) require(!std::isinf(p), "weighted norm requires finite exponents");
  const int n = f_in.dim;
  const double lower = sum_recip(sp.p) / n - recip(sp.t) + recip(sp.r);
  require(eta > lower && eta < 1.0, "eta outside the admissible window");
  WeightedNorm out;
  const GridFunction f = trim(f_in);
  const int js = support_scale(f);
  out.jlo = js - 6;
  out.jhi = js + 6;
  out.plain = bm_norm_window(f, sp, out.jlo, out.jhi);
  if (f.is_zero()) return out;
  std::vector<double> absvals(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) absvals[i] = std::abs(f.values[i]);
  const double h = f.h();
  std::vector<double> terms;
  for (int j = out.jlo; j <= out.jhi; ++j) {
    CubeRange range;
    range.jmin = range.jmax = j;
    range.box = f.box();
    const double side = std::exp2(-j);
    const double wq = std::exp2(-j * n * sp.delta());
    for (const auto& c : enumerate(range)) {
      std::array<std::vector<double>, kMaxDim> w;
      for (int i = 0; i < kMaxDim; ++i) {
        if (i >= n) {
          w[i] = {1.0};
          continue;
        }
        const double a = c.pos[i] * side, b = a + side;
        for (std::int64_t k = 0; k < f.shape[i]; ++k) {
          const double lo = (f.origin[i] + k) * h;
          w[i].push_back(weight_integral(a, b, eta * sp.p[i], lo, lo + h));
        }
      }
      const double v = wq * iterated_mean(absvals, f.shape, w, sp.p, n);
      if (v > 0.0) terms.push_back(v);
    }
  }
  double M = 0.0;
  for (double v : terms) M = std::max(M, v);
  if (M == 0.0 || std::isinf(sp.r)) {
    out.weighted = M;
    return out;
  }
  for (double& v : terms) v = std::pow(v / M, sp.r);
  out.weighted = M * std::pow(pairwise_sum(terms), 1.0 / sp.r);
  return out;
}

GridFunction lu_aggregate(const std::vector<GridFunction>& fs, double u) {
  require(!fs.empty(), "vector norm: empty sequence");
  int J = fs.front().J;
  Box box = fs.front().box();
  for (const auto& g : fs) {
    require(g.dim == fs.front().dim, "vector norm: dimension mismatch");
    J = std::max(J, g.J);
    box = box_union(box, g.box());
  }
  GridFunction agg = zeros_like_box(fs.front().dim, J, box);
  std::vector<std::vector<double>> cols(agg.size());
  for (const auto& g : fs) {
    GridFunction e = embed(refine(g, J), box);
    for (std::size_t i = 0; i < e.size(); ++i) cols[i].push_back(std::abs(e.values[i]));
  }
  for (std::size_t i = 0; i < agg.size(); ++i) {
    double v = 0.0;
    if (std::isinf(u)) {
      for (double x : cols[i]) v = std::max(v, x);
    } else {
      double m = 0.0;
      for (double x : cols[i]) m = std::max(m, x);
      if (m > 0.0) {
        std::vector<double> t(cols[i].size());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = std::pow(cols[i][k] / m, u);
        v = m * std::pow(pairwise_sum(t), 1.0 / u);
      }
    }
    agg.values[i] = v;
  }
  return agg;
}

double bm_norm_vector(const std::vector<GridFunction>& fs, const SpaceParams& sp, double u) {
  return bm_value(lu_aggregate(fs, u), sp);
}

LawCheck check_dilation(const GridFunction& f, const SpaceParams& sp, int m) {
  LawCheck c;
  c.lhs = bm_value(dilate_dyadic(f, m), sp);
  c.rhs = std::exp2(-m * f.dim * recip(sp.t)) * bm_value(f, sp);
  c.rel_err = c.rhs == 0.0 ? std::abs(c.lhs) : std::abs(c.lhs - c.rhs) / c.rhs;
  return c;
}

LawCheck check_translation(const GridFunction& f, const SpaceParams& sp, const Index& k, int scale) {
  LawCheck c;
  c.lhs = bm_value(translate_lattice(f, k, scale), sp);
  c.rhs = bm_value(f, sp);
  c.rel_err = c.rhs == 0.0 ? std::abs(c.lhs) : std::abs(c.lhs - c.rhs) / c.rhs;
  return c;
}

ApproximationReport approximation_check(const GridFunction& f, const SpaceParams& sp, const std::vector<int>& ks) {
  ApproximationReport rep;
  for (int k : ks) {
    rep.k.push_back(k);
    rep.residual.push_back(bm_value(f - conditional_expectation(f, k), sp));
  }
  if (!rep.residual.empty()) {
    rep.final_zero = rep.k.back() == f.J && rep.residual.back() == 0.0;
    rep.decreased = rep.residual.back() <= rep.residual.front();
  }
  return rep;
}

bool dyadic_hull_scale(const GridFunction& f_in, int& scale) {
  const GridFunction f = trim(f_in);
  DyadicCube c;
  c.dim = f.dim;
  c.scale = f.J;
  for (int i = 0; i < f.dim; ++i) c.pos[i] = f.origin[i];
  for (int step = 0; step < 62; ++step) {
    bool ok = true;
    const std::int64_t w = pow2i(f.J - c.scale);
    for (int i = 0; i < f.dim; ++i) {
      const std::int64_t lo = c.pos[i] * w, hi = lo + w;
      ok = ok && f.origin[i] >= lo && f.origin[i] + f.shape[i] <= hi;
    }
    if (ok) {
      scale = c.scale;
      return true;
    }
    bool straddles = false;
    for (int i = 0; i < f.dim; ++i) straddles = straddles || (f.origin[i] < 0 && f.origin[i] + f.shape[i] > 0);
    if (straddles) return false;
    c = parent(c);
  }
  return false;
}

}  // namespace bmkit
