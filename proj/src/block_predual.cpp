#include "bmkit/block_predual.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace bmkit {

namespace {

struct Dual {
  int n;
  ExponentVector q;  // p'
  double tq;         // t'
  double rq;         // r'
  double delta;      // 1/t - (1/n) sum 1/p
};

Dual dual_of(const SpaceParams& sp) {
  check_block_regime(sp);
  return Dual{sp.dim(), conjugate(sp.p), conjugate(sp.t), conjugate(sp.r), sp.delta()};
}

// Nested power mean with uniform per-axis weight w over a block; optional gradient.
double nested_mean_grad(const std::vector<double>& x, const Index& d, int n, double w, const ExponentVector& q,
                        std::vector<double>* grad) {
  std::vector<std::vector<double>> lv(static_cast<std::size_t>(n + 1));
  lv[0] = x;
  Index dims = d;
  for (int l = 0; l < n; ++l) {
    const std::int64_t len = dims[l];
    const std::size_t outer = lv[l].size() / static_cast<std::size_t>(len);
    lv[l + 1].assign(outer, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
      double s = 0.0;
      for (std::int64_t k = 0; k < len; ++k) {
        const double v = lv[l][o * len + k];
        if (v != 0.0) s += w * std::pow(v, q[l]);
      }
      lv[l + 1][o] = s == 0.0 ? 0.0 : std::pow(s, 1.0 / q[l]);
    }
  }
  const double N = lv[n][0];
  if (grad) {
    std::vector<double> up{1.0};
    for (int l = n - 1; l >= 0; --l) {
      const std::int64_t len = dims[l];
      std::vector<double> down(lv[l].size(), 0.0);
      for (std::size_t o = 0; o < lv[l + 1].size(); ++o) {
        const double y = lv[l + 1][o];
        if (y == 0.0 || up[o] == 0.0) continue;
        const double fy = up[o] * w * std::pow(y, 1.0 - q[l]);
        for (std::int64_t k = 0; k < len; ++k) {
          const double v = lv[l][o * len + k];
          if (v != 0.0) down[o * len + k] = fy * std::pow(v, q[l] - 1.0);
        }
      }
      up.swap(down);
    }
    *grad = std::move(up);
  }
  return N;
}

// Slice norm of nonnegative cell values x on the box of `g` at scale j, optionally with gradient.
double slice_eval(const std::vector<double>& x, const GridFunction& g, int j, const Dual& D, std::vector<double>* grad) {
  const int n = D.n;
  const int J = g.J;
  if (grad) grad->assign(x.size(), 0.0);
  if (j > J) {
    double M = 0.0;
    for (double v : x) M = std::max(M, v);
    if (M == 0.0) return 0.0;
    std::vector<double> t(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) t[c] = x[c] == 0.0 ? 0.0 : std::pow(x[c] / M, D.rq);
    const double s = pairwise_sum(t);
    // S^{r'} = sum_c K x_c^{r'}, K = 2^{(j-J)n} 2^{-j n r'/t'}
    const double logK = (j - J) * n - j * n * D.rq / D.tq;
    const double S = M * std::pow(s, 1.0 / D.rq) * std::exp2(logK / D.rq);
    if (grad) {
      const double K = std::exp2(logK);
      for (std::size_t c = 0; c < x.size(); ++c)
        if (x[c] != 0.0) (*grad)[c] = std::pow(S, 1.0 - D.rq) * K * std::pow(x[c], D.rq - 1.0);
    }
    return S;
  }
  const std::int64_t s = pow2i(J - j);
  const double w = 1.0 / static_cast<double>(s);
  const double wj = std::exp2(-j * n / D.tq);
  Index cmin{0, 0, 0}, cmax{0, 0, 0};
  for (int i = 0; i < n; ++i) {
    cmin[i] = floor_div(g.origin[i], s);
    cmax[i] = floor_div(g.origin[i] + g.shape[i] - 1, s);
  }
  struct Cube {
    std::vector<std::size_t> cells;
    std::vector<double> grad;
    double T = 0.0;
  };
  std::vector<Cube> cubes;
  for (std::int64_t c2 = cmin[2]; c2 <= cmax[2]; ++c2)
    for (std::int64_t c1 = cmin[1]; c1 <= cmax[1]; ++c1)
      for (std::int64_t c0 = cmin[0]; c0 <= cmax[0]; ++c0) {
        const Index cc{c0, c1, c2};
        Index lo{0, 0, 0}, d{1, 1, 1};
        for (int i = 0; i < n; ++i) {
          lo[i] = std::max(cc[i] * s, g.origin[i]) - g.origin[i];
          const std::int64_t hi = std::min((cc[i] + 1) * s, g.origin[i] + g.shape[i]) - g.origin[i];
          d[i] = hi - lo[i];
        }
        Cube cube;
        std::vector<double> vals;
        bool any = false;
        for (std::int64_t z = 0; z < d[2]; ++z)
          for (std::int64_t y = 0; y < d[1]; ++y)
            for (std::int64_t xx = 0; xx < d[0]; ++xx) {
              const std::size_t idx = g.flat({lo[0] + xx, lo[1] + y, lo[2] + z});
              cube.cells.push_back(idx);
              vals.push_back(x[idx]);
              any = any || x[idx] != 0.0;
            }
        if (!any) continue;
        cube.T = wj * nested_mean_grad(vals, d, n, w, D.q, grad ? &cube.grad : nullptr);
        cubes.push_back(std::move(cube));
      }
  double M = 0.0;
  for (const auto& c : cubes) M = std::max(M, c.T);
  if (M == 0.0) return 0.0;
  std::vector<double> t(cubes.size());
  for (std::size_t k = 0; k < cubes.size(); ++k) t[k] = std::pow(cubes[k].T / M, D.rq);
  const double S = M * std::pow(pairwise_sum(t), 1.0 / D.rq);
  if (grad) {
    for (const auto& c : cubes) {
      if (c.T == 0.0) continue;
      const double f = std::pow(S, 1.0 - D.rq) * std::pow(c.T, D.rq - 1.0) * wj;
      for (std::size_t k = 0; k < c.cells.size(); ++k) (*grad)[c.cells[k]] += f * c.grad[k];
    }
  }
  return S;
}

std::vector<double> abs_values(const GridFunction& f) {
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::abs(f.values[i]);
  return a;
}

void project_simplex(std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  for (double& x : v) x = std::max(x - tau, 0.0);
}

}  // namespace

void check_block_regime(const SpaceParams& sp) {
  for (double p : sp.p) require(p > 1.0 && !std::isinf(p), "block regime requires 1 < p_i < inf");
  const double crit = sp.dim() / sum_recip(sp.p);
  require(crit > 1.0, "block regime requires n / sum(1/p_i) > 1");
  require(crit < sp.t && sp.t < sp.r && !std::isinf(sp.r), "block regime requires n / sum(1/p_i) < t < r < inf");
}

double block_bound(const SpaceParams& sp, int scale) { return std::exp2(-scale * sp.dim() * sp.delta()); }

bool is_normalized_block(const Block& b, const SpaceParams& sp, double tol) {
  for (std::size_t i = 0; i < b.function.size(); ++i) {
    if (b.function.values[i] == cplx{}) continue;
    Index rel = b.function.unflat(i), abs{0, 0, 0};
    for (int a = 0; a < b.function.dim; ++a) abs[a] = rel[a] + b.function.origin[a];
    DyadicCube cell;
    cell.dim = b.function.dim;
    cell.scale = b.function.J;
    cell.pos = abs;
    if (!contains(b.support, cell)) return false;
  }
  return mixed_norm(b.function, conjugate(sp.p)) <= block_bound(sp, b.support.scale) * (1.0 + tol);
}

GridFunction reconstruct(const BlockDecomposition& d) {
  require(!d.blocks.empty(), "reconstruct: empty decomposition");
  GridFunction acc = scaled(d.blocks.front().function, d.lambda.front());
  for (std::size_t k = 1; k < d.blocks.size(); ++k) acc = acc + scaled(d.blocks[k].function, d.lambda[k]);
  return acc;
}

double slice_norm(const GridFunction& f_in, const SpaceParams& sp, int j) {
  const Dual D = dual_of(sp);
  require(f_in.dim == D.n, "slice_norm: dimension mismatch");
  const GridFunction f = trim(f_in);
  if (f.is_zero()) return 0.0;
  return slice_eval(abs_values(f), f, j, D, nullptr);
}

ScaleWindow default_window(const GridFunction& f) { return {support_scale(f) - 4, f.J + 2}; }

UpperBound block_norm_upper(const GridFunction& f, const SpaceParams& sp) {
  return block_norm_upper(f, sp, default_window(f));
}

UpperBound block_norm_upper(const GridFunction& f_in, const SpaceParams& sp, const ScaleWindow& w) {
  const Dual D = dual_of(sp);
  UpperBound ub;
  ub.window = w;
  const GridFunction f = trim(f_in);
  if (f.is_zero()) {
    ub.scale = w.jlo;
    return ub;
  }
  const auto a = abs_values(f);
  ub.value = kInf;
  for (int j = w.jlo; j <= w.jhi; ++j) {
    const double s = slice_eval(a, f, j, D, nullptr);
    ub.slices.push_back(s);
    if (s < ub.value) {
      ub.value = s;
      ub.scale = j;
    }
  }
  return ub;
}

BlockDecomposition decompose_at_scale(const GridFunction& f_in, const SpaceParams& sp, int j) {
  const Dual D = dual_of(sp);
  BlockDecomposition dec;
  const GridFunction f0 = trim(f_in);
  if (f0.is_zero()) return dec;
  const GridFunction f = j > f0.J ? refine(f0, j) : f0;
  CubeRange range;
  range.jmin = range.jmax = j;
  range.box = f.box();
  std::vector<double> lam;
  for (const auto& c : enumerate(range)) {
    GridFunction piece = restrict_to(f, c);
    const double nm = mixed_norm(piece, D.q);
    if (nm == 0.0) continue;
    const double lambda = nm / block_bound(sp, j);
    dec.lambda.push_back(lambda);
    dec.blocks.push_back(Block{c, scaled(piece, 1.0 / lambda)});
    lam.push_back(lambda);
  }
  double M = 0.0;
  for (double v : lam) M = std::max(M, v);
  if (M > 0.0) {
    for (double& v : lam) v = std::pow(v / M, D.rq);
    dec.weight_norm = M * std::pow(pairwise_sum(lam), 1.0 / D.rq);
  }
  return dec;
}

BlockDecomposition finite_decomposition(const GridFunction& f, const SpaceParams& sp) {
  const UpperBound ub = block_norm_upper(f, sp);
  return decompose_at_scale(f, sp, ub.scale);
}

double split_objective(const SplitWeights& w, const SpaceParams& sp) {
  const Dual D = dual_of(sp);
  const auto a = abs_values(w.support);
  std::vector<double> parts;
  for (int j = w.window.jlo; j <= w.window.jhi; ++j) {
    const auto& th = w.theta[static_cast<std::size_t>(j - w.window.jlo)];
    std::vector<double> x(a.size());
    for (std::size_t c = 0; c < a.size(); ++c) x[c] = th[c] * a[c];
    parts.push_back(slice_eval(x, w.support, j, D, nullptr));
  }
  double M = 0.0;
  for (double v : parts) M = std::max(M, v);
  if (M == 0.0) return 0.0;
  for (double& v : parts) v = std::pow(v / M, D.rq);
  return M * std::pow(pairwise_sum(parts), 1.0 / D.rq);
}

InfimumResult block_norm_infimum(const GridFunction& f_in, const SpaceParams& sp, const SolverConfig& cfg) {
  const Dual D = dual_of(sp);
  InfimumResult res;
  const GridFunction f = trim(f_in);
  const ScaleWindow win = default_window(f);
  res.weights.window = win;
  res.weights.support = f;
  const std::size_t S = static_cast<std::size_t>(win.jhi - win.jlo + 1);
  const std::size_t N = f.size();
  res.weights.theta.assign(S, std::vector<double>(N, 0.0));
  if (f.is_zero()) {
    res.converged = true;
    return res;
  }
  const auto a = abs_values(f);
  const UpperBound ub = block_norm_upper(f, sp, win);
  std::vector<std::vector<double>> theta(S, std::vector<double>(N, 0.0));
  for (std::size_t c = 0; c < N; ++c) theta[static_cast<std::size_t>(ub.scale - win.jlo)][c] = 1.0;

  auto evaluate = [&](const std::vector<std::vector<double>>& th, std::vector<std::vector<double>>* grad) {
    std::vector<double> Sj(S);
    std::vector<std::vector<double>> gj(S);
    for (std::size_t s = 0; s < S; ++s) {
      std::vector<double> x(N);
      for (std::size_t c = 0; c < N; ++c) x[c] = th[s][c] * a[c];
      Sj[s] = slice_eval(x, f, win.jlo + static_cast<int>(s), D, grad ? &gj[s] : nullptr);
    }
    double M = 0.0;
    for (double v : Sj) M = std::max(M, v);
    if (M == 0.0) return 0.0;
    std::vector<double> t(S);
    for (std::size_t s = 0; s < S; ++s) t[s] = std::pow(Sj[s] / M, D.rq);
    const double F = M * std::pow(pairwise_sum(t), 1.0 / D.rq);
    if (grad) {
      grad->assign(S, std::vector<double>(N, 0.0));
      for (std::size_t s = 0; s < S; ++s) {
        if (Sj[s] == 0.0) continue;
        const double k = std::pow(F, 1.0 - D.rq) * std::pow(Sj[s], D.rq - 1.0);
        for (std::size_t c = 0; c < N; ++c) (*grad)[s][c] = k * gj[s][c] * a[c];
      }
    }
    return F;
  };

  double best = evaluate(theta, nullptr);
  auto best_theta = theta;
  std::vector<double> history{best};
  std::vector<std::vector<double>> grad;
  int it = 1;
  for (; it <= cfg.max_iterations; ++it) {
    evaluate(theta, &grad);
    double gmax = 0.0;
    for (const auto& row : grad)
      for (double g : row) gmax = std::max(gmax, std::abs(g));
    if (gmax == 0.0) {
      res.converged = true;
      break;
    }
    const double eta = cfg.step0 / std::sqrt(static_cast<double>(it)) / gmax;
    std::vector<double> col(S);
    for (std::size_t c = 0; c < N; ++c) {
      if (a[c] == 0.0) continue;
      for (std::size_t s = 0; s < S; ++s) col[s] = theta[s][c] - eta * grad[s][c];
      project_simplex(col);
      for (std::size_t s = 0; s < S; ++s) theta[s][c] = col[s];
    }
    const double F = evaluate(theta, nullptr);
    if (F < best) {
      best = F;
      best_theta = theta;
    }
    history.push_back(best);
    if (static_cast<int>(history.size()) > cfg.stall_window) {
      const double old = history[history.size() - 1 - static_cast<std::size_t>(cfg.stall_window)];
      if (old - best < cfg.stall_tol * best) {
        res.converged = true;
        break;
      }
    }
  }
  res.iterations = std::min(it, cfg.max_iterations);
  res.value = best;
  res.weights.theta = best_theta;
  return res;
}

GridFunction norming_function(const GridFunction& g, const ExponentVector& q) {
  const int n = g.dim;
  check_exponents(q, n);
  GridFunction h = g;
  std::fill(h.values.begin(), h.values.end(), cplx{});
  const double total = mixed_norm(g, q);
  if (total == 0.0) return h;
  // Partial norms after integrating the first l coordinates.
  const double cell = g.h();
  std::vector<std::vector<double>> lv(static_cast<std::size_t>(n + 1));
  lv[0] = abs_values(g);
  for (int l = 0; l < n; ++l) {
    const std::int64_t len = g.shape[l];
    const std::size_t outer = lv[l].size() / static_cast<std::size_t>(len);
    lv[l + 1].assign(outer, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
      double s = 0.0;
      for (std::int64_t k = 0; k < len; ++k) {
        const double v = lv[l][o * len + k];
        if (v != 0.0) s += cell * std::pow(v, q[l]);
      }
      lv[l + 1][o] = s == 0.0 ? 0.0 : std::pow(s, 1.0 / q[l]);
    }
  }
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const double v = lv[0][idx];
    if (v == 0.0) continue;
    double m = std::pow(v, q[0] - 1.0);
    std::size_t o = idx;
    for (int l = 1; l < n; ++l) {
      o /= static_cast<std::size_t>(g.shape[l - 1]);
      m *= std::pow(lv[l][o], q[l] - q[l - 1]);
    }
    m /= std::pow(total, q[n - 1] - 1.0);
    h.values[idx] = m * std::conj(g.values[idx] / std::abs(g.values[idx]));
  }
  return h;
}

GridFunction dual_witness(const GridFunction& g_in, const SpaceParams& sp, int j) {
  const Dual D = dual_of(sp);
  const GridFunction g0 = trim(g_in);
  const GridFunction g = j > g0.J ? refine(g0, j) : g0;
  GridFunction out = g;
  std::fill(out.values.begin(), out.values.end(), cplx{});
  CubeRange range;
  range.jmin = range.jmax = j;
  range.box = g.box();
  for (const auto& c : enumerate(range)) {
    GridFunction piece = restrict_to(g, c);
    const double nm = mixed_norm(piece, D.q);
    if (nm == 0.0) continue;
    const double lambda = nm / block_bound(sp, j);
    const double mu = std::pow(lambda, D.rq - 1.0) / block_bound(sp, j);
    out = out + scaled(norming_function(piece, D.q), mu);
  }
  return embed(out, g.box());
}

LowerBound block_norm_lower(const GridFunction& g_in, const SpaceParams& sp, const SearchConfig& cfg) {
  dual_of(sp);
  LowerBound lb;
  const GridFunction g = trim(g_in);
  lb.witness = g;
  std::fill(lb.witness.values.begin(), lb.witness.values.end(), cplx{});
  if (g.is_zero()) return lb;
  const auto ga = abs_values(g);
  const std::size_t N = g.size();
  const double vol = std::pow(g.h(), g.dim);
  std::vector<cplx> phase(N);
  for (std::size_t c = 0; c < N; ++c) phase[c] = ga[c] == 0.0 ? cplx{} : std::conj(g.values[c] / ga[c]);

  auto field = [&](const std::vector<double>& m) {
    GridFunction f = g;
    for (std::size_t c = 0; c < N; ++c) f.values[c] = m[c] * phase[c];
    return f;
  };
  auto ratio = [&](const std::vector<double>& m) {
    std::vector<double> t(N);
    for (std::size_t c = 0; c < N; ++c) t[c] = m[c] * ga[c];
    const double num = pairwise_sum(t) * vol;
    const double den = bm_value(field(m), sp);
    return den > 0.0 ? num / den : 0.0;
  };

  // Start fields.
  const UpperBound ub = block_norm_upper(g, sp);
  std::vector<std::vector<double>> starts;
  starts.emplace_back(N, 0.0);
  for (std::size_t c = 0; c < N; ++c) starts.back()[c] = ga[c] > 0.0 ? 1.0 : 0.0;
  {
    const GridFunction h = norming_function(g, conjugate(sp.p));
    starts.emplace_back(N, 0.0);
    for (std::size_t c = 0; c < N; ++c) starts.back()[c] = std::abs(h.values[c]);
  }
  std::vector<double> proof(N, 0.0);
  if (ub.scale <= g.J) {
    const GridFunction w = dual_witness(g, sp, ub.scale);
    for (std::size_t c = 0; c < N; ++c) proof[c] = std::abs(w.values[c]);
  } else {
    proof = starts.back();
  }
  starts.push_back(proof);
  {
    // Concentrated on the cube carrying the largest weight at the best coarse scale.
    const int j = std::min(ub.scale, g.J);
    const std::int64_t s = pow2i(g.J - j);
    std::map<std::vector<std::int64_t>, double> mass;
    for (std::size_t c = 0; c < N; ++c) {
      Index rel = g.unflat(c);
      std::vector<std::int64_t> key;
      for (int i = 0; i < g.dim; ++i) key.push_back(floor_div(rel[i] + g.origin[i], s));
      mass[key] += ga[c];
    }
    auto top = std::max_element(mass.begin(), mass.end(), [](auto& x, auto& y) { return x.second < y.second; });
    starts.emplace_back(N, 0.0);
    for (std::size_t c = 0; c < N; ++c) {
      Index rel = g.unflat(c);
      std::vector<std::int64_t> key;
      for (int i = 0; i < g.dim; ++i) key.push_back(floor_div(rel[i] + g.origin[i], s));
      starts.back()[c] = key == top->first ? proof[c] : 0.0;
    }
  }
  while (static_cast<int>(starts.size()) < cfg.restarts) {
    std::mt19937_64 rng(cfg.seed * 1315423911ULL + starts.size());
    std::vector<double> m = proof;
    for (double& v : m) v *= 0.5 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
    starts.push_back(std::move(m));
  }
  starts.resize(static_cast<std::size_t>(std::max(cfg.restarts, 1)));

  std::vector<double> best_ratio(starts.size(), 0.0);
  std::vector<std::vector<double>> best_m(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) {
    std::vector<double> m = starts[k];
    double cur = ratio(m);
    int evals = 1;
    bool improved = true;
    double eps = 0.5;
    while (evals < cfg.evaluations_per_restart && (improved || eps > 0.05)) {
      if (!improved) eps *= 0.5;
      improved = false;
      for (std::size_t c = 0; c < N && evals < cfg.evaluations_per_restart; ++c) {
        if (ga[c] == 0.0) continue;
        for (double factor : {1.0 + eps, 1.0 - eps}) {
          const double old = m[c];
          m[c] = old == 0.0 ? eps : old * factor;
          const double r = ratio(m);
          ++evals;
          if (r > cur) {
            cur = r;
            improved = true;
            break;
          }
          m[c] = old;
        }
      }
    }
    best_ratio[k] = cur;
    best_m[k] = m;
  });
  std::size_t arg = 0;
  for (std::size_t k = 1; k < starts.size(); ++k)
    if (best_ratio[k] > best_ratio[arg]) arg = k;
  lb.value = best_ratio[arg];
  lb.start = static_cast<int>(arg);
  GridFunction f = field(best_m[arg]);
  const double nf = bm_value(f, sp);
  lb.witness = nf > 0.0 ? scaled(f, 1.0 / nf) : f;
  return lb;
}

}  // namespace bmkit
