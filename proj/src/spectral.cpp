#include "bmkit/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace bmkit {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place n-d complex DFT of data laid out with axis 0 fastest.
void dft(std::vector<cplx>& data, int n, const Index& M, int sign) {
  int dims[kMaxDim];
  for (int i = 0; i < n; ++i) dims[i] = static_cast<int>(M[n - 1 - i]);
  const std::size_t N = data.size();
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * N));
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft(n, dims, buf, buf, sign, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < N; ++i) {
    buf[i][0] = data[i].real();
    buf[i][1] = data[i].imag();
  }
  fftw_execute(plan);
  for (std::size_t i = 0; i < N; ++i) data[i] = cplx{buf[i][0], buf[i][1]};
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
}

double norm_xi(const Frequency& xi) { return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]); }

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double Partition::psi(double r) const { return smooth_step((outer - r) / (outer - inner)); }

double Partition::phi(int j, double r) const { return psi(std::ldexp(r, -j)) - psi(std::ldexp(r, 1 - j)); }

Box spectral_box(const GridFunction& f, int pad_factor) {
  require(pad_factor >= 1, "pad factor must be at least 1");
  Box b = f.box();
  for (int i = 0; i < f.dim; ++i) {
    std::int64_t M = 1;
    while (M < pad_factor * f.shape[i]) M *= 2;
    b.lo[i] = f.origin[i] - floor_div(M - f.shape[i], 2);
    b.hi[i] = b.lo[i] + M;
  }
  return b;
}

Frequency Spectrum::frequency(std::size_t idx) const {
  Frequency xi{0, 0, 0};
  std::size_t r = idx;
  const double h = std::ldexp(1.0, -J);
  for (int i = 0; i < dim; ++i) {
    const std::int64_t k = static_cast<std::int64_t>(r % static_cast<std::size_t>(M[i]));
    r /= static_cast<std::size_t>(M[i]);
    const std::int64_t kk = k < M[i] / 2 ? k : k - M[i];
    xi[i] = static_cast<double>(kk) / (static_cast<double>(M[i]) * h);
  }
  return xi;
}

Spectrum forward(const GridFunction& f, int pad_factor) {
  Spectrum s;
  s.dim = f.dim;
  s.J = f.J;
  s.box = spectral_box(f, pad_factor);
  const GridFunction e = embed(f, s.box);
  s.M = e.shape;
  s.data = e.values;
  dft(s.data, f.dim, s.M, FFTW_FORWARD);
  return s;
}

GridFunction inverse(const Spectrum& s, const Multiplier& m) {
  std::vector<cplx> d(s.data.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = s.data[i] * m(s.frequency(i));
  dft(d, s.dim, s.M, FFTW_BACKWARD);
  GridFunction out = zeros_like_box(s.dim, s.J, s.box);
  const double inv = 1.0 / static_cast<double>(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.values[i] = d[i] * inv;
  return out;
}

double roundtrip_error(const GridFunction& f, int pad_factor) {
  const Spectrum s = forward(f, pad_factor);
  const GridFunction g = inverse(s, [](const Frequency&) { return cplx{1.0, 0.0}; });
  const GridFunction e = embed(f, s.box);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    num = std::max(num, std::abs(g.values[i] - e.values[i]));
    den = std::max(den, std::abs(e.values[i]));
  }
  return den > 0.0 ? num / den : num;
}

GridFunction apply_multiplier(const GridFunction& f, const Multiplier& m, const SpectralConfig& cfg) {
  return inverse(forward(f, cfg.pad_factor), m);
}

BandWindow band_window(const GridFunction& f, const SpectralConfig& cfg) {
  const Box b = spectral_box(f, cfg.pad_factor);
  std::int64_t M = 1;
  for (int i = 0; i < f.dim; ++i) M = std::max(M, b.hi[i] - b.lo[i]);
  // Lowest nonzero frequency 1 / (M h) = 2^{J - log2 M}.
  int lg = 0;
  while (pow2i(lg) < M) ++lg;
  BandWindow w;
  w.jlo = (f.J - lg) - 1;
  w.jhi = f.J - 3;
  return w;
}

double partition_unity_error(const BandWindow& w, const Partition& part, int samples) {
  double err = 0.0;
  const double a = std::ldexp(1.0, w.jlo + 1), b = std::ldexp(1.0, w.jhi + 1);
  for (int k = 0; k <= samples; ++k) {
    const double r = a * std::pow(b / a, static_cast<double>(k) / samples);
    double s = 0.0;
    for (int j = w.jlo; j <= w.jhi; ++j) s += part.phi(j, r);
    err = std::max(err, std::abs(s - 1.0));
  }
  return err;
}

GridFunction band_project(const GridFunction& f, int j, const SpectralConfig& cfg) {
  require(j + 2 <= f.J - 1, "band outside the resolvable frequency range");
  const Partition part = cfg.partition;
  return apply_multiplier(f, [&](const Frequency& xi) { return cplx{part.phi(j, norm_xi(xi)), 0.0}; }, cfg);
}

std::vector<GridFunction> band_projections(const GridFunction& f, const BandWindow& w, const SpectralConfig& cfg) {
  require(w.jhi + 2 <= f.J - 1, "band outside the resolvable frequency range");
  const Spectrum s = forward(f, cfg.pad_factor);
  const Partition part = cfg.partition;
  std::vector<GridFunction> out(static_cast<std::size_t>(std::max(0, w.jhi - w.jlo + 1)));
  parallel_for(out.size(), [&](std::size_t k) {
    const int j = w.jlo + static_cast<int>(k);
    out[k] = inverse(s, [&](const Frequency& xi) { return cplx{part.phi(j, norm_xi(xi)), 0.0}; });
  });
  return out;
}

namespace {

GridFunction weighted_aggregate(const std::vector<GridFunction>& bands, const BandWindow& w, double s, double q) {
  GridFunction out = bands.front();
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<double> t(bands.size());
    double m = 0.0;
    for (std::size_t k = 0; k < bands.size(); ++k) {
      t[k] = std::exp2(s * (w.jlo + static_cast<int>(k))) * std::abs(bands[k].values[i]);
      m = std::max(m, t[k]);
    }
    double v = m;
    if (!std::isinf(q) && m > 0.0) {
      for (double& x : t) x = std::pow(x / m, q);
      v = m * std::pow(pairwise_sum(t), 1.0 / q);
    }
    out.values[i] = v;
  }
  return out;
}

}  // namespace

GridFunction lp_square_function(const GridFunction& f, const SpectralConfig& cfg) {
  const BandWindow w = band_window(f, cfg);
  return weighted_aggregate(band_projections(f, w, cfg), w, 0.0, 2.0);
}

GridFunction peetre_maximal(const GridFunction& f, int j, double a, const SpectralConfig& cfg) {
  require(a > 0.0, "Peetre maximal requires a > 0");
  const GridFunction g = band_project(f, j, cfg);
  GridFunction out = g;
  const double gmax = g.max_abs();
  const double h = g.h();
  const double scale = std::ldexp(h, j);
  parallel_for(g.size(), [&](std::size_t o) {
    const Index x = g.unflat(o);
    double best = std::abs(g.values[o]);
    // Offsets beyond radius R cannot beat the current best.
    const double R = best > 0.0 ? (std::pow(gmax / best, 1.0 / a) - 1.0) / scale : kInf;
    Index lo{0, 0, 0}, hi{1, 1, 1};
    for (int i = 0; i < g.dim; ++i) {
      const double r = std::min(R, static_cast<double>(g.shape[i]));
      const std::int64_t ri = static_cast<std::int64_t>(std::ceil(r));
      lo[i] = std::max<std::int64_t>(0, x[i] - ri);
      hi[i] = std::min<std::int64_t>(g.shape[i], x[i] + ri + 1);
    }
    for (std::int64_t z = lo[2]; z < hi[2]; ++z)
      for (std::int64_t y = lo[1]; y < hi[1]; ++y)
        for (std::int64_t w = lo[0]; w < hi[0]; ++w) {
          const double d0 = static_cast<double>(x[0] - w), d1 = static_cast<double>(x[1] - y),
                       d2 = static_cast<double>(x[2] - z);
          const double dist = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
          const double v = std::abs(g.at_rel({w, y, z})) / std::pow(1.0 + scale * dist, a);
          best = std::max(best, v);
        }
    out.values[o] = best;
  });
  return out;
}

GridFunction heat(const GridFunction& f, double alpha, const SpectralConfig& cfg) {
  require(alpha > 0.0, "heat requires alpha > 0");
  const double c = 4.0 * M_PI * M_PI * alpha;
  return apply_multiplier(f, [&](const Frequency& xi) {
    const double r = norm_xi(xi);
    return cplx{std::exp(-c * r * r), 0.0};
  }, cfg);
}

HeatCheck heat_characterization_check(const GridFunction& f, const std::vector<double>& alphas, const SpaceParams& sp,
                                      const SpectralConfig& cfg) {
  HeatCheck hc;
  const Spectrum s = forward(f, cfg.pad_factor);
  const GridFunction e = embed(f, s.box);
  for (double a : alphas) {
    const double c0 = 4.0 * M_PI * M_PI * a, c1 = 4.0 * M_PI * M_PI / a;
    const GridFunction d = inverse(s, [&](const Frequency& xi) {
      const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
      return cplx{std::exp(-c0 * r2) - std::exp(-c1 * r2), 0.0};
    });
    hc.alpha.push_back(a);
    hc.residual.push_back(bm_value(d - e, sp));
  }
  for (std::size_t k = 1; k < hc.residual.size(); ++k)
    hc.decreasing = hc.decreasing && hc.residual[k] < hc.residual[k - 1];
  return hc;
}

GridFunction fractional_laplacian(const GridFunction& f, double s, const SpectralConfig& cfg) {
  return apply_multiplier(f, [&](const Frequency& xi) {
    const double r = norm_xi(xi);
    return cplx{r == 0.0 ? 0.0 : std::pow(r, s), 0.0};
  }, cfg);
}

GridFunction riesz(const GridFunction& f, int k, const SpectralConfig& cfg) {
  require(k >= 0 && k < f.dim, "Riesz index out of range");
  return apply_multiplier(f, [&](const Frequency& xi) {
    const double r = norm_xi(xi);
    return r == 0.0 ? cplx{} : cplx{0.0, -xi[static_cast<std::size_t>(k)] / r};
  }, cfg);
}

GridFunction band_sign(const GridFunction& f, const std::vector<int>& eps, const BandWindow& w, const SpectralConfig& cfg) {
  require(static_cast<int>(eps.size()) == w.jhi - w.jlo + 1, "sign pattern length must match the band window");
  const Partition part = cfg.partition;
  return apply_multiplier(f, [&](const Frequency& xi) {
    const double r = norm_xi(xi);
    double m = 0.0;
    for (int j = w.jlo; j <= w.jhi; ++j) m += eps[static_cast<std::size_t>(j - w.jlo)] * part.phi(j, r);
    return cplx{m, 0.0};
  }, cfg);
}

double tl_norm(const GridFunction& f, const TLParams& tp, const SpectralConfig& cfg) {
  const BandWindow w = band_window(f, cfg);
  return bm_value(weighted_aggregate(band_projections(f, w, cfg), w, tp.s, tp.q), tp.sp);
}

double besov_norm(const GridFunction& f, const TLParams& tp, const SpectralConfig& cfg) {
  const BandWindow w = band_window(f, cfg);
  const auto bands = band_projections(f, w, cfg);
  std::vector<double> t(bands.size());
  for (std::size_t k = 0; k < bands.size(); ++k)
    t[k] = std::exp2(tp.s * (w.jlo + static_cast<int>(k))) * bm_value(bands[k], tp.sp);
  double m = 0.0;
  for (double x : t) m = std::max(m, x);
  if (std::isinf(tp.q) || m == 0.0) return m;
  for (double& x : t) x = std::pow(x / m, tp.q);
  return m * std::pow(pairwise_sum(t), 1.0 / tp.q);
}

namespace {

void require_chain_regime(const SpaceParams& sp, const char* which) {
  for (double p : sp.p) require(p > 1.0 && !std::isinf(p), std::string(which) + ": requires 1 < p < inf");
  const double crit = sp.dim() / sum_recip(sp.p);
  const bool ok = (crit > 1.0 && crit < sp.t && sp.t < sp.r) || (crit > 1.0 && crit <= sp.t && std::isinf(sp.r));
  require(ok, std::string(which) + ": requires 1 < n / sum(1/p) < t < r");
}

}  // namespace

ChainRuleReport chain_rule_check(const GridFunction& u, const ChainRuleParams& cp, const SpectralConfig& cfg) {
  const int n = u.dim;
  require(cp.sp1.dim() == n && cp.sp2.dim() == n, "chain rule: dimension mismatch");
  require(cp.s > 0.0 && cp.s < 1.0, "chain rule requires 0 < s < 1");
  require(cp.q > 0.0 && !std::isinf(cp.q), "chain rule requires 0 < q < inf");
  ChainRuleReport rep;
  rep.sp.p.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rep.sp.p[i] = 1.0 / (recip(cp.sp1.p[i]) + recip(cp.sp2.p[i]));
  rep.sp.t = 1.0 / (recip(cp.sp1.t) + recip(cp.sp2.t));
  const double ir = recip(cp.sp1.r) + recip(cp.sp2.r);
  rep.sp.r = ir == 0.0 ? kInf : 1.0 / ir;
  require_chain_regime(rep.sp, "combined exponents");
  require_chain_regime(cp.sp1, "G exponents");
  require_chain_regime(cp.sp2, "u exponents");
  const double min1 = *std::min_element(cp.sp1.p.begin(), cp.sp1.p.end());
  const double min2 = *std::min_element(cp.sp2.p.begin(), cp.sp2.p.end());
  const double lower = n * (std::max(1.0 / min2, 1.0 / cp.q) - recip(conjugate(min1)));
  require(lower > 0.0 && lower < cp.s, "chain rule smoothness window violated");
  const GridFunction Fu = map_values(u, [](cplx v) { return v * v; });
  const GridFunction Gu = map_values(u, [](cplx v) { return cplx{2.0 * std::abs(v), 0.0}; });
  rep.lhs = tl_norm(Fu, TLParams{rep.sp, cp.s, cp.q}, cfg);
  rep.g_norm = bm_value(Gu, cp.sp1);
  rep.u_norm = tl_norm(u, TLParams{cp.sp2, cp.s, cp.q}, cfg);
  const double den = rep.g_norm * rep.u_norm;
  rep.ratio = den > 0.0 ? rep.lhs / den : 0.0;
  return rep;
}

}  // namespace bmkit
