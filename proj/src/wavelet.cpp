#include "bmkit/wavelet.hpp"

#include <Eigen/Dense>

#include <algorithm>

namespace bmkit {

namespace {

// Low-pass filters generated by tools/gen_daubechies.py.
const std::vector<std::vector<double>>& daubechies_filters() {
  static const std::vector<std::vector<double>> table = {
      {0.7071067811865475244, 0.7071067811865475244},
      {0.48296291314453414337, 0.83651630373780790558, 0.22414386804201338103, -0.12940952255126038117},
      {0.332670552950082616, 0.80689150931109257649, 0.4598775021184915701, -0.1350110200102545887,
       -0.085441273882026661693, 0.035226291885709536603},
      {0.23037781330889650086, 0.71484657055291564709, 0.63088076792985890788, -0.027983769416859854211,
       -0.18703481171909308408, 0.030841381835560763627, 0.032883011666885199735, -0.010597401785069032105},
      {0.16010239797419291448, 0.60382926979718967054, 0.72430852843777292773, 0.13842814590132073151,
       -0.24229488706638203186, -0.032244869584638374648, 0.077571493840045713523, -0.0062414902127982742742,
       -0.012580751999081999469, 0.003335725285473771278},
      {0.11154074335010946362, 0.49462389039845308568, 0.75113390802109535068, 0.31525035170919762909,
       -0.22626469396543982008, -0.12976686756726193556, 0.097501605587323049102, 0.027522865530305728626,
       -0.031582039317486029565, 0.00055384220116149613925, 0.0047772575109455106396, -0.0010773010853084795649},
  };
  return table;
}

// Hölder exponents of db1..db6.
constexpr double kHolder[] = {0.0, 0.550, 1.088, 1.618, 1.969, 2.189};

// Contract axis `a` of tensor t (dims d, axis 0 fastest) with the K x d[a] matrix W.
std::vector<cplx> contract(const std::vector<cplx>& t, const Index& d, int a, const std::vector<double>& W, std::int64_t K) {
  std::int64_t inner = 1, outer = 1;
  for (int b = 0; b < a; ++b) inner *= d[b];
  for (int b = a + 1; b < kMaxDim; ++b) outer *= d[b];
  const std::int64_t da = d[a];
  std::vector<cplx> out(static_cast<std::size_t>(inner * K * outer));
  for (std::int64_t o = 0; o < outer; ++o)
    for (std::int64_t k = 0; k < K; ++k)
      for (std::int64_t i = 0; i < inner; ++i) {
        cplx s{};
        for (std::int64_t c = 0; c < da; ++c) {
          const double w = W[static_cast<std::size_t>(k * da + c)];
          if (w != 0.0) s += w * t[static_cast<std::size_t>(i + inner * (c + da * o))];
        }
        out[static_cast<std::size_t>(i + inner * (k + K * o))] = s;
      }
  return out;
}

}  // namespace

WaveletSystem WaveletSystem::make(const std::string& family) {
  WaveletSystem s;
  s.family = family;
  if (family == "haar" || family == "db1") {
    s.N = 1;
  } else if (family.size() == 3 && family.rfind("db", 0) == 0 && family[2] >= '2' && family[2] <= '6') {
    s.N = family[2] - '0';
  } else {
    throw ParseError("unknown wavelet family: " + family);
  }
  s.h = daubechies_filters()[static_cast<std::size_t>(s.N - 1)];
  const int L = 2 * s.N;
  s.g.resize(static_cast<std::size_t>(L));
  for (int k = 0; k < L; ++k) s.g[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 1.0 : -1.0) * s.h[static_cast<std::size_t>(L - 1 - k)];
  s.holder = kHolder[s.N - 1];
  return s;
}

bool WaveletSystem::meets_hypotheses(int n) const { return N >= n + 1 && holder > n + 1; }

double moment_residual(const WaveletSystem& sys) {
  double worst = 0.0;
  for (int d = 0; d < sys.N; ++d) {
    double s = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < sys.g.size(); ++k) {
      const double m = std::pow(static_cast<double>(k), d);
      s += sys.g[k] * m;
      scale += std::abs(sys.g[k]) * m;
    }
    worst = std::max(worst, std::abs(s) / scale);
  }
  return worst;
}

CumulativeTable::CumulativeTable(const WaveletSystem& sys, int max_level) : N_(sys.N), max_level_(max_level) {
  const int top = 2 * N_ - 1;
  const double r2 = 1.0 / std::sqrt(2.0);
  A_.resize(static_cast<std::size_t>(max_level + 1));
  B_.resize(static_cast<std::size_t>(max_level + 1));
  // Integer points: A(m) = r2 sum_k h_k A(2m - k), A = 0 left of 0 and 1 right of 2N - 1.
  A_[0].assign(static_cast<std::size_t>(top + 1), 0.0);
  A_[0][static_cast<std::size_t>(top)] = 1.0;
  const int U = top - 1;
  if (U > 0) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(U, U);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(U);
    for (int m = 1; m <= U; ++m) {
      for (int k = 0; k < 2 * N_; ++k) {
        const int x = 2 * m - k;
        const double c = r2 * sys.h[static_cast<std::size_t>(k)];
        if (x >= top) {
          rhs(m - 1) += c;
        } else if (x >= 1) {
          M(m - 1, x - 1) -= c;
        }
      }
    }
    const Eigen::VectorXd a = M.fullPivLu().solve(rhs);
    for (int m = 1; m <= U; ++m) A_[0][static_cast<std::size_t>(m)] = a(m - 1);
  }
  auto prevA = [&](int level, std::int64_t num) {
    if (num <= 0) return 0.0;
    if (num >= static_cast<std::int64_t>(top) << level) return 1.0;
    return A_[static_cast<std::size_t>(level)][static_cast<std::size_t>(num)];
  };
  for (int L = 0; L <= max_level; ++L) {
    const std::int64_t count = (static_cast<std::int64_t>(top) << L) + 1;
    if (L > 0) A_[static_cast<std::size_t>(L)].assign(static_cast<std::size_t>(count), 0.0);
    B_[static_cast<std::size_t>(L)].assign(static_cast<std::size_t>(count), 0.0);
    for (std::int64_t i = 0; i < count; ++i) {
      double a = 0.0, b = 0.0;
      for (int k = 0; k < 2 * N_; ++k) {
        // 2x - k at level L - 1 (or level 0 with doubled numerator when L = 0).
        const double v = L > 0 ? prevA(L - 1, i - (static_cast<std::int64_t>(k) << (L - 1))) : prevA(0, 2 * i - k);
        a += sys.h[static_cast<std::size_t>(k)] * v;
        b += sys.g[static_cast<std::size_t>(k)] * v;
      }
      if (L > 0) A_[static_cast<std::size_t>(L)][static_cast<std::size_t>(i)] = r2 * a;
      B_[static_cast<std::size_t>(L)][static_cast<std::size_t>(i)] = r2 * b;
    }
  }
}

double CumulativeTable::at(int kind, int level, std::int64_t num) const {
  require(level >= 0 && level <= max_level_, "cumulative table level out of range");
  const std::int64_t top = static_cast<std::int64_t>(2 * N_ - 1) << level;
  if (num <= 0) return 0.0;
  if (num >= top) return kind == 0 ? 1.0 : 0.0;
  return (kind == 0 ? A_ : B_)[static_cast<std::size_t>(level)][static_cast<std::size_t>(num)];
}

WaveletWindow default_wavelet_window(const GridFunction& f) { return {f.J - 6, f.J}; }

CoefficientSet wavelet_coefficients(const GridFunction& f_in, const WaveletSystem& sys, const WaveletWindow& w) {
  require(w.jlo <= w.jhi && w.jhi <= f_in.J, "wavelet window must lie at or below the resolution");
  const GridFunction f = trim(f_in);
  const int n = f.dim, J = f.J;
  CoefficientSet cs;
  cs.dim = n;
  cs.J = J;
  cs.window = w;
  if (f.is_zero()) return cs;
  const CumulativeTable table(sys, J - w.jlo);
  const std::int64_t span = 2 * sys.N - 1;
  for (int j = w.jlo; j <= w.jhi; ++j) {
    const int L = J - j;
    const std::int64_t s = pow2i(L);
    Index k0{0, 0, 0}, K{1, 1, 1};
    std::array<std::array<std::vector<double>, 2>, kMaxDim> W;
    for (int i = 0; i < n; ++i) {
      k0[i] = floor_div(f.origin[i], s) - (span - 1);
      const std::int64_t k1 = floor_div(f.origin[i] + f.shape[i] - 1, s);
      K[i] = k1 - k0[i] + 1;
      for (int e = 0; e < 2; ++e) {
        auto& M = W[i][e];
        M.assign(static_cast<std::size_t>(K[i] * f.shape[i]), 0.0);
        const double amp = std::exp2(-0.5 * j);
        for (std::int64_t kk = 0; kk < K[i]; ++kk)
          for (std::int64_t c = 0; c < f.shape[i]; ++c) {
            const std::int64_t cell = f.origin[i] + c, k = k0[i] + kk;
            const std::int64_t lo = cell - k * s;
            M[static_cast<std::size_t>(kk * f.shape[i] + c)] = amp * (table.at(e, L, lo + 1) - table.at(e, L, lo));
          }
      }
    }
    for (int ell = 1; ell < (1 << n); ++ell) {
      std::vector<cplx> t = f.values;
      Index d = f.shape;
      for (int i = 0; i < n; ++i) {
        t = contract(t, d, i, W[i][(ell >> i) & 1], K[i]);
        d[i] = K[i];
      }
      for (std::size_t idx = 0; idx < t.size(); ++idx) {
        if (t[idx] == cplx{}) continue;
        WaveletCoefficient wc;
        wc.ell = ell;
        wc.j = j;
        std::size_t r = idx;
        for (int i = 0; i < n; ++i) {
          wc.k[i] = k0[i] + static_cast<std::int64_t>(r % static_cast<std::size_t>(d[i]));
          r /= static_cast<std::size_t>(d[i]);
        }
        wc.value = t[idx];
        cs.coeffs.push_back(wc);
      }
    }
  }
  return cs;
}

GridFunction wavelet_square_function(const CoefficientSet& cs) {
  const int n = cs.dim, J = cs.J;
  if (cs.coeffs.empty()) return GridFunction(n, J, {0, 0, 0}, {1, 1, 1});
  Box box;
  box.dim = n;
  box.scale = J;
  bool first = true;
  for (const auto& c : cs.coeffs) {
    const std::int64_t s = pow2i(J - c.j);
    for (int i = 0; i < n; ++i) {
      const std::int64_t lo = c.k[i] * s, hi = lo + s;
      box.lo[i] = first ? lo : std::min(box.lo[i], lo);
      box.hi[i] = first ? hi : std::max(box.hi[i], hi);
    }
    first = false;
  }
  GridFunction out = zeros_like_box(n, J, box);
  std::vector<double> acc(out.size(), 0.0);
  for (const auto& c : cs.coeffs) {
    const std::int64_t s = pow2i(J - c.j);
    const double v = std::norm(c.value) * std::exp2(c.j * n);
    Index lo{0, 0, 0}, ext{1, 1, 1};
    for (int i = 0; i < n; ++i) {
      lo[i] = c.k[i] * s - out.origin[i];
      ext[i] = s;
    }
    for (std::int64_t z = 0; z < ext[2]; ++z)
      for (std::int64_t y = 0; y < ext[1]; ++y)
        for (std::int64_t x = 0; x < ext[0]; ++x) acc[out.flat({lo[0] + x, lo[1] + y, lo[2] + z})] += v;
  }
  for (std::size_t i = 0; i < acc.size(); ++i) out.values[i] = std::sqrt(acc[i]);
  return out;
}

GridFunction wavelet_square_function(const GridFunction& f, const WaveletSystem& sys, const WaveletWindow& w) {
  return wavelet_square_function(wavelet_coefficients(f, sys, w));
}

GridFunction high_pass(const GridFunction& f, int k) {
  const GridFunction e = conditional_expectation(f, k);
  return f - refine(e, f.J);
}

double haar_gram_error(int n, int jmax) {
  const int R = jmax + 1;
  const std::int64_t side = pow2i(R);
  struct Fn {
    int j;
    std::vector<int> sign;  // on the [0,1)^n grid at resolution R
  };
  std::vector<Fn> fns;
  std::int64_t cells = 1;
  for (int i = 0; i < n; ++i) cells *= side;
  for (int j = 0; j <= jmax; ++j) {
    std::int64_t positions = 1;
    for (int i = 0; i < n; ++i) positions *= pow2i(j);
    for (int ell = 1; ell < (1 << n); ++ell)
      for (std::int64_t p = 0; p < positions; ++p) {
        Fn fn{j, std::vector<int>(static_cast<std::size_t>(cells), 0)};
        for (std::int64_t c = 0; c < cells; ++c) {
          int sg = 1;
          std::int64_t cr = c, pr = p;
          for (int i = 0; i < n; ++i) {
            const std::int64_t ci = cr % side, ki = pr % pow2i(j);
            cr /= side;
            pr /= pow2i(j);
            if ((ci >> (R - j)) != ki) {
              sg = 0;
              break;
            }
            if ((ell >> i) & 1) sg *= ((ci >> (R - j - 1)) & 1) ? -1 : 1;
          }
          fn.sign[static_cast<std::size_t>(c)] = sg;
        }
        fns.push_back(std::move(fn));
      }
  }
  double worst = 0.0;
  for (std::size_t a = 0; a < fns.size(); ++a)
    for (std::size_t b = 0; b < fns.size(); ++b) {
      std::int64_t S = 0;
      for (std::int64_t c = 0; c < cells; ++c) S += fns[a].sign[static_cast<std::size_t>(c)] * fns[b].sign[static_cast<std::size_t>(c)];
      // <u, v> = 2^{(j + j') n / 2} 2^{-R n} S
      const double g = std::exp2(0.5 * (fns[a].j + fns[b].j) * n - R * n) * static_cast<double>(S);
      worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

double dwt_gram_error(const WaveletSystem& sys, int L, int levels) {
  const std::int64_t len = pow2i(L);
  require(pow2i(L - levels) >= static_cast<std::int64_t>(sys.h.size()), "DWT length too short for the filter");
  Eigen::MatrixXd W(len, len);
  for (std::int64_t col = 0; col < len; ++col) {
    std::vector<double> a(static_cast<std::size_t>(len), 0.0), out(static_cast<std::size_t>(len), 0.0);
    a[static_cast<std::size_t>(col)] = 1.0;
    std::int64_t m = len;
    for (int lv = 0; lv < levels; ++lv) {
      std::vector<double> lo(static_cast<std::size_t>(m / 2)), hi(static_cast<std::size_t>(m / 2));
      for (std::int64_t k = 0; k < m / 2; ++k) {
        double s = 0.0, d = 0.0;
        for (std::size_t t = 0; t < sys.h.size(); ++t) {
          const double v = a[static_cast<std::size_t>((2 * k + static_cast<std::int64_t>(t)) % m)];
          s += sys.h[t] * v;
          d += sys.g[t] * v;
        }
        lo[static_cast<std::size_t>(k)] = s;
        hi[static_cast<std::size_t>(k)] = d;
      }
      for (std::int64_t k = 0; k < m / 2; ++k) out[static_cast<std::size_t>(m / 2 + k)] = hi[static_cast<std::size_t>(k)];
      a = lo;
      m /= 2;
    }
    for (std::int64_t k = 0; k < m; ++k) out[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)];
    for (std::int64_t r = 0; r < len; ++r) W(r, col) = out[static_cast<std::size_t>(r)];
  }
  const Eigen::MatrixXd G = W * W.transpose() - Eigen::MatrixXd::Identity(len, len);
  return G.cwiseAbs().maxCoeff();
}

EquivalenceReport wavelet_equivalence_check(const std::vector<GridFunction>& corpus, const WaveletSystem& sys,
                                            const SpaceParams& sp) {
  EquivalenceReport rep;
  rep.in_hypotheses = !corpus.empty() && sys.meets_hypotheses(corpus.front().dim);
  std::vector<double> ratios(corpus.size(), -1.0);
  parallel_for(corpus.size(), [&](std::size_t i) {
    const GridFunction& f = corpus[i];
    const WaveletWindow w = default_wavelet_window(f);
    const GridFunction g = high_pass(f, w.jlo);
    const double base = bm_value(g, sp);
    if (base == 0.0) return;
    ratios[i] = bm_value(wavelet_square_function(g, sys, w), sp) / base;
  });
  for (double r : ratios)
    if (r >= 0.0) rep.ratios.push_back(r);
  if (!rep.ratios.empty()) {
    rep.lo = *std::min_element(rep.ratios.begin(), rep.ratios.end());
    rep.hi = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  }
  return rep;
}

}  // namespace bmkit
