#pragma once

#include <string>
#include <vector>

#include "bmkit/bourgain_morrey.hpp"

namespace bmkit {

/// Orthonormal compactly supported wavelet: haar (= db1) or db2..db6.
/// phi = sqrt2 sum h_k phi(2x - k), psi = sqrt2 sum g_k phi(2x - k), g_k = (-1)^k h_{2N-1-k}; supports [0, 2N-1].
struct WaveletSystem {
  std::string family;
  int N = 1;  // vanishing moments
  std::vector<double> h, g;
  double holder = 0.0;  // known Hölder exponent of psi

  static WaveletSystem make(const std::string& family);
  /// C^{n+1} with moments of order n, as the characterization requires.
  bool meets_hypotheses(int n) const;
};

/// Largest |sum_k g_k k^d| for d < N, relative to sum |g_k| k^d.
double moment_residual(const WaveletSystem& sys);

/// Exact integrals of the scaling function and wavelet: A(x) = int_{-inf}^x phi, B(x) = int_{-inf}^x psi,
/// tabulated at dyadic points with denominator 2^level.
class CumulativeTable {
 public:
  CumulativeTable(const WaveletSystem& sys, int max_level);
  /// A or B (kind 0 or 1) at num / 2^level.
  double at(int kind, int level, std::int64_t num) const;

 private:
  int N_;
  int max_level_;
  std::vector<std::vector<double>> A_, B_;
};

struct WaveletWindow {
  int jlo = 0;
  int jhi = 0;
};
/// Default window [J - 6, J].
WaveletWindow default_wavelet_window(const GridFunction& f);

struct WaveletCoefficient {
  int ell = 1;  // bitmask: axis i uses psi when bit i is set, phi otherwise
  int j = 0;
  Index k{0, 0, 0};
  cplx value;
};
/// Canonical order: scale, then ell, then position with axis 0 fastest.
struct CoefficientSet {
  int dim = 1;
  int J = 0;
  WaveletWindow window;
  std::vector<WaveletCoefficient> coeffs;
};

CoefficientSet wavelet_coefficients(const GridFunction& f, const WaveletSystem& sys, const WaveletWindow& w);
GridFunction wavelet_square_function(const CoefficientSet& c);
GridFunction wavelet_square_function(const GridFunction& f, const WaveletSystem& sys, const WaveletWindow& w);

/// f - E_k f at the resolution of f.
GridFunction high_pass(const GridFunction& f, int k);

/// Max |G - I| for the Haar system on [0,1)^n at scales [0, jmax], computed from exact piecewise-constant products.
double haar_gram_error(int n, int jmax);
/// Max |W W^T - I| for the periodic multilevel analysis matrix of length 2^L.
double dwt_gram_error(const WaveletSystem& sys, int L, int levels);

struct EquivalenceReport {
  std::vector<double> ratios;  // bm(S g) / bm(g), g = high_pass(f, jlo)
  double lo = 0.0, hi = 0.0;
  bool in_hypotheses = false;
};
EquivalenceReport wavelet_equivalence_check(const std::vector<GridFunction>& corpus, const WaveletSystem& sys,
                                            const SpaceParams& sp);

}  // namespace bmkit
