#pragma once

#include <functional>
#include <vector>

#include "bmkit/bourgain_morrey.hpp"

namespace bmkit {

/// Smooth step: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x);

/// Radial profile psi (1 on |xi| <= 2, 0 on |xi| >= 4) and bands phi_j = psi(2^-j .) - psi(2^{1-j} .).
struct Partition {
  double inner = 2.0;
  double outer = 4.0;
  double psi(double r) const;
  double phi(int j, double r) const;
};

struct SpectralConfig {
  int pad_factor = 2;
  Partition partition;
};

using Frequency = std::array<double, kMaxDim>;
using Multiplier = std::function<cplx(const Frequency&)>;

/// Periodized power-of-two box centered on the stored box of f, at least pad_factor times larger per axis.
Box spectral_box(const GridFunction& f, int pad_factor);

/// Discrete transform of the grid values (treated as samples) on the spectral box.
struct Spectrum {
  int dim = 1;
  int J = 0;
  Box box;
  Index M{1, 1, 1};
  std::vector<cplx> data;

  Frequency frequency(std::size_t idx) const;
};
Spectrum forward(const GridFunction& f, int pad_factor);
GridFunction inverse(const Spectrum& s, const Multiplier& m);

/// Relative round-trip error of forward + inverse.
double roundtrip_error(const GridFunction& f, int pad_factor);

GridFunction apply_multiplier(const GridFunction& f, const Multiplier& m, const SpectralConfig& cfg = {});

struct BandWindow {
  int jlo = 0;
  int jhi = 0;
};
/// Bands from the lowest nonzero frequency of the spectral box up to 2^{j+2} <= Nyquist.
BandWindow band_window(const GridFunction& f, const SpectralConfig& cfg = {});
/// Largest |sum_j phi_j - 1| over [2^{jlo+1}, 2^{jhi+1}] at `samples` log-spaced radii.
double partition_unity_error(const BandWindow& w, const Partition& part, int samples = 4096);

GridFunction band_project(const GridFunction& f, int j, const SpectralConfig& cfg = {});
std::vector<GridFunction> band_projections(const GridFunction& f, const BandWindow& w, const SpectralConfig& cfg = {});
GridFunction lp_square_function(const GridFunction& f, const SpectralConfig& cfg = {});

/// sup_y |band_j(x - y)| / (1 + 2^j |y|)^a over grid offsets.
GridFunction peetre_maximal(const GridFunction& f, int j, double a, const SpectralConfig& cfg = {});

/// Multiplier exp(-4 pi^2 alpha |xi|^2).
GridFunction heat(const GridFunction& f, double alpha, const SpectralConfig& cfg = {});
struct HeatCheck {
  std::vector<double> alpha;
  std::vector<double> residual;
  bool decreasing = true;
};
HeatCheck heat_characterization_check(const GridFunction& f, const std::vector<double>& alphas, const SpaceParams& sp,
                                      const SpectralConfig& cfg = {});

/// Multiplier |xi|^s, zero at the origin.
GridFunction fractional_laplacian(const GridFunction& f, double s, const SpectralConfig& cfg = {});
/// Multiplier -i xi_k / |xi|.
GridFunction riesz(const GridFunction& f, int k, const SpectralConfig& cfg = {});
/// Multiplier sum_j eps_j phi_j over the band window (eps indexed from w.jlo).
GridFunction band_sign(const GridFunction& f, const std::vector<int>& eps, const BandWindow& w, const SpectralConfig& cfg = {});

struct TLParams {
  SpaceParams sp;
  double s = 0.0;
  double q = 2.0;
};
double tl_norm(const GridFunction& f, const TLParams& tp, const SpectralConfig& cfg = {});
double besov_norm(const GridFunction& f, const TLParams& tp, const SpectralConfig& cfg = {});

struct ChainRuleParams {
  SpaceParams sp1;  // G(u)
  SpaceParams sp2;  // u
  double s = 0.6;
  double q = 2.0;
};
struct ChainRuleReport {
  double lhs = 0.0;     // TL norm of u^2 over the combined exponents
  double g_norm = 0.0;  // BM norm of 2|u|
  double u_norm = 0.0;  // TL norm of u
  double ratio = 0.0;
  SpaceParams sp;       // combined exponents
};
/// Checks the exponent relations and the smoothness window, then measures the ratio for F(x) = x^2, G(x) = 2|x|.
ChainRuleReport chain_rule_check(const GridFunction& u, const ChainRuleParams& cp, const SpectralConfig& cfg = {});

}  // namespace bmkit
