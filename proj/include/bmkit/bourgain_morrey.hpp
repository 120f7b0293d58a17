#pragma once

#include <string>
#include <vector>

#include "bmkit/mixed_lebesgue.hpp"

namespace bmkit {

struct SpaceParams {
  ExponentVector p;
  double t = 1.0;
  double r = 1.0;

  int dim() const { return static_cast<int>(p.size()); }
  /// 1/t - (1/n) sum 1/p_i, the exponent of |Q| in the cube weight.
  double delta() const { return recip(t) - sum_recip(p) / dim(); }
  bool admissible() const { return sum_recip(p) >= dim() * recip(t); }
  bool nontrivial() const;
};

enum class Divergence { none, coarse_tail, fine_tail, both };
std::string to_string(Divergence d);

struct NormBreakdown {
  int jmin = 0;  // first scale summed directly
  int jmax = 0;  // last scale summed directly (the resolution J)
  std::vector<double> per_scale;  // sum of a_Q^r per scale (r < inf) or max of a_Q (r = inf)
  double coarse_tail = 0.0;
  double fine_tail = 0.0;
  double total = 0.0;
  Divergence divergence = Divergence::none;
};

NormBreakdown bm_norm(const GridFunction& f, const SpaceParams& sp);
NormBreakdown bm_norm_shifted(const GridFunction& f, const SpaceParams& sp, const std::array<int, kMaxDim>& shift);
double bm_value(const GridFunction& f, const SpaceParams& sp);

/// Sum over standard cubes with scale in [jlo, jhi] only.
double bm_norm_window(const GridFunction& f, const SpaceParams& sp, int jlo, int jhi);

struct WeightedNorm {
  double weighted = 0.0;
  double plain = 0.0;  // same window, no weight
  int jlo = 0, jhi = 0;
};
WeightedNorm bm_norm_weighted(const GridFunction& f, const SpaceParams& sp, double eta);

/// One-dimensional maximal function of chi_[a,b] at x.
double maximal_interval_indicator(double a, double b, double x);

/// Pointwise l^u aggregate (sum |f_k|^u)^{1/u} on a common grid.
GridFunction lu_aggregate(const std::vector<GridFunction>& fs, double u);
double bm_norm_vector(const std::vector<GridFunction>& fs, const SpaceParams& sp, double u);

struct LawCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};
LawCheck check_dilation(const GridFunction& f, const SpaceParams& sp, int m);
LawCheck check_translation(const GridFunction& f, const SpaceParams& sp, const Index& k, int scale);

struct ApproximationReport {
  std::vector<int> k;
  std::vector<double> residual;
  bool final_zero = false;
  bool decreased = false;
};
ApproximationReport approximation_check(const GridFunction& f, const SpaceParams& sp, const std::vector<int>& ks);

/// Scale of the smallest standard dyadic cube containing the support, if any; used to pick lattice shifts
/// that preserve the dyadic structure. Returns false when the support straddles a coordinate hyperplane.
bool dyadic_hull_scale(const GridFunction& f, int& scale);

/// Support scale: -ceil(log2 of the longest support side).
int support_scale(const GridFunction& f);

}  // namespace bmkit
