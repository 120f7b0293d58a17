#pragma once

#include <vector>

#include "bmkit/grid_function.hpp"

namespace bmkit {

/// Per-coordinate exponents in (0, inf]; integration runs over x_1 first.
using ExponentVector = std::vector<double>;

double sum_recip(const ExponentVector& p);
ExponentVector conjugate(const ExponentVector& p);
void check_exponents(const ExponentVector& p, int dim);

/// Cells of one axis met by an interval, with overlap measured as a fraction of the interval.
struct AxisOverlap {
  std::vector<std::int64_t> rel;  // relative cell index in the function's box
  std::vector<double> frac;
};

/// Overlaps of the cube with the box cells along every axis (empty if disjoint from the box).
std::array<AxisOverlap, kMaxDim> cube_overlaps(const GridFunction& f, const DyadicCube& c);

/// Iterated weighted power mean of |values| over a tensor block.
/// weights[i] has dims[i] entries; axis 0 is reduced first.
double iterated_mean(std::vector<double> absvals, const Index& dims, const std::array<std::vector<double>, kMaxDim>& weights,
                     const ExponentVector& p, int dim);

/// ||f chi_Q||_p / |Q|^{(1/n) sum 1/p_i}: the mixed norm with respect to normalized measure on Q.
double normalized_local_norm(const GridFunction& f, const ExponentVector& p, const DyadicCube& q);

double mixed_norm(const GridFunction& f, const ExponentVector& p);
double mixed_norm_on_cube(const GridFunction& f, const ExponentVector& p, const DyadicCube& q);

struct InequalityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double tolerance = 0.0;  // projection tolerance where applicable
};

/// ||f g||_1 against ||f||_p ||g||_p'.
InequalityResult holder_check(const GridFunction& f, const GridFunction& g, const ExponentVector& p);

/// Cell averages of f * g at resolution J + kappa (exact).
GridFunction convolve_projected(const GridFunction& f, const GridFunction& g, int kappa = 3);

/// ||f * g||_s against ||f||_p ||g||_q with 1/p + 1/q = 1 + 1/s componentwise.
InequalityResult young_check(const GridFunction& f, const GridFunction& g, const ExponentVector& p, const ExponentVector& q,
                             int kappa = 3);

/// Integral of f g (bilinear, no conjugation).
cplx pairing(const GridFunction& f, const GridFunction& g);

}  // namespace bmkit
