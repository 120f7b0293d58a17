#pragma once

#include <vector>

#include "bmkit/bourgain_morrey.hpp"

namespace bmkit {

/// Output box used by the maximal operators: the support box grown by `pad` cells
/// (pad < 0 selects the longest support side).
Box maximal_output_box(const GridFunction& f, std::int64_t pad = -1);

/// Sup over cubes of grid D_a containing the cell midpoint of the average of |f|.
GridFunction dyadic_maximal(const GridFunction& f, const std::array<int, kMaxDim>& shift = {0, 0, 0}, std::int64_t pad = -1);

/// Sum of the 3^n shifted-grid dyadic maximal functions.
GridFunction hl_maximal_proxy(const GridFunction& f, std::int64_t pad = -1);

/// One-dimensional uncentered maximal function of a step function.
/// Breakpoints s_0 < ... < s_N, value v_k on [s_k, s_{k+1}).
struct StepFunction {
  std::vector<double> s;
  std::vector<double> v;
};
/// Sup of the average of |g| over intervals [a, b] with a <= xl, b >= xr.
double maximal_1d(const StepFunction& g, double xl, double xr);

/// Midpoint values plus a cellwise bracket lo <= M f <= hi.
struct Bracketed {
  GridFunction mid, lo, hi;
};
/// M_(n) ... M_(1) |f|, one coordinate at a time.
Bracketed iterated_maximal(const GridFunction& f, std::int64_t pad = -1);

/// sup_k E_k |f| over the standard grid.
GridFunction martingale_maximal(const GridFunction& f, std::int64_t pad = -1);

struct FractionalResult {
  GridFunction value;          // I_alpha f at cell centers
  double quadrature_error = 0.0;  // estimated absolute error bound (0 when exact)
};
/// I_alpha f(x) = int |x - y|^{alpha - n} f(y) dy at the cell centers of the maximal output box.
FractionalResult fractional_integral(const GridFunction& f, double alpha, std::int64_t pad = -1);
/// Point evaluation (n = 1 only, exact).
double fractional_integral_at(const GridFunction& f, double alpha, double x);

enum class MaximalKind { dyadic, proxy, iterated, martingale };
GridFunction apply_maximal(const GridFunction& f, MaximalKind kind, std::int64_t pad = -1);

/// l^u aggregate of the memberwise maximal functions.
GridFunction vector_maximal(const std::vector<GridFunction>& fs, double u, MaximalKind kind = MaximalKind::dyadic);
/// Doubly indexed family: l^{u1} over the inner index, then l^{u2}.
GridFunction vector_maximal(const std::vector<std::vector<GridFunction>>& fs, double u1, double u2,
                            MaximalKind kind = MaximalKind::dyadic);
GridFunction lu_aggregate(const std::vector<std::vector<GridFunction>>& fs, double u1, double u2);

}  // namespace bmkit
