#pragma once

#include <vector>

#include "bmkit/bourgain_morrey.hpp"

namespace bmkit {

/// Requires 1 < p_i < inf and 1 < n / sum(1/p_i) < t < r < inf.
void check_block_regime(const SpaceParams& sp);

struct Block {
  DyadicCube support;
  GridFunction function;
};

struct BlockDecomposition {
  std::vector<double> lambda;
  std::vector<Block> blocks;
  /// l^{r'} norm of lambda.
  double weight_norm = 0.0;
};

/// Largest admissible conjugate mixed norm of a block on a cube of the given scale.
double block_bound(const SpaceParams& sp, int scale);
bool is_normalized_block(const Block& b, const SpaceParams& sp, double tol = 1e-12);
GridFunction reconstruct(const BlockDecomposition& d);

double slice_norm(const GridFunction& f, const SpaceParams& sp, int j);

struct ScaleWindow {
  int jlo = 0;
  int jhi = 0;
};
/// Default window [support scale - 4, J + 2].
ScaleWindow default_window(const GridFunction& f);

struct UpperBound {
  double value = 0.0;
  int scale = 0;
  std::vector<double> slices;  // per scale of the window
  ScaleWindow window;
};
UpperBound block_norm_upper(const GridFunction& f, const SpaceParams& sp);
UpperBound block_norm_upper(const GridFunction& f, const SpaceParams& sp, const ScaleWindow& w);

/// Single-scale decomposition at scale j.
BlockDecomposition decompose_at_scale(const GridFunction& f, const SpaceParams& sp, int j);
/// Decomposition realizing the upper bound.
BlockDecomposition finite_decomposition(const GridFunction& f, const SpaceParams& sp);

struct SolverConfig {
  int max_iterations = 2000;
  int stall_window = 50;
  double stall_tol = 1e-9;
  double step0 = 0.5;
};

struct SplitWeights {
  ScaleWindow window;
  GridFunction support;  // trimmed |f|
  std::vector<std::vector<double>> theta;  // [scale][cell]
};

struct InfimumResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  SplitWeights weights;
};

/// Objective (sum_j slice_norm(theta_j |f|)^{r'})^{1/r'} for given weights.
double split_objective(const SplitWeights& w, const SpaceParams& sp);
InfimumResult block_norm_infimum(const GridFunction& f, const SpaceParams& sp, const SolverConfig& cfg = {});

struct SearchConfig {
  int restarts = 8;
  int evaluations_per_restart = 200;
  std::uint64_t seed = 0;
};

struct LowerBound {
  double value = 0.0;
  GridFunction witness;  // f with bm_norm(f) = 1
  int start = 0;         // index of the winning start field
};

/// Norming function of |g| in the mixed space dual to exponents q: h >= 0 with ||h||_{q'} = 1 and int h |g| = ||g||_q.
GridFunction norming_function(const GridFunction& g, const ExponentVector& q);

/// The explicit dual field: sum over the cubes of scale j of |Q|^{-delta} lambda_Q^{r'-1} times the norming function of g chi_Q.
GridFunction dual_witness(const GridFunction& g, const SpaceParams& sp, int j);

LowerBound block_norm_lower(const GridFunction& g, const SpaceParams& sp, const SearchConfig& cfg = {});

}  // namespace bmkit
