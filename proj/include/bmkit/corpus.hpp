#pragma once

#include <random>
#include <string>
#include <vector>

#include "bmkit/bourgain_morrey.hpp"

namespace bmkit {

/// Independent generator stream keyed by (seed, stream, salt).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt = 0);
/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& g);
double uniform(std::mt19937_64& g, double a, double b);
std::int64_t uniform_int(std::mt19937_64& g, std::int64_t a, std::int64_t b);  // inclusive

/// Families: random-cells, random-block-sums, blocks, band-limited, gaussians.
struct FunctionCorpus {
  std::uint64_t seed = 0;
  int count = 1;
  std::string family = "random-cells";
  int dim = 1;
  int J0 = 2;  // resolution at which the random structure lives
  int J = 4;   // output resolution
  /// Support box in units of 1 (scale 0). Defaults to [0, 2)^n for the cell families and [-7, 7)^n for the smooth ones.
  std::int64_t lo = 0, hi = 0;
  /// Primal parameters used to normalize the "blocks" family.
  SpaceParams params;
};

const std::vector<std::string>& corpus_families();
std::vector<GridFunction> generate_corpus(const FunctionCorpus& spec);

/// exp(-pi |x - c|^2 / w^2) sampled at the cell centers of [lo, hi)^n.
GridFunction sampled_gaussian(int dim, int J, std::int64_t lo, std::int64_t hi, const std::array<double, kMaxDim>& c, double w);

}  // namespace bmkit
