#pragma once

#include <vector>

#include "bmkit/common.hpp"

namespace bmkit {

/// Half-open cube of side 2^-scale. Along axis i its lower corner is
/// 2^-scale * (pos[i] + sigma(scale) * shift[i] / 3), sigma(j) = (-1)^j.
/// shift = 0 is the standard dyadic grid.
struct DyadicCube {
  int dim = 1;
  int scale = 0;
  Index pos{0, 0, 0};
  std::array<int, kMaxDim> shift{0, 0, 0};

  bool operator==(const DyadicCube&) const = default;
  bool shifted() const { return shift[0] != 0 || shift[1] != 0 || shift[2] != 0; }
};

inline int grid_sign(int scale) { return (scale % 2 == 0) ? 1 : -1; }

/// Lower corner along `axis` in units of 2^-L / 3. Requires L >= scale.
std::int64_t lower_units(const DyadicCube& c, int axis, int L);

/// Side length in units of 2^-L / 3.
inline std::int64_t side_units(const DyadicCube& c, int L) { return 3 * pow2i(L - c.scale); }

/// Axis-aligned box [lo, hi) in units of 2^-scale.
struct Box {
  int dim = 1;
  int scale = 0;
  Index lo{0, 0, 0};
  Index hi{0, 0, 0};
};

struct CubeRange {
  int jmin = 0;
  int jmax = 0;
  Box box;
  std::array<int, kMaxDim> shift{0, 0, 0};
};

/// Cube with rational corner corner_num/den and side side_num/den.
struct RationalCube {
  int dim = 1;
  Index corner_num{0, 0, 0};
  std::int64_t side_num = 1;
  std::int64_t den = 1;
};

DyadicCube parent(const DyadicCube& c, int k = 1);
std::vector<DyadicCube> children(const DyadicCube& c);

/// A cube of one of the 3^n shifted grids that contains q and has side at most 6 times that of q.
DyadicCube cover_by_shifted(const RationalCube& q);

bool contains(const DyadicCube& outer, const DyadicCube& inner);
bool contains(const DyadicCube& outer, const RationalCube& inner);

/// Cubes of the range's grid with scale in [jmin, jmax] meeting the box, scale-major then lexicographic
/// (last axis slowest).
std::vector<DyadicCube> enumerate(const CubeRange& range);

/// Range of positions m along one axis for cubes at `scale` meeting [lo, hi) given in units of 2^-L / 3.
std::pair<std::int64_t, std::int64_t> position_range(int scale, int shift, int L, std::int64_t lo, std::int64_t hi);

}  // namespace bmkit
