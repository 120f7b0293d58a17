#pragma once

#include <vector>

#include "bmkit/common.hpp"
#include "bmkit/dyadic.hpp"

namespace bmkit {

/// Piecewise-constant function on the cells of resolution J inside a box, zero outside.
/// Cell with absolute index k covers prod_i [k_i 2^-J, (k_i + 1) 2^-J).
/// Storage is dense with axis 0 varying fastest.
struct GridFunction {
  int dim = 1;
  int J = 0;
  Index origin{0, 0, 0};
  Index shape{1, 1, 1};
  std::vector<cplx> values;

  GridFunction() = default;
  GridFunction(int dim_, int J_, Index origin_, Index shape_);

  std::size_t size() const { return values.size(); }
  double h() const { return std::ldexp(1.0, -J); }
  std::size_t flat(const Index& rel) const {
    return static_cast<std::size_t>(rel[0] + shape[0] * (rel[1] + shape[1] * rel[2]));
  }
  Index unflat(std::size_t idx) const;
  cplx& at_rel(const Index& rel) { return values[flat(rel)]; }
  const cplx& at_rel(const Index& rel) const { return values[flat(rel)]; }
  /// Value at an absolute cell index (zero outside the box).
  cplx at_abs(const Index& k) const;
  bool inside_abs(const Index& k) const;
  Box box() const;
  bool is_zero() const;
  double max_abs() const;
};

GridFunction zeros_like_box(int dim, int J, const Box& box);

GridFunction indicator(const DyadicCube& q, int J);
GridFunction restrict_to(const GridFunction& f, const DyadicCube& q);
/// x -> f(2^m x).
GridFunction dilate_dyadic(const GridFunction& f, int m);
/// x -> f(x - 2^-scale k); requires scale <= J.
GridFunction translate_lattice(const GridFunction& f, const Index& k, int scale);
/// Average over the standard cubes of scale k; output resolution max(k, 0).
GridFunction conditional_expectation(const GridFunction& f, int k);

/// Same function at a finer resolution.
GridFunction refine(const GridFunction& f, int J);
/// Same function on a larger box (zero-filled).
GridFunction embed(const GridFunction& f, const Box& box);
/// Smallest box containing all nonzero cells (f itself if zero).
GridFunction trim(const GridFunction& f);
/// Common resolution and box for two functions.
std::pair<GridFunction, GridFunction> align(const GridFunction& a, const GridFunction& b);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction scaled(const GridFunction& f, cplx c);
GridFunction abs_of(const GridFunction& f);
GridFunction map_values(const GridFunction& f, const std::function<cplx(cplx)>& op);

/// Box union at the finest common resolution.
Box box_union(const Box& a, const Box& b);
/// Box expressed at resolution J (J >= box.scale).
Box box_at(const Box& b, int J);
/// Box grown by `pad` cells on every side.
Box pad_box(const Box& b, std::int64_t pad);

/// Midpoint of a cell in units of 2^-J / 6 (integer).
inline std::int64_t midpoint_units6(std::int64_t k) { return 6 * k + 3; }

}  // namespace bmkit
