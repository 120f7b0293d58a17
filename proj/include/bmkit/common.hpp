#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmkit {

constexpr int kMaxDim = 3;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Index = std::array<std::int64_t, kMaxDim>;
using cplx = std::complex<double>;

/// Violated mathematical precondition (CLI exit code 3).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or usage (CLI exit code 2).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t pow2i(int k) { return std::int64_t{1} << k; }

/// Pairwise (tree) summation; the result depends only on the order of the input.
double pairwise_sum(std::span<const double> x);
double pairwise_sum(const std::vector<double>& x);

/// Reciprocal of an exponent, with 1/inf = 0.
inline double recip(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

/// Hölder conjugate exponent.
inline double conjugate(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

/// Gauss-Legendre nodes and weights on [0,1].
struct Quadrature {
  std::vector<double> x, w;
};
const Quadrature& gauss_legendre01(int order);

/// Worker count from BMKIT_THREADS (or the override set by set_thread_cap).
int thread_cap();
void set_thread_cap(int cap);  // 0 restores the environment default

/// Runs body(i) for i in [0, count) on up to thread_cap() workers; nested calls run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace bmkit
