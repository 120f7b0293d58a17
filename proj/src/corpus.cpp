#include "bmkit/corpus.hpp"

#include <numbers>

#include "bmkit/block_predual.hpp"

namespace bmkit {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& g, double a, double b) { return a + (b - a) * uniform01(g); }

std::int64_t uniform_int(std::mt19937_64& g, std::int64_t a, std::int64_t b) {
  const auto span = static_cast<std::uint64_t>(b - a) + 1;
  return a + static_cast<std::int64_t>(g() % span);
}

const std::vector<std::string>& corpus_families() {
  static const std::vector<std::string> names = {"random-cells", "random-block-sums", "blocks", "band-limited",
                                                 "gaussians"};
  return names;
}

namespace {

std::uint64_t family_salt(const std::string& family) {
  const auto& names = corpus_families();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == family) return i + 1;
  throw ParseError("unknown corpus family: " + family);
}

Box unit_box(int dim, int J, std::int64_t lo, std::int64_t hi) {
  Box b;
  b.dim = dim;
  b.scale = J;
  for (int i = 0; i < dim; ++i) {
    b.lo[i] = lo * pow2i(J);
    b.hi[i] = hi * pow2i(J);
  }
  return b;
}

DyadicCube random_cube(std::mt19937_64& g, int dim, int j, std::int64_t lo, std::int64_t hi) {
  DyadicCube q;
  q.dim = dim;
  q.scale = j;
  for (int i = 0; i < dim; ++i) q.pos[i] = uniform_int(g, lo * pow2i(j), hi * pow2i(j) - 1);
  return q;
}

template <class F>
GridFunction sample_centers(int dim, int J, std::int64_t lo, std::int64_t hi, F&& fn) {
  GridFunction f = zeros_like_box(dim, J, unit_box(dim, J, lo, hi));
  const double h = f.h();
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const Index rel = f.unflat(idx);
    std::array<double, kMaxDim> x{0, 0, 0};
    for (int i = 0; i < dim; ++i) x[i] = (static_cast<double>(rel[i] + f.origin[i]) + 0.5) * h;
    f.values[idx] = fn(x);
  }
  return f;
}

GridFunction random_cells(std::mt19937_64& g, const FunctionCorpus& s) {
  GridFunction f = zeros_like_box(s.dim, s.J0, unit_box(s.dim, s.J0, s.lo, s.hi));
  for (auto& v : f.values) {
    const double keep = uniform01(g);
    const double x = uniform(g, -1.0, 1.0);
    v = keep < 0.25 ? 0.0 : x;
  }
  return refine(f, s.J);
}

GridFunction random_block_sum(std::mt19937_64& g, const FunctionCorpus& s) {
  GridFunction f = zeros_like_box(s.dim, s.J, unit_box(s.dim, s.J, s.lo, s.hi));
  const auto terms = uniform_int(g, 1, 3);
  for (std::int64_t t = 0; t < terms; ++t) {
    const int j = static_cast<int>(uniform_int(g, 0, s.J0));
    const DyadicCube q = random_cube(g, s.dim, j, s.lo, s.hi);
    const double a = uniform(g, 0.5, 2.0) * (uniform01(g) < 0.5 ? -1.0 : 1.0);
    f = f + scaled(indicator(q, s.J), a);
  }
  return embed(f, unit_box(s.dim, s.J, s.lo, s.hi));
}

GridFunction random_block(std::mt19937_64& g, const FunctionCorpus& s) {
  const int j = static_cast<int>(uniform_int(g, 0, std::max(0, s.J0 - 1)));
  const DyadicCube q = random_cube(g, s.dim, j, s.lo, s.hi);
  GridFunction b = indicator(q, s.J0);
  for (auto& v : b.values) v *= uniform(g, 0.1, 1.0);
  const double norm = mixed_norm(b, conjugate(s.params.p));
  b = scaled(b, block_bound(s.params, j) / norm);
  return refine(b, s.J);
}

GridFunction band_limited(std::mt19937_64& g, const FunctionCorpus& s) {
  struct Wave {
    double amp, phase;
    std::array<double, kMaxDim> xi{0, 0, 0}, c{0, 0, 0};
  };
  constexpr double kSigma = 2.0;
  const auto terms = uniform_int(g, 1, 2);
  std::vector<Wave> waves;
  for (std::int64_t t = 0; t < terms; ++t) {
    Wave w;
    w.amp = uniform(g, 0.5, 1.5);
    w.phase = uniform(g, 0.0, 2.0 * std::numbers::pi);
    const double mag = uniform(g, 1.7, 2.3);
    // Direction from spherical angles.
    const double th = uniform(g, 0.0, 2.0 * std::numbers::pi), ph = std::acos(uniform(g, -1.0, 1.0));
    if (s.dim == 1) {
      w.xi[0] = mag;
    } else if (s.dim == 2) {
      w.xi = {mag * std::cos(th), mag * std::sin(th), 0.0};
    } else {
      w.xi = {mag * std::sin(ph) * std::cos(th), mag * std::sin(ph) * std::sin(th), mag * std::cos(ph)};
    }
    for (int i = 0; i < s.dim; ++i) w.c[i] = uniform(g, -0.5, 0.5);
    waves.push_back(w);
  }
  return sample_centers(s.dim, s.J, s.lo, s.hi, [&](const std::array<double, kMaxDim>& x) {
    double v = 0.0;
    for (const auto& w : waves) {
      double r2 = 0.0, ph = w.phase;
      for (int i = 0; i < s.dim; ++i) {
        const double d = x[i] - w.c[i];
        r2 += d * d;
        ph += 2.0 * std::numbers::pi * w.xi[i] * d;
      }
      v += w.amp * std::exp(-std::numbers::pi * r2 / (kSigma * kSigma)) * std::cos(ph);
    }
    return cplx{v, 0.0};
  });
}

GridFunction random_gaussian(std::mt19937_64& g, const FunctionCorpus& s) {
  std::array<double, kMaxDim> c{0, 0, 0};
  for (int i = 0; i < s.dim; ++i) c[i] = uniform(g, -1.0, 1.0);
  const double w = uniform(g, 0.5, 1.5);
  const double a = uniform(g, 0.5, 2.0);
  return scaled(sampled_gaussian(s.dim, s.J, s.lo, s.hi, c, w), a);
}

}  // namespace

GridFunction sampled_gaussian(int dim, int J, std::int64_t lo, std::int64_t hi, const std::array<double, kMaxDim>& c, double w) {
  return sample_centers(dim, J, lo, hi, [&](const std::array<double, kMaxDim>& x) {
    double r2 = 0.0;
    for (int i = 0; i < dim; ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
    return cplx{std::exp(-std::numbers::pi * r2 / (w * w)), 0.0};
  });
}

std::vector<GridFunction> generate_corpus(const FunctionCorpus& spec_in) {
  FunctionCorpus s = spec_in;
  const std::uint64_t salt = family_salt(s.family);
  require(s.dim >= 1 && s.dim <= kMaxDim, "corpus dimension must be 1, 2 or 3");
  require(s.count >= 0, "corpus count must be nonnegative");
  require(s.J0 >= 0 && s.J0 <= s.J, "corpus requires 0 <= J0 <= J");
  const bool smooth = s.family == "band-limited" || s.family == "gaussians";
  if (s.lo == s.hi) {
    s.lo = smooth ? -7 : 0;
    s.hi = smooth ? 7 : 2;
  }
  require(s.lo < s.hi, "corpus box is empty");
  if (s.family == "blocks") {
    if (s.params.p.empty()) s.params = SpaceParams{ExponentVector(static_cast<std::size_t>(s.dim), 2.0), 3.0, 6.0};
    check_block_regime(s.params);
  }
  std::vector<GridFunction> out(static_cast<std::size_t>(s.count));
  for (int k = 0; k < s.count; ++k) {
    auto g = make_stream(s.seed, static_cast<std::uint64_t>(k), salt);
    GridFunction& f = out[static_cast<std::size_t>(k)];
    if (s.family == "random-cells") {
      f = random_cells(g, s);
    } else if (s.family == "random-block-sums") {
      f = random_block_sum(g, s);
    } else if (s.family == "blocks") {
      f = random_block(g, s);
    } else if (s.family == "band-limited") {
      f = band_limited(g, s);
    } else {
      f = random_gaussian(g, s);
    }
  }
  return out;
}

}  // namespace bmkit
