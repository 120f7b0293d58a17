#include "bmkit/verify.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "bmkit/real_operators.hpp"
#include "bmkit/spectral.hpp"

namespace bmkit {

namespace {

using Task = std::function<CheckRecord()>;

CheckRecord make(std::string id, std::string theorem, std::string anchor, json params, json measured, json bound, bool pass) {
  CheckRecord c;
  c.id = std::move(id);
  c.theorem = std::move(theorem);
  c.anchor = std::move(anchor);
  c.parameters = std::move(params);
  c.measured = std::move(measured);
  c.bound = std::move(bound);
  c.pass = pass;
  return c;
}

std::vector<GridFunction> corpus(std::uint64_t seed, const char* family, int dim, int J, int count, int J0 = 2) {
  FunctionCorpus s;
  s.seed = seed;
  s.family = family;
  s.dim = dim;
  s.J = J;
  s.J0 = std::min(J0, J);
  s.count = count;
  return generate_corpus(s);
}

template <class T>
std::vector<T> concat(std::vector<T> a, const std::vector<T>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Evaluates fn(i) for i in [0, n) in parallel.
std::vector<double> pmap(std::size_t n, const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(n, 0.0);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

double vmax(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }
double vmin(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()); }
double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}
std::size_t count_if_true(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

double rel_err(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); }

json jarr(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  const auto [x, y] = align(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x.values[i] - y.values[i]));
  return m;
}

/// Largest amount by which lhs exceeds rhs (relative to max |rhs|) on the cells of lhs inside rhs's box.
double excess_on_common(const GridFunction& lhs, const GridFunction& rhs) {
  const double scale = std::max(rhs.max_abs(), 1e-300);
  double worst = -kInf;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const Index rel = lhs.unflat(i);
    Index abs{0, 0, 0};
    for (int d = 0; d < lhs.dim; ++d) abs[d] = rel[d] + lhs.origin[d];
    if (!rhs.inside_abs(abs)) continue;
    worst = std::max(worst, (lhs.values[i].real() - rhs.at_abs(abs).real()) / scale);
  }
  return worst;
}

SpaceParams P1() { return SpaceParams{{2.0}, 3.0, 6.0}; }
SpaceParams P2() { return SpaceParams{{2.0, 4.0}, 4.0, 8.0}; }
SpaceParams params_for(int dim) { return dim == 1 ? P1() : P2(); }

/// Geometric-series value of the norm of the unit-cube indicator.
double unit_cube_oracle(int n, const SpaceParams& sp) {
  const double fine = 1.0 / (1.0 - std::exp2(n * (1.0 - sp.r / sp.t)));
  const double q = std::exp2(n * sp.delta() * sp.r);
  return std::pow(fine + q / (1.0 - q), 1.0 / sp.r);
}

GridFunction unit_indicator(int n, int J) {
  DyadicCube q;
  q.dim = n;
  return indicator(q, J);
}

GridFunction box_indicator(int n, int J, const Index& lo, const Index& hi) {
  Box b;
  b.dim = n;
  b.scale = 0;
  b.lo = lo;
  b.hi = hi;
  GridFunction f = zeros_like_box(n, J, box_at(b, J));
  for (auto& v : f.values) v = 1.0;
  return f;
}

// ---------------------------------------------------------------- norms-exact

std::vector<Task> norms_exact(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  std::vector<Task> t;
  for (int n : {1, 2}) {
    t.push_back([=] {
      const SpaceParams sp = params_for(n);
      const NormBreakdown b = bm_norm(unit_indicator(n, J), sp);
      const double oracle = unit_cube_oracle(n, sp);
      const double closed = n == 1 ? std::pow(3.0, 1.0 / 6.0) : std::pow(5.0 / 3.0, 1.0 / 8.0);
      const double e = rel_err(b.total, closed);
      return make(n == 1 ? "closed-form-1d" : "closed-form-2d", "Closed-form norm of the unit cube indicator",
                  "unit-cube-norm", {{"dim", n}, {"params", to_json(sp)}, {"J", J}},
                  {{"value", b.total}, {"oracle", oracle}, {"rel_err", e}}, {{"expected", closed}, {"rel_tol", 1e-9}},
                  e <= 1e-9 && rel_err(oracle, closed) <= 1e-12);
    });
  }
  auto classify = [=](const char* id, std::vector<SpaceParams> cases, Divergence want, const char* label) {
    return [=] {
      json got = json::array();
      bool ok = true;
      for (const auto& sp : cases) {
        const NormBreakdown b = bm_norm(unit_indicator(sp.dim(), J), sp);
        got.push_back({{"params", to_json(sp)}, {"total", number_to_json(b.total)}, {"reason", to_string(b.divergence)}});
        ok = ok && std::isinf(b.total) && b.divergence == want;
      }
      return make(id, "Nontriviality classification", label, {{"cases", static_cast<int>(cases.size())}}, got,
                  {{"reason", to_string(want)}}, ok);
    };
  };
  t.push_back(classify("nontriviality-coarse",
                       {SpaceParams{{2.0}, 2.0, 6.0}, SpaceParams{{2.0, 4.0}, 8.0 / 3.0, 8.0},
                        SpaceParams{{4.0}, 4.0, 12.0}},
                       Divergence::coarse_tail, "nontriviality-critical-t"));
  t.push_back(classify("nontriviality-fine",
                       {SpaceParams{{2.0}, 3.0, 3.0}, SpaceParams{{2.0, 4.0}, 4.0, 4.0}, SpaceParams{{2.0}, 3.0, 2.5}},
                       Divergence::fine_tail, "nontriviality-r-le-t"));
  t.push_back([=] {
    const GridFunction f = box_indicator(2, J, {0, 0, 0}, {2, 1, 1});
    const double a = mixed_norm(f, {1.0, kInf}), b = mixed_norm(f, {kInf, 1.0});
    return make("mixed-order", "Order of integration in the mixed norm", "mixed-norm-order", {{"J", J}},
                {{"p=(1,inf)", a}, {"p=(inf,1)", b}}, {{"p=(1,inf)", 2.0}, {"p=(inf,1)", 1.0}},
                rel_err(a, 2.0) <= 1e-15 && rel_err(b, 1.0) <= 1e-15);
  });
  t.push_back([=] {
    const GridFunction f = box_indicator(2, J, {0, 0, 0}, {2, 2, 1});
    const double a = mixed_norm(f, {2.0, 4.0});
    const double e = rel_err(a, std::pow(2.0, 0.75));
    return make("mixed-cube", "Mixed norm of a cube indicator", "cube-indicator-mixed-norm", {{"p", to_json(ExponentVector{2, 4})}},
                {{"value", a}, {"rel_err", e}}, {{"expected", std::pow(2.0, 0.75)}, {"rel_tol", 1e-14}}, e <= 1e-14);
  });
  t.push_back([=] {
    const auto fs = corpus(cfg.seed, "random-cells", 2, J, count);
    const auto errs = pmap(fs.size(), [&](std::size_t i) {
      std::vector<double> pw;
      for (const auto& v : fs[i].values) pw.push_back(std::pow(std::abs(v), 3.0));
      const double direct = std::cbrt(pairwise_sum(pw) * fs[i].h() * fs[i].h());
      return rel_err(mixed_norm(fs[i], {3.0, 3.0}), direct);
    });
    return make("mixed-equals-lp", "Equal exponents give the Lebesgue norm", "equal-exponent-reduction",
                {{"p", to_json(ExponentVector{3, 3})}, {"count", fs.size()}}, {{"max_rel_err", vmax(errs)}},
                {{"rel_tol", 1e-13}}, vmax(errs) <= 1e-13);
  });
  t.push_back([=] {
    const auto fs = corpus(cfg.seed, "random-cells", 2, J, 3 * count);
    const ExponentVector p{1.5, 3.0};
    const auto viol = pmap(static_cast<std::size_t>(count), [&](std::size_t i) {
      const auto& f = fs[3 * i];
      const auto& g = fs[3 * i + 1];
      return mixed_norm(f + g, p) <= mixed_norm(f, p) + mixed_norm(g, p) ? 0.0 : 1.0;
    });
    return make("triangle", "Triangle inequality for the mixed norm", "mixed-norm-triangle", {{"p", to_json(p)}, {"count", count}},
                {{"violations", count_if_true(viol)}}, {{"violations", 0}}, count_if_true(viol) == 0);
  });
  return t;
}

// ---------------------------------------------------------------- embeddings

std::vector<GridFunction> mixed_corpus(const SuiteConfig& cfg, int count, int J) {
  return concat(corpus(cfg.seed, "random-cells", 1, J, (count + 1) / 2), corpus(cfg.seed, "random-block-sums", 2, J, count / 2));
}

std::vector<Task> embeddings(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  std::vector<Task> t;
  t.push_back([=] {
    const auto fs = mixed_corpus(cfg, count, J);
    const std::vector<double> rs{4.0, 6.0, 12.0, kInf};
    std::vector<double> worst(fs.size());
    const auto viol = pmap(fs.size(), [&](std::size_t i) {
      const int n = fs[i].dim;
      double prev = kInf, bad = 0.0;
      worst[i] = 0.0;
      for (double r : rs) {
        const double v = bm_value(fs[i], SpaceParams{ExponentVector(static_cast<std::size_t>(n), 2.0), 3.0, r});
        if (std::isfinite(prev) && prev > 0.0) worst[i] = std::max(worst[i], v / prev);
        if (v > prev) bad = 1.0;
        prev = v;
      }
      return bad;
    });
    return make("ell-r-embedding", "Constant-one embedding in the outer exponent", "ell-r-embedding",
                {{"r", jarr(rs)}, {"t", 3.0}, {"p", 2.0}, {"count", fs.size()}},
                {{"violations", count_if_true(viol)}, {"max_ratio", vmax(worst)}}, {{"max_ratio", 1.0}, {"tolerance", 0.0}},
                count_if_true(viol) == 0);
  });
  t.push_back([=] {
    const auto fs = mixed_corpus(cfg, count, J);
    std::vector<double> ratio(fs.size());
    const auto viol = pmap(fs.size(), [&](std::size_t i) {
      const bool one = fs[i].dim == 1;
      const SpaceParams small = one ? SpaceParams{{1.5}, 3.0, 6.0} : SpaceParams{{1.5, 2.0}, 4.0, 8.0};
      const SpaceParams large = one ? SpaceParams{{2.0}, 3.0, 6.0} : SpaceParams{{2.0, 4.0}, 4.0, 8.0};
      const double a = bm_value(fs[i], small), b = bm_value(fs[i], large);
      ratio[i] = b > 0.0 ? a / b : 0.0;
      return a <= b ? 0.0 : 1.0;
    });
    return make("exponent-embedding", "Constant-one embedding in the inner exponents", "exponent-embedding",
                {{"n1", {{"p", 1.5}, {"s", 2.0}, {"t", 3.0}, {"r", 6.0}}},
                 {"n2", {{"p", to_json(ExponentVector{1.5, 2})}, {"s", to_json(ExponentVector{2, 4})}, {"t", 4.0}, {"r", 8.0}}},
                 {"count", fs.size()}},
                {{"violations", count_if_true(viol)}, {"max_ratio", vmax(ratio)}}, {{"max_ratio", 1.0}, {"tolerance", 0.0}},
                count_if_true(viol) == 0);
  });
  t.push_back([=] {
    const auto fs = mixed_corpus(cfg, count, J);
    const auto viol = pmap(fs.size(), [&](std::size_t i) {
      auto g = make_stream(cfg.seed, i, 0x1a7);
      GridFunction h = fs[i];
      for (auto& v : h.values) v *= uniform01(g);
      const SpaceParams sp = params_for(fs[i].dim);
      return bm_value(h, sp) <= bm_value(fs[i], sp) ? 0.0 : 1.0;
    });
    return make("lattice", "Lattice property", "lattice-property", {{"count", fs.size()}}, {{"violations", count_if_true(viol)}},
                {{"violations", 0}}, count_if_true(viol) == 0);
  });
  t.push_back([=] {
    const auto fs = mixed_corpus(cfg, count, J);
    const auto viol = pmap(fs.size(), [&](std::size_t i) {
      const SpaceParams sp = params_for(fs[i].dim);
      const GridFunction a = abs_of(fs[i]);
      double prev = 0.0;
      for (double level : {0.25, 0.5, 0.75, 1.0}) {
        const double cap = level * a.max_abs();
        const GridFunction fk = map_values(a, [&](cplx v) { return cplx{std::min(v.real(), cap), 0.0}; });
        const double v = bm_value(fk, sp);
        if (v < prev) return 1.0;
        prev = v;
      }
      return prev == bm_value(a, sp) ? 0.0 : 1.0;
    });
    return make("monotone-convergence", "Monotone convergence along truncations", "monotone-convergence",
                {{"levels_of_max", jarr({0.25, 0.5, 0.75, 1.0})}, {"count", fs.size()}}, {{"violations", count_if_true(viol)}},
                {{"violations", 0}}, count_if_true(viol) == 0);
  });
  return t;
}

// ---------------------------------------------------------------- dilation-translation

std::vector<Task> dilation_translation(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  std::vector<Task> t;
  t.push_back([=] {
    const auto fs = mixed_corpus(cfg, count, J);
    const auto errs = pmap(fs.size(), [&](std::size_t i) {
      double e = 0.0;
      for (int m = -2; m <= 2; ++m) e = std::max(e, check_dilation(fs[i], params_for(fs[i].dim), m).rel_err);
      return e;
    });
    return make("dilation-law", "Dyadic dilation identity", "dilation-law", {{"m", json::array({-2, -1, 0, 1, 2})}, {"count", fs.size()}},
                {{"max_rel_err", vmax(errs)}}, {{"rel_tol", 1e-12}}, vmax(errs) <= 1e-12);
  });
  t.push_back([=] {
    const LawCheck c = check_dilation(unit_indicator(1, J), P1(), 1);
    const double expected = std::exp2(-1.0 / 3.0) * std::pow(3.0, 1.0 / 6.0);
    const double e = rel_err(c.lhs, expected);
    return make("dilation-example", "Dyadic dilation of the unit interval", "dilation-law", {{"m", 1}, {"params", to_json(P1())}},
                {{"value", c.lhs}, {"rel_err", e}}, {{"expected", expected}, {"rel_tol", 1e-12}}, e <= 1e-12);
  });
  t.push_back([=] {
    const auto fs = mixed_corpus(cfg, count, J);
    std::vector<double> used(fs.size(), 0.0);
    const auto errs = pmap(fs.size(), [&](std::size_t i) {
      const GridFunction& f = fs[i];
      int s = 0;
      if (f.is_zero() || !dyadic_hull_scale(f, s)) return 0.0;
      used[i] = 1.0;
      // Integer shifts that are multiples of the hull side map the hull to a dyadic cube of the same scale.
      const std::int64_t unit = pow2i(std::max(0, -s));
      double e = 0.0;
      for (std::int64_t c : {1, -3, 5}) {
        Index k{0, 0, 0};
        for (int d = 0; d < f.dim; ++d) k[d] = (d % 2 == 0 ? c : -c) * unit;
        e = std::max(e, check_translation(f, params_for(f.dim), k, 0).rel_err);
      }
      return e;
    });
    return make("translation-law", "Integer-lattice translation invariance", "translation-law",
                {{"multipliers", json::array({1, -3, 5})}, {"count", fs.size()}},
                {{"max_rel_err", vmax(errs)}, {"checked", count_if_true(used)}}, {{"rel_tol", 1e-12}},
                vmax(errs) <= 1e-12 && count_if_true(used) > 0);
  });
  t.push_back([=] {
    const auto fs = mixed_corpus(cfg, count, J);
    const auto viol = pmap(fs.size(), [&](std::size_t i) {
      std::vector<int> ks;
      for (int k = J - 3; k <= J; ++k) ks.push_back(k);
      const auto rep = approximation_check(fs[i], params_for(fs[i].dim), ks);
      return rep.residual.back() == 0.0 && rep.residual.front() >= rep.residual.back() ? 0.0 : 1.0;
    });
    return make("approximation", "Conditional expectations approximate the function", "expectation-approximation",
                {{"k", json::array({J - 3, J})}, {"count", fs.size()}}, {{"violations", count_if_true(viol)}},
                {{"violations", 0}}, count_if_true(viol) == 0);
  });
  return t;
}

// ---------------------------------------------------------------- holder-young

std::vector<Task> holder_young(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  std::vector<Task> t;
  auto pairs = [=](int n) {
    const auto a = corpus(cfg.seed, "random-cells", n, J, count);
    const auto b = concat(corpus(cfg.seed + 1, "random-cells", n, J, count / 2), corpus(cfg.seed, "blocks", n, J, count - count / 2));
    return std::make_pair(a, b);
  };
  t.push_back([=] {
    std::vector<double> all;
    for (int n : {1, 2}) {
      const auto [a, b] = pairs(n);
      const ExponentVector p = n == 1 ? ExponentVector{3.0} : ExponentVector{3.0, 1.5};
      const auto r = pmap(a.size() / 2, [&](std::size_t i) { return holder_check(a[i], b[i], p).ratio; });
      all.insert(all.end(), r.begin(), r.end());
    }
    return make("holder", "Hoelder inequality for mixed norms", "mixed-hoelder",
                {{"p_n1", to_json(ExponentVector{3})}, {"p_n2", to_json(ExponentVector{3, 1.5})}, {"pairs", all.size()}},
                {{"max_ratio", vmax(all)}}, {{"max_ratio", 1.0 + 1e-12}}, vmax(all) <= 1.0 + 1e-12);
  });
  t.push_back([=] {
    std::vector<double> all;
    for (int n : {1, 2}) {
      const auto [a, b] = pairs(n);
      const SpaceParams sp = n == 1 ? P1() : SpaceParams{{2.0, 2.0}, 3.0, 6.0};
      const auto r = pmap(a.size() / 2, [&](std::size_t i) {
        const std::size_t k = a.size() / 2 + i;
        const double den = bm_value(a[k], sp) * block_norm_upper(b[k], sp).value;
        return den > 0.0 ? std::abs(pairing(a[k], b[k])) / den : 0.0;
      });
      all.insert(all.end(), r.begin(), r.end());
    }
    return make("pairing-duality", "Pairing bounded by the primal norm times the block norm", "predual-pairing",
                {{"params_n1", to_json(P1())}, {"params_n2", to_json(SpaceParams{{2.0, 2.0}, 3.0, 6.0})}, {"pairs", all.size()}},
                {{"max_ratio", vmax(all)}}, {{"max_ratio", 1.0 + 1e-12}}, vmax(all) <= 1.0 + 1e-12);
  });
  t.push_back([=] {
    const int m = std::max(1, count / 25);
    const auto a = corpus(cfg.seed, "random-cells", 1, J, m);
    const auto b = corpus(cfg.seed + 2, "random-block-sums", 1, J, m);
    const ExponentVector p{1.5}, q{1.2}, s{2.0};
    std::vector<double> excess(a.size()), ratio(a.size());
    parallel_for(a.size(), [&](std::size_t i) {
      const auto r = young_check(a[i], b[i], p, q);
      ratio[i] = r.ratio;
      excess[i] = r.ratio - (1.0 + r.tolerance);
    });
    return make("young", "Young inequality for mixed norms", "mixed-young",
                {{"p", to_json(p)}, {"q", to_json(q)}, {"s", to_json(s)}, {"pairs", a.size()}},
                {{"max_ratio", vmax(ratio)}, {"max_excess", vmax(excess)}}, {{"max_ratio", "1 + projection tolerance"}},
                vmax(excess) <= 0.0);
  });
  t.push_back([=] {
    const auto a = corpus(cfg.seed, "random-cells", 1, J, 1);
    std::vector<double> ratios;
    for (int w = J; w <= J + 2; ++w) {
      DyadicCube q;
      q.scale = w;
      const GridFunction g = scaled(indicator(q, w), std::exp2(w));
      ratios.push_back(young_check(a[0], g, {2.0}, {1.0}).ratio);
    }
    return make("young-narrow-mass", "Convolution with a narrow unit mass", "mixed-young", {{"widths", json::array({J, J + 2})}},
                {{"ratios", jarr(ratios)}}, {{"max_ratio", 1.0 + 1e-12}, {"min_ratio", 0.9}},
                vmax(ratios) <= 1.0 + 1e-12 && vmin(ratios) >= 0.9);
  });
  return t;
}

// ---------------------------------------------------------------- duality-sandwich

std::vector<Task> duality_sandwich(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  const int J2 = std::min(J, 3);
  std::vector<Task> t;
  t.push_back([=] {
    const int c1 = count / 2, c2 = count / 4, c3 = count - c1 - c2;
    const auto fs = concat(concat(corpus(cfg.seed, "random-cells", 1, J, c1), corpus(cfg.seed, "blocks", 1, J, c2)),
                           corpus(cfg.seed, "random-block-sums", 2, J2, c3));
    std::vector<double> width(fs.size()), not_conv(fs.size());
    const auto viol = pmap(fs.size(), [&](std::size_t i) {
      const SpaceParams sp = params_for(fs[i].dim);
      SearchConfig sc;
      sc.seed = cfg.seed + i;
      const double up = block_norm_upper(fs[i], sp).value;
      const auto inf = block_norm_infimum(fs[i], sp);
      const double lo = block_norm_lower(fs[i], sp, sc).value;
      width[i] = up > 0.0 ? (up - lo) / up : 0.0;
      not_conv[i] = inf.converged ? 0.0 : 1.0;
      const bool ok = lo <= inf.value * (1.0 + 1e-12) && inf.value <= up * (1.0 + 1e-12);
      return ok ? 0.0 : 1.0;
    });
    return make("sandwich", "Lower bound, infimum and upper bound are ordered", "block-sandwich",
                {{"count", fs.size()}, {"params_n1", to_json(P1())}, {"params_n2", to_json(P2())}, {"J_n2", J2}},
                {{"violations", count_if_true(viol)}, {"median_width", median(width)}, {"max_width", vmax(width)},
                 {"not_converged", count_if_true(not_conv)}},
                {{"violations", 0}, {"rel_tol", 1e-12}}, count_if_true(viol) == 0);
  });
  t.push_back([=] {
    const auto fs = concat(corpus(cfg.seed, "blocks", 1, J, count / 2), corpus(cfg.seed, "blocks", 2, J2, count / 2));
    std::vector<double> ups(fs.size());
    const auto viol = pmap(fs.size(), [&](std::size_t i) {
      const SpaceParams sp = params_for(fs[i].dim);
      ups[i] = block_norm_upper(fs[i], sp).value;
      const BlockDecomposition d = finite_decomposition(fs[i], sp);
      bool ok = ups[i] <= 1.0 + 1e-12;
      for (const auto& b : d.blocks) ok = ok && is_normalized_block(b, sp);
      ok = ok && max_abs_diff(reconstruct(d), fs[i]) <= 1e-12 * fs[i].max_abs();
      return ok ? 0.0 : 1.0;
    });
    return make("block-normalization", "Normalized blocks have block norm at most one", "block-norm-bound",
                {{"count", fs.size()}}, {{"violations", count_if_true(viol)}, {"max_upper", vmax(ups)}},
                {{"max_upper", 1.0 + 1e-12}}, count_if_true(viol) == 0);
  });
  t.push_back([=] {
    const double v = slice_norm(unit_indicator(1, J), P1(), 1);
    const double e = rel_err(v, std::pow(2.0, 1.0 / 6.0));
    return make("slice-example", "Slice norm of the unit interval at scale one", "slice-norm", {{"params", to_json(P1())}, {"j", 1}},
                {{"value", v}, {"rel_err", e}}, {{"expected", std::pow(2.0, 1.0 / 6.0)}, {"rel_tol", 1e-12}}, e <= 1e-12);
  });
  t.push_back([=] {
    const auto fs = corpus(cfg.seed, "blocks", 1, J, std::max(1, count / 10));
    const SpaceParams sp = P1();
    const auto errs = pmap(fs.size(), [&](std::size_t i) {
      const BlockDecomposition d = decompose_at_scale(fs[i], sp, support_scale(fs[i]));
      double e = 0.0;
      for (std::size_t k = 0; k < d.blocks.size(); ++k) {
        const double slice = slice_norm(d.blocks[k].function, sp, d.blocks[k].support.scale);
        e = std::max(e, rel_err(slice, 1.0));
      }
      return e;
    });
    return make("single-block-slice", "A normalized block has unit slice norm at its scale", "slice-norm",
                {{"count", fs.size()}}, {{"max_rel_err", vmax(errs)}}, {{"rel_tol", 1e-12}}, vmax(errs) <= 1e-12);
  });
  t.push_back([=] {
    const auto fs = corpus(cfg.seed, "random-cells", 1, J, std::max(1, count / 10));
    const auto errs = pmap(fs.size(), [&](std::size_t i) {
      SearchConfig sc;
      sc.seed = cfg.seed + i;
      const auto lb = block_norm_lower(fs[i], P1(), sc);
      const double wn = bm_value(lb.witness, P1());
      const double pv = std::abs(pairing(lb.witness, fs[i]));
      return std::max(rel_err(wn, 1.0), rel_err(pv, lb.value));
    });
    return make("lower-witness", "Lower-bound witnesses are normalized and reproduce the pairing", "norm-attainment",
                {{"count", fs.size()}}, {{"max_rel_err", vmax(errs)}}, {{"rel_tol", 1e-12}}, vmax(errs) <= 1e-12);
  });
  return t;
}

// ---------------------------------------------------------------- maximal

struct StabilityResult {
  std::vector<double> values;  // per resolution
  double spread = 0.0;
};

StabilityResult spread_of(std::vector<double> v) {
  StabilityResult s;
  s.values = std::move(v);
  const double lo = vmin(s.values), hi = vmax(s.values);
  s.spread = lo > 0.0 ? hi / lo : kInf;
  return s;
}

constexpr int kStabilityBudget = 48;
constexpr int kStabilitySeeds = 8;
const std::vector<int> kStabilityJ{4, 5, 6, 7};

StabilityResult estimate_across_resolutions(const SuiteConfig& cfg, const OperatorSpec& op, NormSide side) {
  std::vector<double> best(kStabilityJ.size());
  parallel_for(kStabilityJ.size(), [&](std::size_t i) {
    const auto seeds = corpus(cfg.seed, "random-cells", 1, kStabilityJ[i], kStabilitySeeds);
    EstimateConfig ec;
    ec.budget = kStabilityBudget;
    ec.seed = cfg.seed;
    ec.perturb_resolution = 2;
    ec.side = side;
    best[i] = estimate_operator_norm(op, seeds, P1(), P1(), ec).best;
  });
  return spread_of(best);
}

std::vector<Task> maximal(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  std::vector<Task> t;
  t.push_back([=] {
    const GridFunction f = unit_indicator(1, J);
    const GridFunction m = dyadic_maximal(f);
    double worst = 0.0;
    for (std::int64_t k = pow2i(J); k < 2 * pow2i(J); ++k) worst = std::max(worst, std::abs(m.at_abs({k, 0, 0}).real() - 0.5));
    return make("dyadic-example", "Dyadic maximal function of the unit interval", "dyadic-maximal", {{"J", J}, {"x", "[1,2)"}},
                {{"max_abs_err", worst}}, {{"expected", 0.5}, {"abs_tol", 0.0}}, worst == 0.0);
  });
  t.push_back([=] {
    const StepFunction g{{0.0, 1.0}, {1.0}};
    const double v = maximal_1d(g, 3.0, 3.0);
    const GridFunction f = unit_indicator(1, J);
    const auto it = iterated_maximal(f, 4 * pow2i(J));
    const std::int64_t k = 3 * pow2i(J);
    const double x = (static_cast<double>(k) + 0.5) * f.h();
    const double e = rel_err(it.mid.at_abs({k, 0, 0}).real(), 1.0 / x);
    return make("iterated-example", "One-dimensional maximal function of the unit interval", "interval-maximal",
                {{"x", 3.0}, {"J", J}}, {{"value_at_3", v}, {"grid_rel_err", e}}, {{"expected", 1.0 / 3.0}, {"rel_tol", 1e-14}},
                rel_err(v, 1.0 / 3.0) <= 1e-14 && e <= 1e-14);
  });
  auto fam = [=] {
    return concat(corpus(cfg.seed, "random-cells", 1, J, count), corpus(cfg.seed, "random-block-sums", 2, std::min(J, 3), count / 2));
  };
  t.push_back([=] {
    const auto fs = fam();
    const auto ex = pmap(fs.size(), [&](std::size_t i) {
      const GridFunction& f = fs[i];
      const double nshift = std::pow(3.0, f.dim);
      const GridFunction a = abs_of(f);
      const GridFunction d = dyadic_maximal(f);
      const GridFunction p = hl_maximal_proxy(f);
      const GridFunction mt = martingale_maximal(f);
      const GridFunction it = iterated_maximal(f).mid;
      GridFunction top = d;
      for (int s = 1; s < static_cast<int>(nshift); ++s) {
        std::array<int, kMaxDim> sh{s % 3, (s / 3) % 3, 0};
        const GridFunction ds = dyadic_maximal(f, sh);
        for (std::size_t c = 0; c < top.size(); ++c) top.values[c] = std::max(top.values[c].real(), ds.values[c].real());
      }
      double e = excess_on_common(a, d);
      e = std::max(e, excess_on_common(a, mt));
      e = std::max(e, excess_on_common(a, it));
      e = std::max(e, excess_on_common(d, p));
      e = std::max(e, excess_on_common(p, scaled(top, nshift)));
      return e;
    });
    return make("domination", "Pointwise domination chain of the maximal operators", "maximal-domination",
                {{"count", fs.size()}}, {{"max_excess", vmax(ex)}}, {{"max_excess", 1e-14}}, vmax(ex) <= 1e-14);
  });
  t.push_back([=] {
    const auto fs = fam();
    const auto errs = pmap(fs.size(), [&](std::size_t i) {
      const GridFunction a = martingale_maximal(fs[i]), b = dyadic_maximal(fs[i]);
      return max_abs_diff(a, b) / std::max(b.max_abs(), 1e-300);
    });
    return make("martingale-vs-dyadic", "Martingale maximal equals the standard dyadic maximal", "martingale-maximal",
                {{"count", fs.size()}}, {{"max_rel_err", vmax(errs)}}, {{"rel_tol", 1e-13}}, vmax(errs) <= 1e-13);
  });
  t.push_back([=] {
    const auto fs = fam();
    const std::size_t half = fs.size() / 2;
    const auto ex = pmap(half, [&](std::size_t i) {
      const GridFunction& f = fs[2 * i];
      const GridFunction& g = fs[2 * i + 1];
      if (f.dim != g.dim) return -kInf;
      double e = -kInf;
      for (MaximalKind k : {MaximalKind::dyadic, MaximalKind::proxy, MaximalKind::iterated, MaximalKind::martingale}) {
        if (k == MaximalKind::iterated && f.dim > 2) continue;
        const GridFunction lhs = apply_maximal(f + g, k);
        const auto [mf, mg] = align(apply_maximal(f, k), apply_maximal(g, k));
        // Only cells covered by both output boxes carry exact values.
        GridFunction rhs = mf + mg;
        const Box bf = apply_maximal(f, k).box(), bg = apply_maximal(g, k).box();
        for (std::size_t c = 0; c < rhs.size(); ++c) {
          const Index rel = rhs.unflat(c);
          bool in = true;
          for (int d = 0; d < rhs.dim; ++d) {
            const std::int64_t a = rel[d] + rhs.origin[d];
            in = in && a >= bf.lo[d] && a < bf.hi[d] && a >= bg.lo[d] && a < bg.hi[d];
          }
          if (!in) rhs.values[c] = kInf;
        }
        e = std::max(e, excess_on_common(lhs, rhs));
      }
      return e;
    });
    return make("sublinearity", "Sublinearity of the maximal operators", "maximal-sublinearity", {{"pairs", half}},
                {{"max_excess", vmax(ex)}}, {{"max_excess", 1e-14}}, vmax(ex) <= 1e-14);
  });
  t.push_back([=] {
    const auto fs = fam();
    const auto r = pmap(fs.size(), [&](std::size_t i) {
      const ExponentVector p(static_cast<std::size_t>(fs[i].dim), 2.0);
      return mixed_norm(martingale_maximal(fs[i]), p) / mixed_norm(fs[i], p);
    });
    return make("doob", "Doob maximal inequality", "doob-maximal", {{"p", 2.0}, {"count", fs.size()}}, {{"max_ratio", vmax(r)}},
                {{"max_ratio", 2.0}}, vmax(r) <= 2.0);
  });
  t.push_back([=] {
    const auto fs = fam();
    const auto ex = pmap(fs.size(), [&](std::size_t i) {
      const Bracketed b = iterated_maximal(fs[i]);
      double e = -kInf;
      for (std::size_t c = 0; c < b.mid.size(); ++c)
        e = std::max({e, b.lo.values[c].real() - b.mid.values[c].real(), b.mid.values[c].real() - b.hi.values[c].real()});
      return e / std::max(b.mid.max_abs(), 1e-300);
    });
    return make("iterated-bracket", "Iterated maximal brackets contain the midpoint values", "iterated-maximal-bracket",
                {{"count", fs.size()}}, {{"max_rel_excess", vmax(ex)}}, {{"max_rel_excess", 1e-14}}, vmax(ex) <= 1e-14);
  });
  struct Bounded {
    const char* id;
    OperatorSpec op;
    NormSide side;
  };
  const std::vector<Bounded> bounded = {
      {"bounded-dyadic-maximal", {"dyadic-maximal"}, NormSide::bm},
      {"bounded-iterated-maximal", {"iterated-maximal"}, NormSide::bm},
      {"bounded-band-sign", {"band-sign", 0.5, 0, cfg.seed}, NormSide::bm},
      {"bounded-riesz", {"riesz"}, NormSide::bm},
      {"bounded-block-dyadic-maximal", {"dyadic-maximal"}, NormSide::block_upper},
      {"bounded-block-band-sign", {"band-sign", 0.5, 0, cfg.seed}, NormSide::block_upper},
  };
  for (const auto& b : bounded) {
    t.push_back([=] {
      const StabilityResult s = estimate_across_resolutions(cfg, b.op, b.side);
      return make(b.id, "Resolution-stable operator norm estimate", "operator-boundedness",
                  {{"operator", b.op.id}, {"norm", b.side == NormSide::bm ? "bm" : "block-upper"}, {"params", to_json(P1())},
                   {"J", json(kStabilityJ)}, {"budget", kStabilityBudget}, {"seeds", kStabilitySeeds}},
                  {{"estimates", jarr(s.values)}, {"spread", number_to_json(s.spread)}}, {{"max_spread", 2.0}}, s.spread < 2.0);
    });
  }
  for (int two : {0, 1}) {
    t.push_back([=] {
      std::vector<double> worst(kStabilityJ.size());
      parallel_for(kStabilityJ.size(), [&](std::size_t i) {
        const auto fs = corpus(cfg.seed, "random-cells", 1, kStabilityJ[i], 24);
        double w = 0.0;
        for (std::size_t k = 0; k + 3 < fs.size(); k += 4) {
          double num, den;
          if (two) {
            const std::vector<std::vector<GridFunction>> fam2{{fs[k], fs[k + 1]}, {fs[k + 2], fs[k + 3]}};
            num = bm_value(vector_maximal(fam2, 2.0, 3.0), P1());
            den = bm_value(lu_aggregate(fam2, 2.0, 3.0), P1());
          } else {
            const std::vector<GridFunction> fam1{fs[k], fs[k + 1], fs[k + 2]};
            num = bm_value(vector_maximal(fam1, 2.0), P1());
            den = bm_value(lu_aggregate(fam1, 2.0), P1());
          }
          w = std::max(w, num / den);
        }
        worst[i] = w;
      });
      const StabilityResult s = spread_of(worst);
      return make(two ? "vector-maximal-two-index" : "vector-maximal", "Resolution-stable vector-valued maximal ratio",
                  "vector-maximal", {{"u", two ? json::array({2.0, 3.0}) : json(2.0)}, {"J", json(kStabilityJ)}},
                  {{"ratios", jarr(s.values)}, {"spread", number_to_json(s.spread)}}, {{"max_spread", 2.0}}, s.spread < 2.0);
    });
  }
  return t;
}

// ---------------------------------------------------------------- fractional

double interval_potential(double x) {
  // int_0^1 |x - y|^{-1/2} dy
  if (x <= 0.0) return 2.0 * (std::sqrt(1.0 - x) - std::sqrt(-x));
  if (x >= 1.0) return 2.0 * (std::sqrt(x) - std::sqrt(x - 1.0));
  return 2.0 * (std::sqrt(x) + std::sqrt(1.0 - x));
}

std::vector<Task> fractional(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  std::vector<Task> t;
  t.push_back([=] {
    const GridFunction f = unit_indicator(1, J);
    const FractionalResult r = fractional_integral(f, 0.5);
    const GridFunction& g = r.value;
    double worst = 0.0;
    json pts = json::array();
    for (int s = 0; s < 16; ++s) {
      const std::size_t idx = static_cast<std::size_t>(s) * (g.size() - 1) / 15;
      const double x = (static_cast<double>(g.origin[0] + static_cast<std::int64_t>(idx)) + 0.5) * g.h();
      worst = std::max(worst, std::abs(g.values[idx].real() - interval_potential(x)));
      pts.push_back(x);
    }
    return make("closed-form-potential", "Potential of the unit interval", "fractional-closed-form", {{"alpha", 0.5}, {"points", pts}},
                {{"max_abs_err", worst}}, {{"abs_tol", 1e-3}}, worst <= 1e-3);
  });
  t.push_back([=] {
    const GridFunction f = unit_indicator(1, J);
    const double a = fractional_integral_at(f, 0.5, 0.5), b = fractional_integral_at(f, 0.5, 2.0);
    const double ea = rel_err(a, 2.0 * std::sqrt(2.0)), eb = rel_err(b, 2.0 * (std::sqrt(2.0) - 1.0));
    return make("potential-values", "Potential of the unit interval at two points", "fractional-closed-form",
                {{"alpha", 0.5}, {"x", json::array({0.5, 2.0})}}, {{"values", json::array({a, b})}},
                {{"expected", json::array({2.0 * std::sqrt(2.0), 2.0 * (std::sqrt(2.0) - 1.0)})}, {"rel_tol", 1e-14}},
                ea <= 1e-14 && eb <= 1e-14);
  });
  t.push_back([=] {
    const auto fs = concat(corpus(cfg.seed, "random-cells", 1, J, count), corpus(cfg.seed, "random-cells", 2, std::min(J, 3), count / 4));
    std::vector<double> neg(fs.size() / 2), cert(fs.size() / 2);
    const auto lin = pmap(fs.size() / 2, [&](std::size_t i) {
      const GridFunction& f = fs[2 * i];
      const GridFunction& g = fs[2 * i + 1];
      if (f.dim != g.dim) return 0.0;
      const double alpha = f.dim == 1 ? 0.3 : 0.5;
      const auto [fa, ga] = align(f, g);
      const auto If = fractional_integral(fa, alpha, 4);
      const auto Ig = fractional_integral(ga, alpha, 4);
      const auto Is = fractional_integral(fa + scaled(ga, 2.0), alpha, 4);
      const auto Ia = fractional_integral(abs_of(f), alpha);
      double m = 0.0;
      for (const auto& v : Ia.value.values) m = std::min(m, v.real());
      neg[i] = std::max(0.0, -m);
      cert[i] = Ia.quadrature_error / std::max(Ia.value.max_abs(), 1e-300);
      double e = 0.0;
      const GridFunction& S = Is.value;
      for (std::size_t c = 0; c < S.size(); ++c) {
        const Index rel = S.unflat(c);
        Index abs{0, 0, 0};
        for (int d = 0; d < S.dim; ++d) abs[d] = rel[d] + S.origin[d];
        if (!If.value.inside_abs(abs) || !Ig.value.inside_abs(abs)) continue;
        e = std::max(e, std::abs(S.values[c] - If.value.at_abs(abs) - 2.0 * Ig.value.at_abs(abs)));
      }
      return e / std::max(S.max_abs(), 1e-300);
    });
    return make("linearity-positivity", "Linearity and positivity of the fractional integral", "fractional-integral",
                {{"pairs", fs.size() / 2}},
                {{"max_linearity_err", vmax(lin)}, {"max_negative_part", vmax(neg)}, {"max_rel_quadrature_cert", vmax(cert)}},
                {{"linearity_rel_tol", 1e-12}, {"negative_part", 0.0}, {"rel_quadrature_cert", 1e-6}},
                vmax(lin) <= 1e-12 && vmax(neg) <= 0.0 && vmax(cert) <= 1e-6);
  });
  t.push_back([=] {
    // I_alpha |f| <= C ||f||_{M^{t,inf}_p}^{t alpha / n} (M f)^{1 - t alpha / n}
    const double alpha = 0.2;
    const SpaceParams morrey{{2.0}, 3.0, kInf};
    const double e = morrey.t * alpha;
    std::vector<double> consts(4);
    parallel_for(4, [&](std::size_t k) {
      const auto fs = corpus(cfg.seed, "random-cells", 1, 4 + static_cast<int>(k), std::max(1, count / 2));
      double c = 0.0;
      for (const auto& f : fs) {
        if (f.is_zero()) continue;
        const GridFunction I = fractional_integral(abs_of(f), alpha).value;
        const GridFunction M = hl_maximal_proxy(f);
        const double nm = std::pow(bm_value(f, morrey), e);
        const auto [Ia, Ma] = align(I, M);
        for (std::size_t i = 0; i < Ia.size(); ++i)
          if (Ma.values[i].real() > 0.0) c = std::max(c, Ia.values[i].real() / (nm * std::pow(Ma.values[i].real(), 1.0 - e)));
      }
      consts[k] = c;
    });
    const StabilityResult s = spread_of(consts);
    return make("pointwise-estimate", "Pointwise bound by the Morrey norm and the maximal function", "fractional-pointwise",
                {{"alpha", alpha}, {"params", to_json(morrey)}, {"J", json::array({4, 5, 6, 7})}},
                {{"constants", jarr(consts)}, {"spread", number_to_json(s.spread)}}, {{"max_spread", 2.0}},
                std::isfinite(s.spread) && s.spread <= 2.0);
  });
  t.push_back([=] {
    const double alpha = 0.2;
    const SpaceParams in{{2.0}, 3.0, 6.0};
    const double t2 = 1.0 / (1.0 / in.t - alpha);
    const SpaceParams out{{in.p[0] * t2 / in.t}, t2, in.r * t2 / in.t};
    std::vector<double> best(4);
    parallel_for(4, [&](std::size_t k) {
      const auto fs = corpus(cfg.seed, "random-cells", 1, 4 + static_cast<int>(k), std::max(1, count / 2));
      double b = 0.0;
      for (const auto& f : fs) b = std::max(b, operator_ratio(OperatorSpec{"fractional-integral", alpha}, f, in, out));
      best[k] = b;
    });
    const StabilityResult s = spread_of(best);
    return make("bounded-fractional", "Fractional integral between Bourgain-Morrey spaces", "fractional-boundedness",
                {{"alpha", alpha}, {"in", to_json(in)}, {"out", to_json(out)}, {"J", json::array({4, 5, 6, 7})}},
                {{"ratios", jarr(best)}, {"spread", number_to_json(s.spread)}}, {{"max_spread", 2.0}},
                std::isfinite(s.spread) && s.spread <= 2.0);
  });
  return t;
}

// ---------------------------------------------------------------- littlewood-paley

std::vector<Task> littlewood_paley(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  std::vector<Task> t;
  auto bl = [=](std::uint64_t seed, int n, int c) { return corpus(seed, "band-limited", n, J, c); };
  t.push_back([=] {
    const auto f = bl(cfg.seed, 1, 1)[0];
    const BandWindow w = band_window(f);
    const double e = partition_unity_error(w, Partition{});
    return make("partition-of-unity", "Telescoping partition of unity", "partition-of-unity", {{"jlo", w.jlo}, {"jhi", w.jhi}},
                {{"max_abs_err", e}}, {{"abs_tol", 1e-12}}, e <= 1e-12);
  });
  t.push_back([=] {
    const auto fs = concat(bl(cfg.seed, 1, count), bl(cfg.seed, 2, std::max(1, count / 4)));
    std::vector<double> tele(fs.size()), rt(fs.size()), pl(fs.size());
    const auto rec = pmap(fs.size(), [&](std::size_t i) {
      const GridFunction& f = fs[i];
      const BandWindow w = band_window(f);
      const auto bands = band_projections(f, w);
      GridFunction sum = bands[0];
      for (std::size_t k = 1; k < bands.size(); ++k) sum = sum + bands[k];
      const Partition part;
      const GridFunction direct = apply_multiplier(f, [&](const Frequency& xi) {
        const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        return cplx{part.psi(std::ldexp(r, -w.jhi)) - part.psi(std::ldexp(r, 1 - w.jlo)), 0.0};
      });
      const double m = f.max_abs();
      tele[i] = max_abs_diff(sum, direct) / m;
      rt[i] = roundtrip_error(f, 2);
      const Spectrum s = forward(f, 2);
      std::vector<double> a, b;
      for (const auto& v : f.values) a.push_back(std::norm(v));
      for (const auto& v : s.data) b.push_back(std::norm(v));
      pl[i] = rel_err(pairwise_sum(b) / static_cast<double>(s.data.size()), pairwise_sum(a));
      return max_abs_diff(sum, f) / m;
    });
    return make("reconstruction", "Band projections reconstruct band-limited functions", "lp-reconstruction",
                {{"count", fs.size()}},
                {{"max_reconstruction_err", vmax(rec)}, {"max_telescoping_err", vmax(tele)}, {"max_roundtrip_err", vmax(rt)},
                 {"max_plancherel_err", vmax(pl)}},
                {{"reconstruction_tol", 1e-9}, {"telescoping_tol", 1e-12}, {"roundtrip_tol", 1e-12}, {"plancherel_tol", 1e-12}},
                vmax(rec) <= 1e-9 && vmax(tele) <= 1e-12 && vmax(rt) <= 1e-12 && vmax(pl) <= 1e-12);
  });
  t.push_back([=] {
    std::vector<std::vector<double>> bands(2);
    for (int s = 0; s < 2; ++s) {
      const auto fs = bl(cfg.seed + 1000 * static_cast<std::uint64_t>(s), 1, count);
      bands[static_cast<std::size_t>(s)] = pmap(fs.size(), [&](std::size_t i) {
        return bm_value(lp_square_function(fs[i]), P1()) / bm_value(fs[i], P1());
      });
    }
    const double lo0 = vmin(bands[0]), hi0 = vmax(bands[0]), lo1 = vmin(bands[1]), hi1 = vmax(bands[1]);
    const double drift = std::max({lo0 / lo1, lo1 / lo0, hi0 / hi1, hi1 / hi0});
    return make("square-function-band", "Square function norm equivalence", "lp-square-function",
                {{"params", to_json(P1())}, {"count", count}, {"seeds", json::array({cfg.seed, cfg.seed + 1000})}},
                {{"band", json::array({lo0, hi0})}, {"band_other_seed", json::array({lo1, hi1})}, {"seed_drift", drift}},
                {{"max_seed_drift", 1.25}}, lo0 > 0.0 && std::isfinite(hi0) && drift <= 1.25);
  });
  t.push_back([=] {
    const auto fs = bl(cfg.seed, 1, count);
    const auto ex = pmap(fs.size(), [&](std::size_t i) {
      const BandWindow w = band_window(fs[i]);
      const int j = w.jhi - 1;
      const GridFunction pm = peetre_maximal(fs[i], j, 2.0);
      return excess_on_common(abs_of(band_project(fs[i], j)), pm);
    });
    return make("peetre-domination", "Peetre maximal function dominates the band projection", "peetre-maximal",
                {{"a", 2.0}, {"count", fs.size()}}, {{"max_excess", vmax(ex)}}, {{"max_excess", 1e-14}}, vmax(ex) <= 1e-14);
  });
  t.push_back([=] {
    const auto fs = corpus(cfg.seed, "random-cells", 1, J, count);
    const auto errs = pmap(fs.size(), [&](std::size_t i) {
      const GridFunction& f = fs[i];
      const BandWindow w = band_window(f);
      const std::size_t nb = static_cast<std::size_t>(w.jhi - w.jlo + 1);
      const std::vector<int> zero(nb, 0);
      std::vector<int> one(nb, 0);
      one[nb / 2] = 1;
      const double ez = band_sign(f, zero, w).max_abs();
      const double eo = max_abs_diff(band_sign(f, one, w), band_project(f, w.jlo + static_cast<int>(nb / 2)));
      const ExponentVector p2{2.0};
      std::vector<int> eps(nb);
      for (std::size_t k = 0; k < nb; ++k) eps[k] = band_sign_pattern(cfg.seed + i, w.jlo + static_cast<int>(k));
      const double l2 = mixed_norm(band_sign(f, eps, w), p2) / mixed_norm(f, p2);
      const double rz = mixed_norm(riesz(f, 0), p2) / mixed_norm(f, p2);
      return std::max({ez, eo / f.max_abs(), l2 - 1.0, rz - 1.0});
    });
    return make("cz-models", "Multiplier models: zero pattern, single band and L2 contraction", "cz-multiplier",
                {{"count", fs.size()}}, {{"max_defect", vmax(errs)}}, {{"max_defect", 1e-10}}, vmax(errs) <= 1e-10);
  });
  t.push_back([=] {
    const auto fs = corpus(cfg.seed, "random-cells", 1, J, std::max(1, count / 2));
    std::vector<double> ratios(64, 0.0);
    parallel_for(64, [&](std::size_t s) {
      double r = 0.0;
      for (const auto& f : fs) r = std::max(r, operator_ratio(OperatorSpec{"band-sign", 0.5, 0, cfg.seed + 7919 * s}, f, P1(), P1()));
      ratios[s] = r;
    });
    const double spread = vmax(ratios) / vmin(ratios);
    return make("sign-pattern-uniformity", "Multiplier ratios uniform over sign patterns", "multiplier-uniformity",
                {{"patterns", 64}, {"count", fs.size()}, {"params", to_json(P1())}},
                {{"min", vmin(ratios)}, {"max", vmax(ratios)}, {"spread", spread}}, {{"max_spread", 2.0}},
                std::isfinite(spread) && spread <= 2.0);
  });
  t.push_back([=] {
    const auto fs = bl(cfg.seed, 1, count);
    const double s = 0.4, a = 0.5;
    const auto r = pmap(fs.size(), [&](std::size_t i) {
      const double lhs = tl_norm(fractional_laplacian(fs[i], a), TLParams{P1(), s, 2.0});
      const double rhs = tl_norm(fs[i], TLParams{P1(), s + a, 2.0});
      return lhs / rhs;
    });
    return make("laplacian-shift", "Fractional Laplacian shifts the smoothness index", "smoothness-shift",
                {{"s", s}, {"alpha", a}, {"q", 2.0}, {"count", fs.size()}}, {{"band", json::array({vmin(r), vmax(r)})}},
                {{"band", json::array({0.25, 4.0})}}, vmin(r) >= 0.25 && vmax(r) <= 4.0);
  });
  return t;
}

// ---------------------------------------------------------------- heat

std::vector<Task> heat_suite(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  std::vector<Task> t;
  t.push_back([=] {
    double worst = 0.0, mass = 0.0;
    for (int n : {1, 2}) {
      const GridFunction g = sampled_gaussian(n, J, -6, 6, {0, 0, 0}, 1.0);
      for (double alpha : {0.125, 0.25, 1.0}) {
        const GridFunction u = heat(g, alpha);
        const double s = 1.0 + 4.0 * M_PI * alpha;
        const double amp = std::pow(s, -0.5 * n);
        for (std::size_t i = 0; i < u.size(); ++i) {
          const Index rel = u.unflat(i);
          double r2 = 0.0;
          for (int d = 0; d < n; ++d) {
            const double x = (static_cast<double>(rel[d] + u.origin[d]) + 0.5) * u.h();
            r2 += x * x;
          }
          worst = std::max(worst, std::abs(u.values[i] - amp * std::exp(-M_PI * r2 / s)));
        }
        cplx a{}, b{};
        for (const auto& v : u.values) a += v;
        for (const auto& v : g.values) b += v;
        mass = std::max(mass, std::abs(a - b) / std::abs(b));
      }
    }
    return make("gaussian-closed-form", "Heat semigroup on a Gaussian", "heat-gaussian", {{"alpha", jarr({0.125, 0.25, 1.0})}},
                {{"max_abs_err", worst}, {"max_mass_err", mass}}, {{"abs_tol", 1e-6}, {"mass_tol", 1e-10}},
                worst <= 1e-6 && mass <= 1e-10);
  });
  t.push_back([=] {
    const auto fs = concat(corpus(cfg.seed, "band-limited", 1, J, count), corpus(cfg.seed, "band-limited", 2, J, std::max(1, count / 4)));
    const std::vector<double> alphas{0.5, 0.125, 0.03125};
    json rows = json::array();
    std::vector<double> bad(fs.size());
    std::vector<HeatCheck> hcs(fs.size());
    parallel_for(fs.size(), [&](std::size_t i) {
      hcs[i] = heat_characterization_check(fs[i], alphas, params_for(fs[i].dim));
      bad[i] = hcs[i].decreasing && hcs[i].residual.back() < hcs[i].residual.front() ? 0.0 : 1.0;
    });
    for (const auto& h : hcs) rows.push_back(jarr(h.residual));
    return make("heat-characterization", "Heat residuals decrease along the semigroup parameter", "heat-characterization",
                {{"alpha", jarr(alphas)}, {"count", fs.size()}}, {{"residuals", rows}, {"violations", count_if_true(bad)}},
                {{"strictly_decreasing", true}}, count_if_true(bad) == 0);
  });
  t.push_back([=] {
    const auto fs = corpus(cfg.seed, "band-limited", 1, J, count);
    std::vector<double> alphas;
    for (int k = 1; k <= 21; k += 4) alphas.push_back(std::ldexp(1.0, -k));
    std::vector<double> last(fs.size());
    const auto bad = pmap(fs.size(), [&](std::size_t i) {
      const HeatCheck h = heat_characterization_check(fs[i], alphas, P1());
      last[i] = h.residual.back() / h.residual.front();
      return h.decreasing ? 0.0 : 1.0;
    });
    return make("heat-residual-limit", "Heat residuals vanish as the parameter tends to zero", "heat-characterization",
                {{"alpha", jarr(alphas)}, {"count", fs.size()}},
                {{"max_final_over_first", vmax(last)}, {"violations", count_if_true(bad)}},
                {{"max_final_over_first", 1e-3}, {"strictly_decreasing", true}}, count_if_true(bad) == 0 && vmax(last) <= 1e-3);
  });
  t.push_back([=] {
    const auto fs = corpus(cfg.seed, "band-limited", 1, J, count);
    const std::vector<double> alphas{1e-4, 1e-5, 1e-6};
    std::vector<double> drift(fs.size());
    parallel_for(fs.size(), [&](std::size_t i) {
      std::vector<double> c;
      for (double a : alphas) c.push_back(bm_value(heat(fs[i], a) - fs[i], P1()) / a);
      drift[i] = std::max(c.front() / c.back(), c.back() / c.front());
    });
    return make("small-time", "Heat residual is linear in small time", "heat-small-time", {{"alpha", jarr(alphas)}},
                {{"max_drift", vmax(drift)}}, {{"max_drift", 1.1}}, vmax(drift) <= 1.1);
  });
  t.push_back([=] {
    GridFunction z(1, J, {0, 0, 0}, {pow2i(J), 1, 1});
    const HeatCheck h = heat_characterization_check(z, {0.5, 0.125}, P1());
    return make("heat-zero", "Heat residuals of the zero function", "heat-characterization", json::object(),
                {{"residuals", jarr(h.residual)}}, {{"value", 0.0}}, vmax(h.residual) == 0.0);
  });
  return t;
}

// ---------------------------------------------------------------- wavelet

std::vector<Task> wavelet_suite(const SuiteConfig& cfg, int count) {
  const int J = cfg.resolution;
  std::vector<Task> t;
  t.push_back([=] {
    const double e1 = haar_gram_error(1, 3), e2 = haar_gram_error(2, 2);
    return make("haar-orthonormality", "Haar system is orthonormal", "wavelet-orthonormality", {{"scales_n1", 3}, {"scales_n2", 2}},
                {{"max_err", std::max(e1, e2)}}, {{"max_err", 0.0}}, e1 == 0.0 && e2 == 0.0);
  });
  t.push_back([=] {
    json rows = json::object();
    bool ok = true;
    for (const char* fam : {"db2", "db3", "db4", "db5", "db6"}) {
      const auto sys = WaveletSystem::make(fam);
      const double g = dwt_gram_error(sys, 8, 4), m = moment_residual(sys);
      rows[fam] = {{"gram", g}, {"moments", m}};
      ok = ok && g <= 1e-10 && m <= 1e-10;
    }
    return make("daubechies-gram", "Daubechies filter banks are orthogonal with vanishing moments", "wavelet-orthonormality",
                {{"length", 256}, {"levels", 4}}, rows, {{"gram_tol", 1e-10}, {"moment_tol", 1e-10}}, ok);
  });
  auto fam = [=] {
    return concat(corpus(cfg.seed, "random-cells", 1, J, count), corpus(cfg.seed, "random-cells", 2, J, std::max(1, count / 4)));
  };
  t.push_back([=] {
    const auto fs = fam();
    const auto sys = WaveletSystem::make("haar");
    const auto errs = pmap(fs.size(), [&](std::size_t i) {
      const GridFunction& f = fs[i];
      const WaveletWindow w = default_wavelet_window(f);
      const CoefficientSet cs = wavelet_coefficients(f, sys, w);
      const GridFunction S = wavelet_square_function(cs);
      const ExponentVector p2(static_cast<std::size_t>(f.dim), 2.0);
      const double sf = std::pow(mixed_norm(S, p2), 2.0);
      const double oracle = std::pow(mixed_norm(f, p2), 2.0) - std::pow(mixed_norm(conditional_expectation(f, w.jlo), p2), 2.0);
      std::vector<double> sq;
      for (const auto& c : cs.coeffs) sq.push_back(std::norm(c.value));
      const double coef = pairwise_sum(sq);
      return std::max(rel_err(sf, oracle), rel_err(coef, oracle));
    });
    return make("haar-plancherel", "Square function energy equals the detail energy", "wavelet-plancherel",
                {{"count", fs.size()}}, {{"max_rel_err", vmax(errs)}}, {{"rel_tol", 1e-10}}, vmax(errs) <= 1e-10);
  });
  t.push_back([=] {
    const auto fs = fam();
    const auto sys = WaveletSystem::make("haar");
    const auto errs = pmap(fs.size(), [&](std::size_t i) {
      const GridFunction& f = fs[i];
      const WaveletWindow w{J - 3, J};
      Index k{1, 0, 0};
      if (f.dim == 2) k = {1, -2, 0};
      const CoefficientSet a = wavelet_coefficients(f, sys, w);
      const CoefficientSet b = wavelet_coefficients(translate_lattice(f, k, w.jlo), sys, w);
      std::map<std::tuple<int, int, std::int64_t, std::int64_t>, cplx> ma;
      for (const auto& c : a.coeffs) {
        const std::int64_t s = pow2i(c.j - w.jlo);
        ma[{c.ell, c.j, c.k[0] + k[0] * s, c.k[1] + k[1] * s}] = c.value;
      }
      double e = 0.0;
      std::size_t matched = 0;
      for (const auto& c : b.coeffs) {
        auto it = ma.find({c.ell, c.j, c.k[0], c.k[1]});
        const cplx v = it == ma.end() ? cplx{} : it->second;
        matched += it != ma.end();
        e = std::max(e, std::abs(c.value - v));
      }
      return matched == ma.size() ? e : kInf;
    });
    return make("haar-translation", "Haar coefficients shift with lattice translations", "wavelet-covariance",
                {{"count", fs.size()}}, {{"max_abs_err", number_to_json(vmax(errs))}}, {{"abs_tol", 1e-14}}, vmax(errs) <= 1e-14);
  });
  for (const char* family : {"db4", "haar"}) {
    t.push_back([=] {
      const auto fs = corpus(cfg.seed, "random-cells", 1, J, count);
      const auto sys = WaveletSystem::make(family);
      const EquivalenceReport rep = wavelet_equivalence_check(fs, sys, P1());
      const auto scaled_rep = wavelet_equivalence_check({scaled(fs[0], 3.0)}, sys, P1());
      const auto base_rep = wavelet_equivalence_check({fs[0]}, sys, P1());
      const double hom = scaled_rep.ratios.empty() ? 0.0 : rel_err(scaled_rep.ratios[0], base_rep.ratios[0]);
      const bool asserted = std::string(family) != "haar";
      const bool ok = !rep.ratios.empty() && rep.lo > 0.0 && std::isfinite(rep.hi) && hom <= 1e-12;
      return make(std::string("equivalence-") + family, "Wavelet square function norm equivalence", "wavelet-equivalence",
                  {{"family", family}, {"params", to_json(P1())}, {"count", fs.size()}, {"in_hypotheses", rep.in_hypotheses}},
                  {{"band", json::array({rep.lo, rep.hi})}, {"homogeneity_err", hom}, {"band_ok", ok}},
                  {{"positive_finite", true}, {"asserted", asserted}}, ok || !asserted);
    });
  }
  return t;
}

// ---------------------------------------------------------------- chain-rule

ChainRuleParams chain_params() {
  ChainRuleParams cp;
  cp.sp1 = SpaceParams{{1.5}, 2.0, 4.0};
  cp.sp2 = SpaceParams{{4.0}, 6.0, 12.0};
  cp.s = 0.6;
  cp.q = 2.0;
  return cp;
}

std::vector<Task> chain_rule(const SuiteConfig& cfg, int count) {
  std::vector<Task> t;
  const ChainRuleParams cp = chain_params();
  const json params = {{"G", to_json(cp.sp1)}, {"u", to_json(cp.sp2)}, {"s", cp.s}, {"q", cp.q}};
  t.push_back([=] {
    const std::vector<int> Js{4, 5, 6};
    std::vector<std::vector<double>> ratios(Js.size());
    std::vector<double> hom(static_cast<std::size_t>(count), 0.0);
    for (std::size_t a = 0; a < Js.size(); ++a) {
      const auto fs = corpus(cfg.seed, "band-limited", 1, Js[a], count);
      ratios[a] = pmap(fs.size(), [&](std::size_t i) {
        const double r = chain_rule_check(fs[i], cp).ratio;
        if (a == 0) hom[i] = rel_err(chain_rule_check(scaled(fs[i], 3.0), cp).ratio, r);
        return r;
      });
    }
    double spread = 0.0;
    bool finite = true;
    json rows = json::array();
    for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
      std::vector<double> v;
      for (const auto& r : ratios) v.push_back(r[i]);
      for (double x : v) finite = finite && std::isfinite(x) && x > 0.0;
      spread = std::max(spread, vmax(v) / vmin(v));
      rows.push_back(jarr(v));
    }
    return make("chain-rule", "Fractional chain rule ratio", "fractional-chain-rule", params,
                {{"ratios", rows}, {"spread", number_to_json(spread)}, {"max_homogeneity_err", vmax(hom)}},
                {{"max_spread", 2.0}, {"homogeneity_tol", 1e-10}}, finite && spread <= 2.0 && vmax(hom) <= 1e-10);
  });
  t.push_back([=] {
    GridFunction z(1, cfg.resolution, {0, 0, 0}, {pow2i(cfg.resolution), 1, 1});
    const double r = chain_rule_check(z, cp).ratio;
    return make("chain-rule-zero", "Chain rule ratio of the zero function", "fractional-chain-rule", params, {{"ratio", r}},
                {{"ratio", 0.0}}, r == 0.0);
  });
  return t;
}

struct SuiteDef {
  const char* name;
  int default_count;
  std::vector<Task> (*build)(const SuiteConfig&, int);
};

const std::vector<SuiteDef>& suites() {
  static const std::vector<SuiteDef> defs = {
      {"norms-exact", 50, norms_exact},
      {"embeddings", 200, embeddings},
      {"dilation-translation", 200, dilation_translation},
      {"holder-young", 1000, holder_young},
      {"duality-sandwich", 100, duality_sandwich},
      {"maximal", 16, maximal},
      {"fractional", 16, fractional},
      {"littlewood-paley", 8, littlewood_paley},
      {"heat", 8, heat_suite},
      {"wavelet", 12, wavelet_suite},
      {"chain-rule", 6, chain_rule},
  };
  return defs;
}

}  // namespace

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

const CheckRecord* VerificationReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : suites()) v.push_back(d.name);
    return v;
  }();
  return names;
}

VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  const SuiteDef* def = nullptr;
  for (const auto& d : suites())
    if (name == d.name) def = &d;
  if (!def) throw ParseError("unknown suite: " + name);
  VerificationReport rep;
  rep.suite = name;
  rep.seed = cfg.seed;
  rep.resolution = cfg.resolution;
  const int count = cfg.count < 0 ? def->default_count : cfg.count;
  if (count == 0) {
    rep.vacuous = true;
    return rep;
  }
  require(cfg.resolution >= 3 && cfg.resolution <= 8, "suite resolution must lie in [3, 8]");
  for (const auto& task : def->build(cfg, count)) rep.checks.push_back(task());
  return rep;
}

json to_json(const VerificationReport& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["suite"] = r.suite;
  j["environment"] = {{"version", kVersion}, {"seed", r.seed}, {"resolution", r.resolution}};
  j["vacuous"] = r.vacuous;
  j["passed"] = r.passed();
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"id", c.id},
                      {"theorem", c.theorem},
                      {"anchor", c.anchor},
                      {"parameters", c.parameters},
                      {"measured", c.measured},
                      {"bound", c.bound},
                      {"pass", c.pass}});
  }
  j["checks"] = std::move(checks);
  return j;
}

std::string dump_report(const VerificationReport& r) { return to_json(r).dump(2) + "\n"; }

// ---------------------------------------------------------------- operator norms

const std::vector<std::string>& operator_ids() {
  static const std::vector<std::string> ids = {"identity",           "dyadic-maximal",      "shifted-maximal-sum",
                                               "iterated-maximal",   "martingale-maximal",  "fractional-integral",
                                               "riesz",              "band-sign"};
  return ids;
}

int band_sign_pattern(std::uint64_t eps_seed, int j) {
  auto g = make_stream(eps_seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(j) + (std::int64_t{1} << 20)), 0xe5);
  return (g() >> 63) ? 1 : -1;
}

GridFunction apply_operator(const OperatorSpec& op, const GridFunction& f) {
  if (op.id == "identity") return f;
  if (op.id == "dyadic-maximal") return dyadic_maximal(f);
  if (op.id == "shifted-maximal-sum") return hl_maximal_proxy(f);
  if (op.id == "iterated-maximal") return iterated_maximal(f).mid;
  if (op.id == "martingale-maximal") return martingale_maximal(f);
  if (op.id == "fractional-integral") return fractional_integral(f, op.alpha).value;
  if (op.id == "riesz") return riesz(f, op.k);
  if (op.id == "band-sign") {
    const BandWindow w = band_window(f);
    std::vector<int> eps;
    for (int j = w.jlo; j <= w.jhi; ++j) eps.push_back(band_sign_pattern(op.eps_seed, j));
    return band_sign(f, eps, w);
  }
  throw ParseError("unknown operator: " + op.id);
}

namespace {
double side_norm(const GridFunction& f, const SpaceParams& sp, NormSide side) {
  return side == NormSide::bm ? bm_value(f, sp) : block_norm_upper(f, sp).value;
}
}  // namespace

double operator_ratio(const OperatorSpec& op, const GridFunction& f, const SpaceParams& in, const SpaceParams& out, NormSide side) {
  const double d = side_norm(f, in, side);
  if (d == 0.0) return 0.0;
  return side_norm(apply_operator(op, f), out, side) / d;
}

NormEstimate estimate_operator_norm(const OperatorSpec& op, const std::vector<GridFunction>& seeds, const SpaceParams& in,
                                    const SpaceParams& out, const EstimateConfig& cfg) {
  require(!seeds.empty(), "operator norm estimate needs at least one seed function");
  const int Jw = seeds.front().J;
  for (const auto& s : seeds) require(s.J == Jw && s.dim == seeds.front().dim, "seed functions must share resolution and dimension");
  const int Jb = cfg.perturb_resolution < 0 ? Jw : std::min(cfg.perturb_resolution, Jw);
  auto lift = [&](const GridFunction& g) { return Jb == Jw ? g : refine(g, Jw); };
  auto ratio = [&](const GridFunction& g) { return operator_ratio(op, lift(g), in, out, cfg.side); };

  NormEstimate e;
  e.op = op.id;
  e.sp_in = in;
  e.sp_out = out;
  double best = -1.0;
  GridFunction arg;
  for (const auto& s : seeds) {
    if (e.evaluations >= cfg.budget) break;
    const GridFunction g = Jb < Jw ? conditional_expectation(trim(s), Jb) : trim(s);
    if (g.is_zero()) continue;
    const double r = ratio(g);
    ++e.evaluations;
    if (r > best) {
      best = r;
      arg = g;
    }
    e.trace.push_back(best);
  }
  require(best >= 0.0, "all seed functions vanish");
  std::uint64_t key = 0;
  for (char c : op.id) key = key * 131 + static_cast<unsigned char>(c);
  auto rng = make_stream(cfg.seed, key, 0xa5ce);
  while (e.evaluations < cfg.budget) {
    GridFunction cand = arg;
    const auto idx = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(cand.size()) - 1));
    cand.values[idx] += uniform(rng, -1.0, 1.0) * arg.max_abs();
    ++e.evaluations;
    if (!cand.is_zero()) {
      const double r = ratio(cand);
      if (r > best) {
        best = r;
        arg = cand;
      }
    }
    e.trace.push_back(best);
  }
  const GridFunction w = lift(arg);
  e.witness = scaled(w, 1.0 / side_norm(w, in, cfg.side));
  e.best = best;
  e.recomputed = operator_ratio(op, e.witness, in, out, cfg.side);
  return e;
}

json to_json(const NormEstimate& e) {
  json j;
  j["operator"] = e.op;
  j["sp_in"] = to_json(e.sp_in);
  j["sp_out"] = to_json(e.sp_out);
  j["best_ratio"] = number_to_json(e.best);
  j["recomputed_ratio"] = number_to_json(e.recomputed);
  j["evaluations"] = e.evaluations;
  j["trace"] = jarr(e.trace);
  j["witness"] = to_json(e.witness);
  return j;
}

}  // namespace bmkit
