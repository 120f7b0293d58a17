#include <chrono>
#include <cstdio>
#include <map>

#include "bmkit/verify.hpp"

using namespace bmkit;

namespace {

constexpr double kRuntimeLimit = 1.0;  // seconds per closed-form evaluation

std::map<std::string, VerificationReport> run_all(int cap) {
  set_thread_cap(cap);
  std::map<std::string, VerificationReport> out;
  for (const auto& s : suite_names()) out[s] = run_suite(s, SuiteConfig{});
  set_thread_cap(0);
  return out;
}

struct Criterion {
  std::string id;
  std::string label;
  bool pass = true;
  std::string detail;

  void need(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

bool within(double x, double ref, double tol) { return std::abs(x - ref) <= tol * std::max(1.0, std::abs(ref)); }

}  // namespace

int main() {
  const json base = read_json_file(BMKIT_TEST_DATA_DIR "/baselines.json");
  const double btol = base["rel_tol"].get<double>();
  const auto reports = run_all(1);
  auto check = [&](const std::string& suite, const std::string& id) -> const CheckRecord* {
    return reports.at(suite).find(id);
  };
  std::vector<Criterion> out;
  auto require_checks = [&](Criterion& c, const std::string& suite, std::initializer_list<const char*> ids) {
    for (const char* id : ids) {
      const CheckRecord* r = check(suite, id);
      c.need(r && r->pass, suite + "/" + id);
    }
  };

  {
    Criterion c{"AC-01", "closed-form norms"};
    require_checks(c, "norms-exact", {"closed-form-1d", "closed-form-2d"});
    for (int n : {1, 2}) {
      DyadicCube q;
      q.dim = n;
      const GridFunction f = indicator(q, 6);
      const SpaceParams sp = n == 1 ? SpaceParams{{2.0}, 3.0, 6.0} : SpaceParams{{2.0, 4.0}, 4.0, 8.0};
      const auto t0 = std::chrono::steady_clock::now();
      const double v = bm_value(f, sp);
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double want = n == 1 ? std::pow(3.0, 1.0 / 6.0) : std::pow(5.0 / 3.0, 1.0 / 8.0);
      c.need(std::abs(v - want) <= 1e-9 * want, "value n=" + std::to_string(n));
      c.need(dt < kRuntimeLimit, "runtime n=" + std::to_string(n));
    }
    out.push_back(c);
  }
  {
    Criterion c{"AC-02", "nontriviality classification"};
    require_checks(c, "norms-exact", {"nontriviality-coarse", "nontriviality-fine"});
    out.push_back(c);
  }
  {
    Criterion c{"AC-03", "dilation and translation laws"};
    require_checks(c, "dilation-translation", {"dilation-law", "dilation-example", "translation-law"});
    const CheckRecord* r = check("dilation-translation", "dilation-law");
    c.need(r && r->parameters["count"].get<int>() >= 200, "corpus size");
    out.push_back(c);
  }
  {
    Criterion c{"AC-04", "constant-one embeddings"};
    require_checks(c, "embeddings", {"ell-r-embedding", "exponent-embedding"});
    out.push_back(c);
  }
  {
    Criterion c{"AC-05", "hoelder, young and pairing bounds"};
    require_checks(c, "holder-young", {"holder", "young", "pairing-duality"});
    const CheckRecord* r = check("holder-young", "pairing-duality");
    c.need(r && r->parameters["pairs"].get<int>() >= 500, "pair count");
    out.push_back(c);
  }
  {
    Criterion c{"AC-06", "block sandwich"};
    require_checks(c, "duality-sandwich", {"sandwich", "block-normalization"});
    const CheckRecord* r = check("duality-sandwich", "sandwich");
    if (r) {
      c.need(r->parameters["count"].get<int>() >= 100, "corpus size");
      c.need(within(r->measured["median_width"].get<double>(), base["sandwich_median_width"].get<double>(), btol),
             "median width regression");
    }
    out.push_back(c);
  }
  {
    Criterion c{"AC-07", "fractional integral"};
    require_checks(c, "fractional", {"closed-form-potential", "pointwise-estimate"});
    out.push_back(c);
  }
  {
    Criterion c{"AC-08", "resolution-stable operator norm estimates"};
    require_checks(c, "maximal",
                   {"bounded-dyadic-maximal", "bounded-iterated-maximal", "bounded-band-sign", "bounded-riesz",
                    "bounded-block-dyadic-maximal", "bounded-block-band-sign", "vector-maximal", "vector-maximal-two-index"});
    out.push_back(c);
  }
  {
    Criterion c{"AC-09", "littlewood-paley"};
    require_checks(c, "littlewood-paley", {"partition-of-unity", "reconstruction", "square-function-band"});
    const CheckRecord* r = check("littlewood-paley", "square-function-band");
    if (r)
      for (int k : {0, 1})
        c.need(within(r->measured["band"][k].get<double>(), base["lp_square_band"][k].get<double>(), btol), "band regression");
    out.push_back(c);
  }
  {
    Criterion c{"AC-10", "heat semigroup"};
    require_checks(c, "heat", {"gaussian-closed-form", "heat-characterization", "heat-residual-limit"});
    out.push_back(c);
  }
  {
    Criterion c{"AC-11", "wavelet characterization"};
    require_checks(c, "wavelet", {"haar-orthonormality", "daubechies-gram", "haar-plancherel", "equivalence-db4"});
    for (const char* fam : {"db4", "haar"}) {
      const CheckRecord* r = check("wavelet", std::string("equivalence-") + fam);
      if (!r) continue;
      for (int k : {0, 1})
        c.need(within(r->measured["band"][k].get<double>(), base[std::string("wavelet_") + fam + "_band"][k].get<double>(), btol),
               std::string(fam) + " band regression");
    }
    out.push_back(c);
  }
  {
    Criterion c{"AC-12", "fractional chain rule"};
    require_checks(c, "chain-rule", {"chain-rule"});
    const CheckRecord* r = check("chain-rule", "chain-rule");
    if (r) {
      const json& got = r->measured["ratios"];
      const json& want = base["chain_rule_ratios"];
      c.need(got.size() == want.size(), "ratio count");
      for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i)
        for (std::size_t k = 0; k < want[i].size(); ++k)
          c.need(within(got[i][k].get<double>(), want[i][k].get<double>(), btol), "ratio regression");
    }
    out.push_back(c);
  }
  {
    Criterion c{"AC-13", "determinism across runs and thread caps"};
    const auto again = run_all(4);
    for (const auto& [name, rep] : reports) c.need(dump_report(rep) == dump_report(again.at(name)), name);
    out.push_back(c);
  }

  int failed = 0;
  for (const auto& c : out) {
    std::printf("[%s] %s %s%s%s\n", c.pass ? "PASS" : "FAIL", c.id.c_str(), c.label.c_str(), c.detail.empty() ? "" : ": ",
                c.detail.c_str());
    failed += !c.pass;
  }
  for (const auto& [name, rep] : reports)
    for (const auto& chk : rep.checks)
      if (!chk.pass) std::printf("  failing check %s/%s\n", name.c_str(), chk.id.c_str());
  return failed == 0 ? 0 : 1;
}
