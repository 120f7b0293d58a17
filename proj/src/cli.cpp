#include "bmkit/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "bmkit/corpus.hpp"
#include "bmkit/real_operators.hpp"
#include "bmkit/spectral.hpp"
#include "bmkit/verify.hpp"
#include "bmkit/wavelet.hpp"

namespace bmkit {

namespace {

struct Globals {
  std::uint64_t seed = 0;
  int resolution = 4;
  std::string report;
};

struct Common {
  std::string in;
  std::string out;
  std::string params;
  std::string spectral;
};

SpaceParams parse_params(const std::string& text) {
  if (text.empty()) throw ParseError("--params is required");
  return space_params_from_json(parse_json(text, "--params"));
}

GridFunction load_function(const std::string& path) {
  if (path.empty()) throw ParseError("--in is required");
  return grid_function_from_json(path == "-" ? parse_json(std::string(std::istreambuf_iterator<char>(std::cin), {}), "stdin")
                                             : read_json_file(path));
}

/// {"inner": 2, "outer": 4, "pad_factor": 2}; inline JSON or a file path.
SpectralConfig parse_spectral(const std::string& arg) {
  SpectralConfig cfg;
  if (arg.empty()) return cfg;
  const json j = arg.front() == '{' ? parse_json(arg, "--spectral") : read_json_file(arg);
  if (!j.is_object()) throw ParseError("--spectral: expected an object");
  if (j.contains("inner")) cfg.partition.inner = number_from_json(j["inner"], "--spectral/inner");
  if (j.contains("outer")) cfg.partition.outer = number_from_json(j["outer"], "--spectral/outer");
  if (j.contains("pad_factor")) {
    if (!j["pad_factor"].is_number_integer()) throw ParseError("--spectral/pad_factor: expected an integer");
    cfg.pad_factor = j["pad_factor"].get<int>();
  }
  require(cfg.partition.inner > 0.0 && cfg.partition.inner < cfg.partition.outer, "partition radii must satisfy 0 < inner < outer");
  require(cfg.pad_factor >= 2, "spectral padding factor must be at least 2");
  return cfg;
}

void emit(const json& artifact, const Common& c, const Globals& g) {
  const std::string text = artifact.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream(c.out) << text;
    std::cerr << "wrote " << c.out << "\n";
  }
  if (!g.report.empty()) std::ofstream(g.report) << text;
}

void add_io(CLI::App* sub, Common& c, bool params) {
  sub->add_option("--in", c.in, "Input function JSON (- for stdin)");
  sub->add_option("--out", c.out, "Output path (default stdout)");
  if (params) sub->add_option("--params", c.params, R"(Space parameters, e.g. {"p":[2],"t":3,"r":6})");
  sub->fallthrough();
}

json upper_json(const UpperBound& u) {
  return {{"value", number_to_json(u.value)}, {"scale", u.scale}, {"window", {u.window.jlo, u.window.jhi}}, {"slices", [&] {
             json a = json::array();
             for (double s : u.slices) a.push_back(number_to_json(s));
             return a;
           }()}};
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"bmkit: mixed Bourgain-Morrey space toolkit", "bmkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Corpus and search seed");
  app.add_option("--resolution", g.resolution, "Grid resolution J");
  app.add_option("--report", g.report, "Also write the JSON artifact to this path");
  std::function<int()> run;

  // norm
  auto* norm = app.add_subcommand("norm", "Evaluate a norm");
  norm->require_subcommand(1);
  norm->fallthrough();
  Common nbm, nblk, ntl;
  auto* norm_bm = norm->add_subcommand("bm", "Bourgain-Morrey norm breakdown");
  add_io(norm_bm, nbm, true);
  norm_bm->callback([&] {
    run = [&] {
      emit(to_json(bm_norm(load_function(nbm.in), parse_params(nbm.params))), nbm, g);
      return 0;
    };
  });
  std::string block_mode = "upper";
  auto* norm_block = norm->add_subcommand("block", "Block-space norm bounds");
  add_io(norm_block, nblk, true);
  norm_block->add_option("--mode", block_mode, "upper, inf or lower")->check(CLI::IsMember({"upper", "inf", "lower"}));
  norm_block->callback([&] {
    run = [&] {
      const GridFunction f = load_function(nblk.in);
      const SpaceParams sp = parse_params(nblk.params);
      json out;
      if (block_mode == "upper") {
        out = upper_json(block_norm_upper(f, sp));
      } else if (block_mode == "inf") {
        const InfimumResult r = block_norm_infimum(f, sp);
        out = {{"value", number_to_json(r.value)}, {"converged", r.converged}, {"iterations", r.iterations},
               {"upper", number_to_json(block_norm_upper(f, sp).value)}};
      } else {
        SearchConfig sc;
        sc.seed = g.seed;
        const LowerBound r = block_norm_lower(f, sp, sc);
        out = {{"value", number_to_json(r.value)}, {"witness", to_json(r.witness)}};
      }
      out["mode"] = block_mode;
      emit(out, nblk, g);
      return 0;
    };
  });
  double tl_s = 0.0, tl_q = 2.0;
  bool besov = false;
  auto* norm_tl = norm->add_subcommand("tl", "Triebel-Lizorkin (or Besov) type norm over the band window");
  add_io(norm_tl, ntl, true);
  norm_tl->add_option("--s", tl_s, "Smoothness");
  norm_tl->add_option("--q", tl_q, "Inner sequence exponent");
  norm_tl->add_flag("--besov", besov, "Use the Besov-type arrangement");
  norm_tl->add_option("--spectral", ntl.spectral, "Partition config JSON (inline or path)");
  norm_tl->callback([&] {
    run = [&] {
      const TLParams tp{parse_params(ntl.params), tl_s, tl_q};
      const GridFunction f = load_function(ntl.in);
      const SpectralConfig sc = parse_spectral(ntl.spectral);
      const double v = besov ? besov_norm(f, tp, sc) : tl_norm(f, tp, sc);
      emit({{"value", number_to_json(v)}, {"s", tl_s}, {"q", number_to_json(tl_q)}, {"besov", besov}}, ntl, g);
      return 0;
    };
  });

  // apply
  Common ap;
  std::string op;
  double alpha = 0.5, a_peetre = 2.0;
  int band = 0, component = 0;
  std::string family = "db4";
  auto* apply = app.add_subcommand("apply", "Apply an operator to a function");
  add_io(apply, ap, false);
  apply->add_option("operator", op, "maximal, shifted, itmax, martmax, frac, heat, lp-band, lp-square, peetre, riesz, laplacian, "
                                    "band-sign, wavelet-sq")
      ->required()
      ->check(CLI::IsMember({"maximal", "shifted", "itmax", "martmax", "frac", "heat", "lp-band", "lp-square", "peetre", "riesz",
                             "laplacian", "band-sign", "wavelet-sq"}));
  apply->add_option("--alpha", alpha, "Order (frac, laplacian) or time (heat)");
  apply->add_option("--j", band, "Band index (lp-band, peetre)");
  apply->add_option("--a", a_peetre, "Peetre exponent");
  apply->add_option("--k", component, "Riesz component");
  apply->add_option("--family", family, "Wavelet family: haar, db1..db6");
  apply->add_option("--spectral", ap.spectral, "Partition config JSON (inline or path)");
  apply->callback([&] {
    run = [&] {
      const GridFunction f = load_function(ap.in);
      const SpectralConfig sc = parse_spectral(ap.spectral);
      json out;
      if (op == "maximal") {
        out = to_json(dyadic_maximal(f));
      } else if (op == "shifted") {
        out = to_json(hl_maximal_proxy(f));
      } else if (op == "itmax") {
        const Bracketed b = iterated_maximal(f);
        out = {{"value", to_json(b.mid)}, {"lower", to_json(b.lo)}, {"upper", to_json(b.hi)}};
      } else if (op == "martmax") {
        out = to_json(martingale_maximal(f));
      } else if (op == "frac") {
        const FractionalResult r = fractional_integral(f, alpha);
        out = {{"value", to_json(r.value)}, {"quadrature_error", number_to_json(r.quadrature_error)}};
      } else if (op == "heat") {
        out = to_json(heat(f, alpha, sc));
      } else if (op == "lp-band") {
        out = to_json(band_project(f, band, sc));
      } else if (op == "lp-square") {
        out = to_json(lp_square_function(f, sc));
      } else if (op == "peetre") {
        out = to_json(peetre_maximal(f, band, a_peetre, sc));
      } else if (op == "riesz") {
        out = to_json(riesz(f, component, sc));
      } else if (op == "laplacian") {
        out = to_json(fractional_laplacian(f, alpha, sc));
      } else if (op == "band-sign") {
        OperatorSpec spec{"band-sign", alpha, 0, g.seed};
        out = to_json(apply_operator(spec, f));
      } else {
        out = to_json(wavelet_square_function(f, WaveletSystem::make(family), default_wavelet_window(f)));
      }
      emit(out, ap, g);
      return 0;
    };
  });

  // decompose
  Common dc;
  std::string what;
  int dscale = 0;
  bool has_scale = false;
  auto* decompose = app.add_subcommand("decompose", "Block decomposition or wavelet coefficient dump");
  add_io(decompose, dc, true);
  decompose->add_option("kind", what, "blocks or wavelet")->required()->check(CLI::IsMember({"blocks", "wavelet"}));
  auto* scale_opt = decompose->add_option("--scale", dscale, "Single-scale decomposition at this scale");
  decompose->add_option("--family", family, "Wavelet family");
  decompose->callback([&] {
    has_scale = scale_opt->count() > 0;
    run = [&] {
      const GridFunction f = load_function(dc.in);
      if (what == "wavelet") {
        emit(to_json(wavelet_coefficients(f, WaveletSystem::make(family), default_wavelet_window(f))), dc, g);
      } else {
        const SpaceParams sp = parse_params(dc.params);
        emit(to_json(has_scale ? decompose_at_scale(f, sp, dscale) : finite_decomposition(f, sp)), dc, g);
      }
      return 0;
    };
  });

  // pair
  Common pr;
  std::string pf, pg;
  auto* pair = app.add_subcommand("pair", "Pairing of two functions, with the duality bound when --params is given");
  add_io(pair, pr, true);
  pair->add_option("--f", pf, "First function")->required();
  pair->add_option("--g", pg, "Second function")->required();
  pair->callback([&] {
    run = [&] {
      const GridFunction f = load_function(pf), h = load_function(pg);
      const cplx v = pairing(f, h);
      json out = {{"pairing", {v.real(), v.imag()}}};
      if (!pr.params.empty()) {
        const SpaceParams sp = parse_params(pr.params);
        const double bound = bm_value(f, sp) * block_norm_upper(h, sp).value;
        out["bound"] = number_to_json(bound);
        out["within_bound"] = std::abs(v) <= bound * (1.0 + 1e-12);
      }
      emit(out, pr, g);
      return 0;
    };
  });

  // estimate-norm
  Common es;
  OperatorSpec ospec;
  std::string in_params, out_params, side = "bm", efam = "random-cells";
  int budget = 5000, ecount = 8, edim = 1, ebase = -1;
  auto* estimate = app.add_subcommand("estimate-norm", "Randomized lower bound for an operator norm");
  add_io(estimate, es, false);
  estimate->add_option("--op", ospec.id, "Operator id")->required()->check(CLI::IsMember(operator_ids()));
  estimate->add_option("--alpha", ospec.alpha, "Fractional order");
  estimate->add_option("--k", ospec.k, "Riesz component");
  estimate->add_option("--in-params", in_params, "Input space parameters")->required();
  estimate->add_option("--out-params", out_params, "Output space parameters (default: input)");
  estimate->add_option("--norm", side, "bm or block-upper")->check(CLI::IsMember({"bm", "block-upper"}));
  estimate->add_option("--budget", budget, "Evaluation budget");
  estimate->add_option("--family", efam, "Seed corpus family");
  estimate->add_option("--count", ecount, "Seed corpus size");
  estimate->add_option("--dim", edim, "Dimension");
  estimate->add_option("--perturb-resolution", ebase, "Resolution of perturbed cells");
  estimate->callback([&] {
    run = [&] {
      const SpaceParams a = parse_params(in_params);
      const SpaceParams b = out_params.empty() ? a : parse_params(out_params);
      std::vector<GridFunction> seeds;
      if (!es.in.empty()) {
        seeds.push_back(load_function(es.in));
      } else {
        FunctionCorpus fc;
        fc.seed = g.seed;
        fc.family = efam;
        fc.count = ecount;
        fc.dim = edim;
        fc.J = g.resolution;
        fc.J0 = std::min(2, g.resolution);
        seeds = generate_corpus(fc);
      }
      ospec.eps_seed = g.seed;
      EstimateConfig ec;
      ec.budget = budget;
      ec.seed = g.seed;
      ec.perturb_resolution = ebase;
      ec.side = side == "bm" ? NormSide::bm : NormSide::block_upper;
      std::cerr << "estimating " << ospec.id << " with budget " << budget << "\n";
      emit(to_json(estimate_operator_norm(ospec, seeds, a, b, ec)), es, g);
      return 0;
    };
  });

  // verify
  Common vf;
  std::string suite;
  int vcount = -1;
  auto* verify = app.add_subcommand("verify", "Run a verification suite (or all)");
  verify->fallthrough();
  verify->add_option("suite", suite, "Suite name or all")->required();
  verify->add_option("--count", vcount, "Corpus size (0 gives a vacuous report)");
  verify->add_option("--out", vf.out, "Output path (default stdout)");
  verify->callback([&] {
    run = [&] {
      std::vector<std::string> names;
      if (suite == "all") {
        names = suite_names();
      } else {
        names = {suite};
      }
      SuiteConfig cfg{g.seed, g.resolution, vcount};
      bool ok = true;
      json out = json::array();
      std::vector<VerificationReport> reports;
      for (const auto& n : names) {
        std::cerr << "suite " << n << " ..." << std::flush;
        reports.push_back(run_suite(n, cfg));
        const auto& r = reports.back();
        std::size_t failed = 0;
        for (const auto& c : r.checks) failed += !c.pass;
        std::cerr << (r.vacuous ? " vacuous" : failed ? " FAILED" : " ok") << " (" << r.checks.size() - failed << "/"
                  << r.checks.size() << ")\n";
        for (const auto& c : r.checks)
          if (!c.pass) std::cerr << "  failed: " << c.id << "\n";
        ok = ok && r.passed();
      }
      if (reports.size() == 1) {
        const std::string text = dump_report(reports[0]);
        if (vf.out.empty()) std::cout << text; else std::ofstream(vf.out) << text;
        if (!g.report.empty()) std::ofstream(g.report) << text;
      } else {
        for (const auto& r : reports) out.push_back(to_json(r));
        emit(out, vf, g);
      }
      return ok ? 0 : 1;
    };
  });

  // corpus
  Common cp;
  FunctionCorpus fc;
  auto* corp = app.add_subcommand("corpus", "Generate a seeded corpus as a JSON array of functions");
  corp->fallthrough();
  corp->add_option("--family", fc.family, "Family")->check(CLI::IsMember(corpus_families()));
  corp->add_option("--count", fc.count, "Number of functions");
  corp->add_option("--dim", fc.dim, "Dimension");
  corp->add_option("--J0", fc.J0, "Resolution of the random structure");
  corp->add_option("--params", cp.params, "Primal parameters for the blocks family");
  corp->add_option("--out", cp.out, "Output path (default stdout)");
  corp->callback([&] {
    run = [&] {
      fc.seed = g.seed;
      fc.J = g.resolution;
      fc.J0 = std::min(fc.J0, fc.J);
      if (!cp.params.empty()) fc.params = parse_params(cp.params);
      json out = json::array();
      for (const auto& f : generate_corpus(fc)) out.push_back(to_json(f));
      emit(out, cp, g);
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    require(g.resolution >= 0 && g.resolution <= 20, "--resolution must lie in [0, 20]");
    return run ? run() : 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace bmkit
