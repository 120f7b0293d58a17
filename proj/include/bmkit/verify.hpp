#pragma once

#include <string>
#include <vector>

#include "bmkit/json_io.hpp"

namespace bmkit {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

struct SuiteConfig {
  std::uint64_t seed = 0;
  int resolution = 4;
  int count = -1;  // corpus size; -1 selects the suite default, 0 yields a vacuous report
};

struct CheckRecord {
  std::string id;
  std::string theorem;
  std::string anchor;
  json parameters = json::object();
  json measured;
  json bound;
  bool pass = false;
};

struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  int resolution = 0;
  std::vector<CheckRecord> checks;
  bool vacuous = false;

  bool passed() const;
  const CheckRecord* find(const std::string& id) const;
};

const std::vector<std::string>& suite_names();
VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg = {});
json to_json(const VerificationReport& r);
/// Stable text form of the report (indent 2, trailing newline).
std::string dump_report(const VerificationReport& r);

/// Operators accepted by estimate_operator_norm: identity, dyadic-maximal, shifted-maximal-sum, iterated-maximal,
/// martingale-maximal, fractional-integral, riesz, band-sign.
struct OperatorSpec {
  std::string id = "identity";
  double alpha = 0.5;            // fractional-integral
  int k = 0;                     // riesz component
  std::uint64_t eps_seed = 0;    // band-sign pattern, keyed by absolute band index
};
const std::vector<std::string>& operator_ids();
GridFunction apply_operator(const OperatorSpec& op, const GridFunction& f);
/// Sign of band j in the band-sign pattern.
int band_sign_pattern(std::uint64_t eps_seed, int j);

enum class NormSide { bm, block_upper };

struct EstimateConfig {
  int budget = 5000;
  std::uint64_t seed = 0;
  /// Resolution of the perturbed cells; -1 selects the resolution of the seeds.
  int perturb_resolution = -1;
  NormSide side = NormSide::bm;
};

struct NormEstimate {
  std::string op;
  SpaceParams sp_in, sp_out;
  double best = 0.0;
  double recomputed = 0.0;  // ratio of the stored witness, evaluated afresh
  GridFunction witness;     // input norm 1
  std::vector<double> trace;  // best ratio after each evaluation
  int evaluations = 0;
};

double operator_ratio(const OperatorSpec& op, const GridFunction& f, const SpaceParams& in, const SpaceParams& out,
                      NormSide side = NormSide::bm);
/// Best ratio over the seeds, then greedy single-cell perturbation ascent within the budget.
NormEstimate estimate_operator_norm(const OperatorSpec& op, const std::vector<GridFunction>& seeds, const SpaceParams& in,
                                    const SpaceParams& out, const EstimateConfig& cfg = {});
json to_json(const NormEstimate& e);

}  // namespace bmkit
