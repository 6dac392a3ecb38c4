#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lgshor/elements.hpp"
#include "lgshor/interference.hpp"
#include "lgshor/modespace.hpp"

namespace lgshor {

/// Least r >= 1 with a^r = 1 mod N, by direct iteration. The independent
/// oracle every pipeline result is checked against.
long long brute_force_order(long long a, long long N);

/// Order candidate read from a DFT output index: none for j = 0 (failure),
/// otherwise r = 2^n / gcd(j, 2^n), which reduces to 2^n / j when j divides
/// 2^n. Throws std::domain_error for j outside [0, 2^n).
std::optional<long long> extract_order(long long j, int n);

/// Classical tail of the algorithm: none when r is odd or a^{r/2} = -1 mod N
/// or the gcd pair is trivial, otherwise (gcd(a^{r/2}-1, N), gcd(a^{r/2}+1, N)).
/// Requires a^r = 1 mod N.
std::optional<std::pair<long long, long long>> factors_from_order(long long a, long long r,
                                                                  long long N);

enum class RunMode { Abstract, Circuit, Physical };

const char* run_mode_name(RunMode mode);
RunMode run_mode_from_name(const std::string& name);

struct OrderReadout {
  std::set<long long> j_values;
  std::optional<long long> r;
  std::optional<std::pair<long long, long long>> factors;
  std::optional<std::string> failure_reason;
};

/// Order candidate from a DFT support set: the largest extract_order(j) over
/// the nonzero j that actually satisfies a^r = 1 mod N.
std::optional<long long> order_from_support(const std::set<long long>& j_values, int n,
                                            long long a, long long N);

struct StageRecord {
  std::string name;
  ModeState state;
};

struct StageImage {
  std::string name;
  FringeImage image;
};

struct PipelineRun {
  PipelineRun(ShorProblem p, RunMode m) : problem(std::move(p)), mode(m) {}

  ShorProblem problem;
  RunMode mode;
  std::vector<StageRecord> stages;  // input, post_mef, post_projection_{h,v}, post_dft_{h,v}
  std::vector<StageImage> images;   // physical mode only
  std::optional<std::pair<Classification, Classification>> classifications;
  OrderReadout readout;

  const ModeState& stage(const std::string& name) const;
};

struct RunOptions {
  BasisMap basis = BasisMap::compiled_default();
  std::optional<WorkMap> work_map;  // derived from the problem when absent
  LgBeamParams beam{};
  ScreenGeometry screen{};
};

/// Runs the staged order-finding pipeline. Abstract mode chains the
/// mode-space operations, circuit mode routes through the built light-path
/// graphs, physical mode additionally renders each recorded stage and reads
/// j off the classified post-DFT patterns. All modes agree on the readout
/// for a valid instance. Requires a two-valued (compiled) instance.
PipelineRun run_pipeline(const ShorProblem& problem, RunMode mode,
                         const RunOptions& options = {});

struct OracleReport {
  bool passed = false;
  long long expected_order = 0;
  bool order_match = false;
  bool factors_ok = false;
  std::vector<std::string> lines;
};

/// Cross-checks a completed run against brute_force_order and the factor
/// product. Requires readout.r to be present.
OracleReport verify_against_oracle(const PipelineRun& run);

struct GeneralizedRun {
  std::set<long long> j_values;
  std::optional<long long> r;
  std::optional<std::pair<long long, long long>> factors;
};

/// Abstract pipeline with a d-valued work label instead of the two-valued
/// polarization register, for instances whose MEF exceeds two values. Used
/// for oracle sweeps; the optical modes reject such instances.
GeneralizedRun run_generalized_abstract(long long a, long long N, int n);

}  // namespace lgshor
