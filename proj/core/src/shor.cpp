#include "lgshor/shor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lgshor {

long long brute_force_order(long long a, long long N) {
  if (N < 2) throw std::domain_error("brute_force_order: modulus must be at least 2");
  if (a < 1 || a >= N) throw std::domain_error("brute_force_order: need 1 <= a < N");
  if (std::gcd(a, N) != 1) throw std::domain_error("brute_force_order: a not coprime with N");
  long long value = a % N;
  long long r = 1;
  while (value != 1) {
    value = (value * a) % N;
    ++r;
  }
  return r;
}

std::optional<long long> extract_order(long long j, int n) {
  if (n < 0 || n > 62) throw std::domain_error("extract_order: register size out of range");
  const long long dim = 1LL << n;
  if (j < 0 || j >= dim) throw std::domain_error("extract_order: j outside [0, 2^n)");
  if (j == 0) return std::nullopt;
  return dim / std::gcd(j, dim);
}

std::optional<std::pair<long long, long long>> factors_from_order(long long a, long long r,
                                                                  long long N) {
  if (r < 1 || mod_pow(a, r, N) != 1) {
    throw std::domain_error("factors_from_order: a^r != 1 mod N");
  }
  if (r % 2 != 0) return std::nullopt;
  const long long half_power = mod_pow(a, r / 2, N);
  if (half_power == N - 1) return std::nullopt;  // a^{r/2} = -1: bad base
  const long long p = std::gcd(half_power - 1, N);
  const long long q = std::gcd(half_power + 1, N);
  if (p <= 1 || p >= N || q <= 1 || q >= N) return std::nullopt;
  return std::make_pair(p, q);
}

const char* run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Abstract: return "abstract";
    case RunMode::Circuit: return "circuit";
    case RunMode::Physical: return "physical";
  }
  return "unknown";
}

RunMode run_mode_from_name(const std::string& name) {
  if (name == "abstract") return RunMode::Abstract;
  if (name == "circuit") return RunMode::Circuit;
  if (name == "physical") return RunMode::Physical;
  throw std::invalid_argument("unknown run mode: " + name);
}

std::optional<long long> order_from_support(const std::set<long long>& j_values, int n,
                                            long long a, long long N) {
  std::optional<long long> best;
  for (long long j : j_values) {
    if (j == 0) continue;
    const auto candidate = extract_order(j, n);
    if (!candidate) continue;
    if (mod_pow(a, *candidate, N) != 1) continue;
    if (!best || *candidate > *best) best = candidate;
  }
  return best;
}

const ModeState& PipelineRun::stage(const std::string& name) const {
  for (const auto& record : stages) {
    if (record.name == name) return record.state;
  }
  throw std::invalid_argument("PipelineRun: no stage named '" + name + "'");
}

namespace {

std::set<long long> support_set(const ModeState& state, const BasisMap& basis) {
  std::set<long long> values;
  for (std::size_t x : basis_support(state, basis)) {
    values.insert(static_cast<long long>(x));
  }
  return values;
}

void finish_readout(PipelineRun& run, const BasisMap& basis) {
  const long long a = run.problem.base();
  const long long N = run.problem.modulus();
  const int n = run.problem.control_bits();

  if (run.mode != RunMode::Physical) {
    auto js = support_set(run.stage("post_dft_h"), basis);
    for (long long j : support_set(run.stage("post_dft_v"), basis)) js.insert(j);
    run.readout.j_values = js;
  }
  // Physical mode filled j_values from the classified patterns already.

  if (run.readout.j_values.empty()) {
    run.readout.failure_reason = "no readout support";
    return;
  }
  run.readout.r = order_from_support(run.readout.j_values, n, a, N);
  if (!run.readout.r) {
    run.readout.failure_reason =
        "only j = 0 observed: order-finding failure, retry with a different base";
    return;
  }
  run.readout.factors = factors_from_order(a, *run.readout.r, N);
  if (!run.readout.factors) {
    const long long r = *run.readout.r;
    if (r % 2 != 0) {
      run.readout.failure_reason = "odd order: retry with a different base";
    } else if (mod_pow(a, r / 2, N) == N - 1) {
      run.readout.failure_reason = "bad base: a^{r/2} = -1 mod N";
    } else {
      run.readout.failure_reason = "trivial gcd pair: retry with a different base";
    }
  }
}

}  // namespace

PipelineRun run_pipeline(const ShorProblem& problem, RunMode mode, const RunOptions& options) {
  if (problem.distinct_mef_values().size() > 2) {
    throw std::domain_error(
        "run_pipeline: instance exceeds the two-valued work register; "
        "use run_generalized_abstract");
  }
  const BasisMap& basis = options.basis;
  const WorkMap work_map = options.work_map ? *options.work_map : default_work_map(problem);

  PipelineRun run(problem, mode);
  const ModeState input = make_input_state(problem, basis);
  run.stages.push_back({"input", input});

  ModeState post_mef;
  if (mode == RunMode::Abstract) {
    post_mef = apply_mef(input, problem, basis, work_map);
  } else {
    const CircuitPath mef = build_mef_circuit(problem, basis, work_map);
    post_mef = simulate_path(mef, {{"laser", ModeState::single(0, Polarization::H)}})
                   .sinks.at("out");
  }
  run.stages.push_back({"post_mef", post_mef});

  ModeState proj_h, proj_v;
  if (mode == RunMode::Abstract) {
    proj_h = project_work(post_mef, Polarization::H);
    proj_v = project_work(post_mef, Polarization::V);
  } else {
    const ElementOutputs split =
        apply_element(OpticalElement::polarizing_beam_splitter(), post_mef);
    proj_h = split.port0;
    proj_v = split.port1;
  }
  run.stages.push_back({"post_projection_h", proj_h});
  run.stages.push_back({"post_projection_v", proj_v});

  ModeState dft_h, dft_v;
  if (mode == RunMode::Abstract) {
    dft_h = apply_dft(proj_h, basis);
    dft_v = apply_dft(proj_v, basis);
  } else {
    const CircuitPath dft = build_dft_circuit(basis);
    const SimulationResult result = simulate_path(dft, {{"in", post_mef}});
    dft_h = result.sinks.at("H");
    dft_v = result.sinks.at("V");
  }
  run.stages.push_back({"post_dft_h", dft_h});
  run.stages.push_back({"post_dft_v", dft_v});

  if (mode == RunMode::Physical) {
    for (const auto& record : run.stages) {
      run.images.push_back({record.name, render_state(record.state, options.beam, options.screen)});
    }
    const auto library = build_reference_library(basis, options.beam, options.screen);
    const FringeImage& img_h = run.images[4].image;
    const FringeImage& img_v = run.images[5].image;
    run.classifications = classify_readout(img_h, img_v, library);

    const auto& [class_h, class_v] = *run.classifications;
    if (!class_h.recognized || !class_v.recognized) {
      std::ostringstream reason;
      reason << "unrecognized readout pattern (H: " << class_h.label << ", score "
             << class_h.best_score << "; V: " << class_v.label << ", score "
             << class_v.best_score << ")";
      run.readout.failure_reason = reason.str();
      return run;
    }
    for (int j : class_h.j_support) run.readout.j_values.insert(j);
    for (int j : class_v.j_support) run.readout.j_values.insert(j);
  }

  finish_readout(run, basis);
  return run;
}

OracleReport verify_against_oracle(const PipelineRun& run) {
  if (!run.readout.r) {
    throw std::invalid_argument("verify_against_oracle: run has no extracted order");
  }
  OracleReport report;
  report.expected_order = brute_force_order(run.problem.base(), run.problem.modulus());
  report.order_match = *run.readout.r == report.expected_order;
  {
    std::ostringstream line;
    line << "order: extracted " << *run.readout.r << ", oracle " << report.expected_order
         << (report.order_match ? " [ok]" : " [MISMATCH]");
    report.lines.push_back(line.str());
  }
  if (run.readout.factors) {
    const auto& [p, q] = *run.readout.factors;
    report.factors_ok = p > 1 && q > 1 && p * q == run.problem.modulus();
    std::ostringstream line;
    line << "factors: " << p << " x " << q << (report.factors_ok ? " [ok]" : " [MISMATCH]");
    report.lines.push_back(line.str());
  } else {
    report.factors_ok = true;  // a recorded algorithmic failure, not a mismatch
    report.lines.push_back("factors: none (" +
                           run.readout.failure_reason.value_or("unspecified failure") + ")");
  }
  report.passed = report.order_match && report.factors_ok;
  return report;
}

GeneralizedRun run_generalized_abstract(long long a, long long N, int n) {
  if (N < 3) throw std::invalid_argument("run_generalized_abstract: modulus too small");
  if (a <= 1 || a >= N) throw std::invalid_argument("run_generalized_abstract: need 1 < a < N");
  if (std::gcd(a, N) != 1) {
    throw std::invalid_argument("run_generalized_abstract: a not coprime with N");
  }
  if (n < 1 || (std::size_t{1} << n) > kMaxDftDim) {
    throw std::invalid_argument("run_generalized_abstract: register size out of range");
  }

  const std::size_t dim = std::size_t{1} << n;
  // Work classes: x values sharing the same a^x mod N.
  std::map<long long, std::vector<std::size_t>> classes;
  for (std::size_t x = 0; x < dim; ++x) {
    classes[mod_pow(a, static_cast<long long>(x), N)].push_back(x);
  }

  GeneralizedRun run;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (const auto& [value, xs] : classes) {
    // DFT of the projected (uniform over the class) control register.
    double max_mag = 0.0;
    std::vector<double> magnitudes(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      Complex sum{};
      for (std::size_t x : xs) {
        const double angle =
            2.0 * std::numbers::pi * static_cast<double>((j * x) % dim) / static_cast<double>(dim);
        sum += Complex{std::cos(angle), std::sin(angle)};
      }
      magnitudes[j] = std::abs(scale * sum);
      max_mag = std::max(max_mag, magnitudes[j]);
    }
    for (std::size_t j = 0; j < dim; ++j) {
      if (magnitudes[j] > 1e-9 * max_mag) run.j_values.insert(static_cast<long long>(j));
    }
  }

  run.r = order_from_support(run.j_values, n, a, N);
  if (run.r) run.factors = factors_from_order(a, *run.r, N);
  return run;
}

}  // namespace lgshor
