// Acceptance suite: one check per shipped guarantee, each printed as a
// single PASS/FAIL line. Returns the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lgshor/serialization.hpp"

namespace fs = std::filesystem;
using namespace lgshor;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
};

bool expect(bool condition, const std::string& what, std::string& detail) {
  if (!condition && detail.empty()) detail = what;
  return condition;
}

// ---------------------------------------------------------------------------
// 1. End-to-end factorization in all three modes, physical under 60 s at
//    512x512, exact integer results.
bool criterion_end_to_end(std::string& detail) {
  bool ok = true;
  const ShorProblem problem{15, 11, 2};
  for (RunMode mode : {RunMode::Abstract, RunMode::Circuit, RunMode::Physical}) {
    const auto start = std::chrono::steady_clock::now();
    const PipelineRun run = run_pipeline(problem, mode);  // default 512x512 screen
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string tag = run_mode_name(mode);
    ok &= expect(run.readout.r.has_value() && *run.readout.r == 2, tag + ": r != 2", detail);
    if (run.readout.factors) {
      const auto [p, q] = *run.readout.factors;
      ok &= expect(std::min(p, q) == 3 && std::max(p, q) == 5, tag + ": factors != {3,5}",
                   detail);
    } else {
      ok = expect(false, tag + ": no factors", detail);
    }
    if (mode == RunMode::Physical) {
      ok &= expect(seconds < 60.0, "physical mode exceeded 60 s", detail);
      std::ostringstream extra;
      extra << "physical 512x512 in " << seconds << " s";
      if (detail.empty()) detail = extra.str();
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 2. Worked DFT example: |-1> -> |+1> + i|-1> - |+2> - i|-2>, per-amplitude
//    error < 1e-12 after global-phase alignment.
bool criterion_dft_example(std::string& detail) {
  const BasisMap basis = BasisMap::compiled_default();
  const ModeState out = apply_dft(ModeState::single(-1, Polarization::H), basis);
  ModeState expected;
  expected.set(+1, Polarization::H, {0.5, 0.0});
  expected.set(-1, Polarization::H, {0.0, 0.5});
  expected.set(+2, Polarization::H, {-0.5, 0.0});
  expected.set(-2, Polarization::H, {0.0, -0.5});

  const Complex overlap = inner_product(expected, out);
  const Complex align = std::abs(overlap) > 0.0 ? std::conj(overlap) / std::abs(overlap)
                                                : Complex{1.0, 0.0};
  double worst = 0.0;
  for (const auto& [key, amp] : expected.terms()) {
    worst = std::max(worst, std::abs(amp - out.amplitude(key.l, key.pol) * align));
  }
  std::ostringstream extra;
  extra << "max amplitude error " << worst;
  detail = extra.str();
  return worst < 1e-12;
}

// ---------------------------------------------------------------------------
// 3. Circuit/abstract equivalence at fidelity > 1 - 1e-9: the 16 single-term
//    checks (8 kets through the DFT light path, 8 through the PBS projection
//    stage), the separable all-H input, and the full chain.
bool criterion_circuit_equivalence(std::string& detail) {
  constexpr double kTol = 1e-9;
  const BasisMap basis = BasisMap::compiled_default();
  const ShorProblem problem{15, 11, 2};
  const CircuitPath dft = build_dft_circuit(basis);
  bool ok = true;
  int checks = 0;

  auto states_match = [&](const ModeState& a, const ModeState& b) {
    if (a.norm2() == 0.0 && b.norm2() == 0.0) return true;
    if (a.norm2() == 0.0 || b.norm2() == 0.0) return false;
    return state_fidelity(a, b) > 1.0 - kTol;
  };

  for (int l : {+1, -1, +2, -2}) {
    for (Polarization pol : {Polarization::H, Polarization::V}) {
      const ModeState ket = ModeState::single(l, pol);

      // DFT circuit against the mode-space DFT
      const auto sim = simulate_path(dft, {{"in", ket}});
      const ModeState expected = apply_dft(ket, basis);
      const std::string sink = pol == Polarization::H ? "H" : "V";
      const std::string other = pol == Polarization::H ? "V" : "H";
      ok &= expect(states_match(sim.sinks.at(sink), expected),
                   "dft circuit mismatch on single ket", detail);
      ok &= expect(sim.sinks.at(other).norm2() < 1e-18, "dft circuit pol leakage", detail);
      ++checks;

      // PBS projection stage against project_work
      const auto split = apply_element(OpticalElement::polarizing_beam_splitter(), ket);
      ok &= expect(states_match(split.port0, project_work(ket, Polarization::H)) &&
                       states_match(split.port1, project_work(ket, Polarization::V)),
                   "projection stage mismatch on single ket", detail);
      ++checks;
    }
  }

  // separable all-H input through the DFT circuit
  const ModeState eq5 = make_input_state(problem, basis);
  const auto eq5_sim = simulate_path(dft, {{"in", eq5}});
  ok &= expect(states_match(eq5_sim.sinks.at("H"), apply_dft(eq5, basis)),
               "dft circuit mismatch on the separable input", detail);

  // full chain: generation + MEF circuit, PBS, DFT circuit vs abstract stages
  const PipelineRun abstract = run_pipeline(problem, RunMode::Abstract);
  const PipelineRun circuit = run_pipeline(problem, RunMode::Circuit);
  for (std::size_t i = 0; i < abstract.stages.size(); ++i) {
    ok &= expect(states_match(abstract.stages[i].state, circuit.stages[i].state),
                 "full-chain stage mismatch at " + abstract.stages[i].name, detail);
  }

  if (detail.empty()) {
    std::ostringstream extra;
    extra << checks << " single-term checks + separable input + full chain";
    detail = extra.str();
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 4. Oracle sweep: compiled pipeline for the two-valued bases, generalized
//    d-valued pipeline (n = 4) for the rest; every order matches direct
//    iteration.
bool criterion_oracle_sweep(std::string& detail) {
  bool ok = true;
  for (long long a : {4LL, 11LL, 14LL}) {
    const PipelineRun run = run_pipeline(ShorProblem{15, a, 2}, RunMode::Abstract);
    ok &= expect(run.readout.r.has_value() &&
                     *run.readout.r == brute_force_order(a, 15),
                 "compiled pipeline order mismatch at a = " + std::to_string(a), detail);
  }
  for (long long a : {2LL, 7LL, 8LL, 13LL}) {
    const GeneralizedRun run = run_generalized_abstract(a, 15, 4);
    ok &= expect(run.r.has_value() && *run.r == 4 && *run.r == brute_force_order(a, 15),
                 "generalized pipeline order mismatch at a = " + std::to_string(a), detail);
  }
  if (detail.empty()) detail = "orders {4,11,14}->2 and {2,7,8,13}->4 all match the oracle";
  return ok;
}

// ---------------------------------------------------------------------------
// 5. Single-mode fringe claims: center contrast dichotomy with margin, and
//    the symmetry-axis flip between |l| = 1 and |l| = 2.
bool criterion_fringe_signatures(std::string& detail) {
  const LgBeamParams beam{};
  const ScreenGeometry geom{};
  const FringeSignature a =
      signature(render_state(ModeState::single(+1, Polarization::H), beam, geom));
  const FringeSignature b =
      signature(render_state(ModeState::single(-1, Polarization::V), beam, geom));
  const FringeSignature c =
      signature(render_state(ModeState::single(+2, Polarization::H), beam, geom));
  const FringeSignature d =
      signature(render_state(ModeState::single(-2, Polarization::V), beam, geom));

  std::ostringstream extra;
  extra << "contrasts " << a.center_contrast << ", " << b.center_contrast << ", "
        << c.center_contrast << ", " << d.center_contrast << "; axes " << a.symmetry_axis
        << b.symmetry_axis << c.symmetry_axis << d.symmetry_axis;
  detail = extra.str();

  return a.center_contrast > 0.1 && b.center_contrast < -0.1 && c.center_contrast > 0.1 &&
         d.center_contrast < -0.1 && a.symmetry_axis != c.symmetry_axis &&
         b.symmetry_axis != d.symmetry_axis;
}

// ---------------------------------------------------------------------------
// 6. Post-MEF composite symmetry: mirror residual about both axes < 1e-6 of
//    total power.
bool criterion_composite_symmetry(std::string& detail) {
  const LgBeamParams beam{};
  const ScreenGeometry geom{};
  ModeState post_mef;
  post_mef.set(+1, Polarization::H, {1.0, 0.0});
  post_mef.set(-1, Polarization::V, {1.0, 0.0});
  post_mef.set(+2, Polarization::H, {1.0, 0.0});
  post_mef.set(-2, Polarization::V, {1.0, 0.0});
  const FringeImage img = render_state(post_mef, beam, geom);
  const double rx = mirror_residual(img, 'x');
  const double ry = mirror_residual(img, 'y');
  std::ostringstream extra;
  extra << "residuals x: " << rx << ", y: " << ry;
  detail = extra.str();
  return rx < 1e-6 && ry < 1e-6;
}

// ---------------------------------------------------------------------------
// 7. Readout discrimination: the two post-DFT patterns classify to their own
//    labels with margin > 0.05 and never land on a single-mode reference.
bool criterion_readout_discrimination(std::string& detail) {
  const LgBeamParams beam{};
  const ScreenGeometry geom{};
  const BasisMap basis = BasisMap::compiled_default();
  const auto library = build_reference_library(basis, beam, geom);

  ModeState plus;
  plus.set(+1, Polarization::H, {1.0, 0.0});
  plus.set(+2, Polarization::H, {1.0, 0.0});
  ModeState minus;
  minus.set(+1, Polarization::V, {1.0, 0.0});
  minus.set(+2, Polarization::V, {-1.0, 0.0});

  const auto [h, v] = classify_readout(render_state(plus, beam, geom),
                                       render_state(minus, beam, geom), library);
  std::ostringstream extra;
  extra << "H: " << h.label << " (margin " << h.margin << "), V: " << v.label << " (margin "
        << v.margin << ")";
  detail = extra.str();

  return h.recognized && v.recognized && h.label == "j-support {0,2}, +" &&
         v.label == "j-support {0,2}, -" && h.margin > 0.05 && v.margin > 0.05;
}

// ---------------------------------------------------------------------------
// 8. Numerical foundations: DFT unitarity, Laguerre against the series
//    oracle, LG mode orthogonality, two-source fringe minimum placement.
double laguerre_series_value(int p, int alpha, double x, double& magnitude) {
  auto binomial = [](int n, int r) {
    long double v = 1.0L;
    for (int i = 1; i <= r; ++i) v *= static_cast<long double>(n - r + i) / i;
    return v;
  };
  long double sum = 0.0L, mag = 0.0L, x_pow = 1.0L, k_fact = 1.0L;
  for (int k = 0; k <= p; ++k) {
    if (k > 0) {
      x_pow *= x;
      k_fact *= k;
    }
    const long double term = binomial(p + alpha, p - k) * x_pow / k_fact;
    sum += (k % 2 == 0) ? term : -term;
    mag += std::abs(term);
  }
  magnitude = static_cast<double>(mag);
  return static_cast<double>(sum);
}

bool criterion_numerical_foundations(std::string& detail) {
  bool ok = true;

  // DFT unitarity < 1e-12 for n <= 4
  double worst_unitarity = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const DftMatrix m = dft_matrix(n);
    for (std::size_t r = 0; r < m.dim; ++r) {
      for (std::size_t c = 0; c < m.dim; ++c) {
        Complex sum{};
        for (std::size_t k = 0; k < m.dim; ++k) sum += m.at(r, k) * std::conj(m.at(c, k));
        const Complex expected = r == c ? Complex{1.0, 0.0} : Complex{};
        worst_unitarity = std::max(worst_unitarity, std::abs(sum - expected));
      }
    }
  }
  ok &= expect(worst_unitarity < 1e-12, "DFT unitarity", detail);

  // Laguerre vs series oracle < 1e-12 relative for p <= 6
  double worst_laguerre = 0.0;
  for (int p = 0; p <= 6; ++p) {
    for (int alpha = 0; alpha <= 4; ++alpha) {
      for (double x = 0.0; x <= 20.0; x += 0.4) {
        double magnitude = 0.0;
        const double expected = laguerre_series_value(p, alpha, x, magnitude);
        const double got = laguerre(p, alpha, x);
        const double scale = std::abs(expected) > 1e-6 * magnitude
                                 ? std::max(1.0, std::abs(expected))
                                 : magnitude;
        worst_laguerre = std::max(worst_laguerre, std::abs(got - expected) / scale);
      }
    }
  }
  ok &= expect(worst_laguerre < 1e-12, "Laguerre series agreement", detail);

  // discrete LG orthogonality < 1e-6 relative
  const LgBeamParams beam{};
  {
    const int nr = 2000, nphi = 64;
    const double rmax = 6e-3, dr = rmax / nr;
    const double dphi = 2.0 * std::numbers::pi / nphi;
    double worst_cross = 0.0;
    for (auto [la, lb] : {std::pair{1, 2}, {1, -1}, {2, -2}}) {
      LgBeamParams pa = beam, pb = beam;
      pa.l = la;
      pb.l = lb;
      Complex overlap{};
      double self = 0.0;
      for (int i = 0; i < nr; ++i) {
        const double r = (i + 0.5) * dr;
        for (int j = 0; j < nphi; ++j) {
          const double phi = (j + 0.5) * dphi;
          const Complex ua = lg_amplitude(pa, {r, phi, 0.0});
          overlap += std::conj(ua) * lg_amplitude(pb, {r, phi, 0.0}) * r;
          self += std::norm(ua) * r;
        }
      }
      worst_cross = std::max(worst_cross, std::abs(overlap) / self);
    }
    ok &= expect(worst_cross < 1e-6, "LG orthogonality", detail);
  }

  // two-source fringe minimum at d sin(theta) = lambda / 2, within one pixel
  {
    const ScreenGeometry geom{};
    SourceSet two = default_hole_layout(geom);
    two.at(Hole::A) = {-geom.hole_gap / 2.0, 0.0, {1.0, 0.0}, true};
    two.at(Hole::B) = {+geom.hole_gap / 2.0, 0.0, {1.0, 0.0}, true};
    const FringeImage img = render_pattern(two, geom);
    const int iy = geom.res_y / 2;
    const double period = geom.wavelength * geom.screen_distance / geom.hole_gap;
    int best_ix = -1;
    double best = 1e300;
    for (int ix = geom.res_x / 2; ix < geom.res_x && img.xs()[ix] <= period; ++ix) {
      if (img.at(ix, iy) < best) {
        best = img.at(ix, iy);
        best_ix = ix;
      }
    }
    const double predicted =
        geom.screen_distance * std::tan(std::asin(geom.wavelength / (2.0 * geom.hole_gap)));
    ok &= expect(std::abs(img.xs()[best_ix] - predicted) <= geom.pixel_width(),
                 "two-source minimum placement", detail);
  }

  if (detail.empty()) {
    std::ostringstream extra;
    extra << "unitarity " << worst_unitarity << ", laguerre " << worst_laguerre;
    detail = extra.str();
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 9. Determinism: two identical physical runs produce byte-identical images.
bool criterion_determinism(std::string& detail) {
  const fs::path base = fs::temp_directory_path() / "lgshor_acceptance";
  fs::remove_all(base);
  fs::create_directories(base / "run1");
  fs::create_directories(base / "run2");

  RunOptions options;
  options.screen.res_x = options.screen.res_y = 128;

  auto render_all = [&](const fs::path& dir) {
    const PipelineRun run = run_pipeline(ShorProblem{15, 11, 2}, RunMode::Physical, options);
    std::vector<fs::path> files;
    for (const auto& [name, image] : run.images) {
      const fs::path path = dir / ("stage_" + name + ".pgm");
      write_pgm16(image, path.string());
      files.push_back(path);
    }
    return files;
  };

  const auto files1 = render_all(base / "run1");
  const auto files2 = render_all(base / "run2");
  if (files1.size() != files2.size() || files1.empty()) {
    detail = "image counts differ";
    return false;
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  };
  for (std::size_t i = 0; i < files1.size(); ++i) {
    if (slurp(files1[i]) != slurp(files2[i])) {
      detail = "byte mismatch in " + files1[i].filename().string();
      return false;
    }
  }
  std::ostringstream extra;
  extra << files1.size() << " image files byte-identical";
  detail = extra.str();
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 end-to-end factorization (abstract, circuit, physical)", criterion_end_to_end},
      {"2 worked DFT example |-1> (error < 1e-12)", criterion_dft_example},
      {"3 circuit/abstract equivalence (fidelity > 1 - 1e-9)", criterion_circuit_equivalence},
      {"4 oracle sweep over the coprime bases of 15", criterion_oracle_sweep},
      {"5 fringe contrast dichotomy and axis flip", criterion_fringe_signatures},
      {"6 post-MEF composite mirror symmetry (< 1e-6)", criterion_composite_symmetry},
      {"7 readout discrimination (margin > 0.05)", criterion_readout_discrimination},
      {"8 numerical foundations (unitarity, Laguerre, orthogonality, fringe)",
       criterion_numerical_foundations},
      {"9 determinism (byte-identical physical runs)", criterion_determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string detail;
    bool passed = false;
    try {
      passed = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!passed) ++failures;
    std::printf("[%s] criterion %s%s%s\n", passed ? "PASS" : "FAIL", criterion.name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
