// lgshor: simulate the compiled optical order-finding pipeline, regenerate
// the interference-pattern figures, and dump the built-in circuit graphs.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lgshor/serialization.hpp"

namespace fs = std::filesystem;
using namespace lgshor;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAlgorithmicFailure = 2;

struct CommonConfig {
  long long modulus = 15;
  long long base = 11;
  int control_bits = 2;
  std::string mode = "abstract";
  double hole_gap = 1e-5;
  double screen_distance = 1e-1;
  double extent = 0.1;
  int resolution = 512;
  double wavelength = 632e-9;
  double waist = 1e-3;
  std::string out_dir;
  std::string format = "pgm";

  ScreenGeometry screen() const {
    ScreenGeometry geom;
    geom.hole_gap = hole_gap;
    geom.screen_distance = screen_distance;
    geom.extent_x = extent;
    geom.extent_y = extent;
    geom.res_x = resolution;
    geom.res_y = resolution;
    geom.wavelength = wavelength;
    geom.validate();
    return geom;
  }

  LgBeamParams beam() const {
    LgBeamParams params;
    params.waist = waist;
    params.wavelength = wavelength;
    params.validate();
    return params;
  }

  fs::path output_directory() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* env = std::getenv("LGSHOR_OUT")) return env;
    return ".";
  }
};

void add_common_flags(CLI::App* cmd, CommonConfig& config) {
  cmd->add_option("--N", config.modulus, "Integer to factor");
  cmd->add_option("--a", config.base, "Coprime base of the modular exponentiation");
  cmd->add_option("--n", config.control_bits, "Control register bits (2^n modes)");
  cmd->add_option("--hole-gap", config.hole_gap, "Hole square side, meters");
  cmd->add_option("--screen-distance", config.screen_distance, "Hole-to-screen distance, meters");
  cmd->add_option("--extent", config.extent, "Screen side length, meters");
  cmd->add_option("--resolution", config.resolution, "Screen pixels per side");
  cmd->add_option("--wavelength", config.wavelength, "Laser wavelength, meters");
  cmd->add_option("--waist", config.waist, "Beam waist at z = 0, meters");
  cmd->add_option("--out", config.out_dir,
                  "Output directory (default $LGSHOR_OUT, then the working directory)");
  cmd->add_option("--format", config.format, "Image format: pgm or csv")
      ->check(CLI::IsMember({"pgm", "csv"}));
}

void write_text_atomic(const fs::path& path, const std::string& payload) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  fs::rename(tmp, path);
}

// Returns the written image filename (relative to dir).
std::string write_image(const FringeImage& img, const SourceSet* sources, const fs::path& dir,
                        const std::string& stem, const std::string& format) {
  const std::string image_name = stem + (format == "csv" ? ".csv" : ".pgm");
  if (format == "csv") {
    write_text_atomic(dir / image_name, encode_csv(img));
  } else {
    write_pgm16(img, (dir / image_name).string());
  }
  write_text_atomic(dir / (stem + ".json"), image_sidecar_json(img, sources));
  return image_name;
}

int cmd_factor(const CommonConfig& config) {
  const ShorProblem problem{config.modulus, config.base, config.control_bits};
  const RunMode mode = run_mode_from_name(config.mode);

  RunOptions options;
  if (problem.dim() != 4) {
    if (mode != RunMode::Abstract) {
      std::cerr << "error: circuit and physical modes need the n = 2 compiled register\n";
      return kExitUsage;
    }
    options.basis = BasisMap::alternating(config.control_bits);
  }
  options.beam = config.beam();
  options.screen = config.screen();

  const PipelineRun run = run_pipeline(problem, mode, options);

  const fs::path dir = config.output_directory();
  fs::create_directories(dir);

  std::vector<std::pair<std::string, std::string>> image_paths;
  for (const auto& [name, image] : run.images) {
    image_paths.emplace_back(name,
                             write_image(image, nullptr, dir, "stage_" + name, config.format));
  }

  const bool have_order = run.readout.r.has_value();
  OracleReport oracle;
  if (have_order) oracle = verify_against_oracle(run);
  write_text_atomic(dir / "report.json",
                    pipeline_report_json(run, have_order ? &oracle : nullptr, image_paths));

  std::cout << "N = " << problem.modulus() << ", a = " << problem.base()
            << ", mode = " << run_mode_name(mode) << "\n";
  std::cout << "j support: {";
  bool first = true;
  for (long long j : run.readout.j_values) {
    std::cout << (first ? "" : ", ") << j;
    first = false;
  }
  std::cout << "}\n";
  if (have_order) {
    std::cout << "order r = " << *run.readout.r << "\n";
    for (const auto& line : oracle.lines) std::cout << line << "\n";
  }
  std::cout << "report: " << (dir / "report.json").string() << "\n";

  if (!run.readout.factors) {
    std::cerr << "algorithmic failure: "
              << run.readout.failure_reason.value_or("no factors recovered") << "\n";
    return kExitAlgorithmicFailure;
  }
  std::cout << "factors: " << run.readout.factors->first << " x "
            << run.readout.factors->second << "\n";
  return kExitSuccess;
}

struct FigurePanel {
  std::string stem;
  ModeState state;
};

std::vector<FigurePanel> figure_panels(const std::string& which) {
  ModeState eq5;
  for (int l : {+1, -1, +2, -2}) eq5.set(l, Polarization::H, {1.0, 0.0});
  ModeState eq6;
  eq6.set(+1, Polarization::H, {1.0, 0.0});
  eq6.set(-1, Polarization::V, {1.0, 0.0});
  eq6.set(+2, Polarization::H, {1.0, 0.0});
  eq6.set(-2, Polarization::V, {1.0, 0.0});
  ModeState psi3;
  psi3.set(+1, Polarization::H, {1.0, 0.0});
  psi3.set(+2, Polarization::H, {1.0, 0.0});
  ModeState psi4;
  psi4.set(-1, Polarization::V, {1.0, 0.0});
  psi4.set(-2, Polarization::V, {1.0, 0.0});
  ModeState dft_h;
  dft_h.set(+1, Polarization::H, {1.0, 0.0});
  dft_h.set(+2, Polarization::H, {1.0, 0.0});
  ModeState dft_v;
  dft_v.set(+1, Polarization::V, {1.0, 0.0});
  dft_v.set(+2, Polarization::V, {-1.0, 0.0});

  std::vector<FigurePanel> panels;
  if (which == "fig5" || which == "all") {
    panels.push_back({"fig5_a", ModeState::single(+1, Polarization::H)});
    panels.push_back({"fig5_b", ModeState::single(-1, Polarization::V)});
    panels.push_back({"fig5_c", ModeState::single(+2, Polarization::H)});
    panels.push_back({"fig5_d", ModeState::single(-2, Polarization::V)});
  }
  if (which == "fig6" || which == "all") {
    panels.push_back({"fig6_a", eq5});
    panels.push_back({"fig6_b", eq6});
    panels.push_back({"fig6_c", psi3});
    panels.push_back({"fig6_d", psi4});
  }
  if (which == "fig7" || which == "all") {
    panels.push_back({"fig7_a", dft_h});
    panels.push_back({"fig7_b", dft_v});
  }
  return panels;
}

int cmd_figures(const CommonConfig& config, const std::string& which) {
  const ScreenGeometry geom = config.screen();
  const LgBeamParams beam = config.beam();
  const fs::path dir = config.output_directory();
  fs::create_directories(dir);

  for (const auto& panel : figure_panels(which)) {
    const FringeImage img = render_state(panel.state, beam, geom);
    bool has_h = false, has_v = false;
    for (const auto& [key, amp] : panel.state.terms()) {
      if (amp == Complex{}) continue;
      (key.pol == Polarization::H ? has_h : has_v) = true;
    }
    // Single-polarization panels carry their source set in the sidecar;
    // mixed panels are incoherent sums of two source sets.
    if (has_h && has_v) {
      write_image(img, nullptr, dir, panel.stem, config.format);
    } else {
      const SourceSet sources = sample_sources(panel.state, beam, geom);
      write_image(img, &sources, dir, panel.stem, config.format);
    }
    std::cout << panel.stem << " -> "
              << (dir / (panel.stem + (config.format == "csv" ? ".csv" : ".pgm"))).string()
              << "\n";
  }
  return kExitSuccess;
}

int cmd_dump_circuit(const CommonConfig& config, const std::string& which) {
  if (which == "mef") {
    const ShorProblem problem{config.modulus, config.base, config.control_bits};
    std::cout << circuit_to_json(build_mef_circuit(problem)) << "\n";
  } else {
    std::cout << circuit_to_json(build_dft_circuit(BasisMap::compiled_default())) << "\n";
  }
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compiled order-finding on classically entangled Laguerre-Gaussian beams"};
  app.require_subcommand(1);

  CommonConfig config;

  CLI::App* factor = app.add_subcommand("factor", "Run the order-finding pipeline and factor N");
  add_common_flags(factor, config);
  factor->add_option("--mode", config.mode, "abstract, circuit or physical")
      ->check(CLI::IsMember({"abstract", "circuit", "physical"}));

  std::string which_figure = "all";
  CLI::App* figures = app.add_subcommand("figures", "Render the interference-pattern figures");
  add_common_flags(figures, config);
  figures->add_option("--which", which_figure, "fig5, fig6, fig7 or all")
      ->check(CLI::IsMember({"fig5", "fig6", "fig7", "all"}));

  std::string which_circuit;
  CLI::App* dump = app.add_subcommand("dump-circuit", "Emit a circuit graph as JSON");
  dump->add_option("which", which_circuit, "mef or dft")
      ->required()
      ->check(CLI::IsMember({"mef", "dft"}));
  dump->add_option("--N", config.modulus, "Integer to factor");
  dump->add_option("--a", config.base, "Coprime base");
  dump->add_option("--n", config.control_bits, "Control register bits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    if (factor->parsed()) return cmd_factor(config);
    if (figures->parsed()) return cmd_figures(config, which_figure);
    if (dump->parsed()) return cmd_dump_circuit(config, which_circuit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
