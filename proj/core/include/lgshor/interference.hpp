#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "lgshor/lgfield.hpp"
#include "lgshor/modespace.hpp"

namespace lgshor {

/// Four-hole interference geometry: hole plane at z = 0, observation screen
/// at z = screen_distance, pixel grid centered on the optical axis.
struct ScreenGeometry {
  double hole_gap = 1e-5;          // side of the hole square, meters
  double screen_distance = 1e-1;   // meters
  double extent_x = 0.1;           // full screen width, meters
  double extent_y = 0.1;           // full screen height, meters
  int res_x = 512;
  int res_y = 512;
  double wavelength = 632e-9;      // meters
  bool paraxial = false;           // Fresnel phase instead of exact distances

  void validate() const;

  double pixel_width() const { return extent_x / res_x; }
  double pixel_height() const { return extent_y / res_y; }

  /// Fringe period lambda D / g of the active hole pairs, whose separation
  /// g is the diagonal of the hole square.
  double fringe_period() const;
};

enum class Hole { A = 0, B = 1, C = 2, D = 3 };

struct PointSource {
  double x = 0.0;          // hole-plane position, meters
  double y = 0.0;
  Complex amplitude{};
  bool active = false;
};

/// The four interference sources S_A..S_D. The default layout puts them on
/// the corners of a hole_gap-sided square: A top-left, B top-right, C
/// bottom-left, D bottom-right, so the {A, D} pair spans one diagonal and
/// {B, C} the other. {A, D} serve the |l| = 1 branch and {B, C} the
/// |l| = 2 branch; A and B take the real-part samples, D and C the
/// imaginary-part samples.
struct SourceSet {
  std::array<PointSource, 4> sources;

  PointSource& at(Hole h) { return sources[static_cast<int>(h)]; }
  const PointSource& at(Hole h) const { return sources[static_cast<int>(h)]; }
};

/// Hole positions for the given geometry, all inactive with amplitude zero.
SourceSet default_hole_layout(const ScreenGeometry& geom);

/// Samples the four sources from a single-polarization state, mirroring the
/// PBS + OAM sorter + BS + aperture-diaphragm chain of the detector:
/// each |l| branch's field (sum of its +-l components) is evaluated at the
/// doughnut peak radius, at azimuth 0 for the real-part hole and at the
/// quarter-helix azimuth pi/(2|l|) for the imaginary-part hole; the
/// imaginary-part path carries a quarter-wave retardation (factor i).
/// Components with |l| outside {1, 2} fall outside the sorter chain and do
/// not reach any hole. Requires p = 0, z = 0 and a single-polarization
/// state; throws std::invalid_argument otherwise.
SourceSet sample_sources(const ModeState& state, const LgBeamParams& params,
                         const ScreenGeometry& geom);

/// Rendered intensity grid, row-major, row 0 at the bottom of the screen
/// (smallest y).
class FringeImage {
public:
  FringeImage() = default;
  FringeImage(const ScreenGeometry& geom);

  int width() const { return geom_.res_x; }
  int height() const { return geom_.res_y; }
  const ScreenGeometry& geometry() const { return geom_; }

  double& at(int ix, int iy) { return data_[static_cast<std::size_t>(iy) * geom_.res_x + ix]; }
  double at(int ix, int iy) const { return data_[static_cast<std::size_t>(iy) * geom_.res_x + ix]; }
  const std::vector<double>& data() const { return data_; }

  double total_power() const;
  double max_intensity() const;

  /// Physical pixel-center coordinates, symmetric about the axis by
  /// construction so mirror comparisons are grid-exact.
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

  FringeImage& operator+=(const FringeImage& other);

private:
  ScreenGeometry geom_;
  std::vector<double> data_;
  std::vector<double> xs_, ys_;
};

/// Spherical-wavelet point-source rendering: at each pixel the coherent sum
/// of amp_k exp(i k R_k) / R_k over the active sources, squared. Exact
/// Euclidean distances by default (the screen is not paraxial at the
/// default geometry); the paraxial flag switches to the Fresnel form.
FringeImage render_pattern(const SourceSet& sources, const ScreenGeometry& geom);

/// Per-polarization rendering of an arbitrary state: each polarization
/// branch is sampled and rendered coherently, the two intensities add.
FringeImage render_state(const ModeState& state, const LgBeamParams& params,
                         const ScreenGeometry& geom);

/// Compact fringe descriptors. center_contrast compares the mean intensity
/// of a central disc (a quarter fringe period in radius) against the mean
/// of the annulus from one to two fringe periods, normalized by their sum.
/// symmetry_axis labels the diagonal orientation of the fringe system via
/// the sign of the intensity's mixed moment sum(I x y); patterns without a
/// diagonal preference (the moment vanishes) label as x.
struct FringeSignature {
  double center_contrast = 0.0;
  char symmetry_axis = 'x';
  double total_power = 0.0;
  double diagonal_moment = 0.0;  // mean of x y / (half-extent)^2 weighted by I
};

/// Throws std::domain_error for an all-zero image.
FringeSignature signature(const FringeImage& img);

/// Sum |I - I_mirrored| / sum I for a flip about the given axis
/// ('x': y -> -y, 'y': x -> -x).
double mirror_residual(const FringeImage& img, char axis);

struct ReferencePattern {
  std::string label;
  std::vector<int> j_support;
  FringeImage image;
};

/// Rendered candidate post-DFT patterns: the two order-2 readouts
/// |+1> +- |+2>, and the four single modes (|+1> alone is the j = 0
/// failure readout).
std::vector<ReferencePattern> build_reference_library(const BasisMap& basis,
                                                      const LgBeamParams& params,
                                                      const ScreenGeometry& geom);

struct Classification {
  std::string label;           // "unrecognized" when below threshold
  std::vector<int> j_support;  // empty when unrecognized
  double best_score = 0.0;
  double margin = 0.0;         // best minus second-best score
  bool recognized = false;
};

inline constexpr double kClassifyThreshold = 0.9;

/// Zero-mean normalized cross-correlation against every library entry;
/// scores below kClassifyThreshold give "unrecognized". Throws
/// std::invalid_argument for an empty library.
Classification classify_pattern(const FringeImage& img,
                                const std::vector<ReferencePattern>& library);

/// Per-polarization readout of the two post-DFT branch images.
std::pair<Classification, Classification> classify_readout(
    const FringeImage& img_h, const FringeImage& img_v,
    const std::vector<ReferencePattern>& library);

/// 16-bit binary PGM (P5, maxval 65535, big-endian), rows written top to
/// bottom, intensities scaled so the image maximum maps to 65535.
std::string encode_pgm16(const FringeImage& img);
void write_pgm16(const FringeImage& img, const std::string& path);

/// CSV matrix dump (res_y rows of res_x values, bottom row first).
std::string encode_csv(const FringeImage& img);

}  // namespace lgshor
