#include "lgshor/interference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

namespace lgshor {

void ScreenGeometry::validate() const {
  if (hole_gap <= 0.0 || screen_distance <= 0.0 || extent_x <= 0.0 || extent_y <= 0.0 ||
      wavelength <= 0.0) {
    throw std::invalid_argument("ScreenGeometry: lengths must be positive");
  }
  if (res_x < 2 || res_y < 2) {
    throw std::invalid_argument("ScreenGeometry: resolution must be at least 2x2");
  }
}

double ScreenGeometry::fringe_period() const {
  return wavelength * screen_distance / (hole_gap * std::numbers::sqrt2);
}

SourceSet default_hole_layout(const ScreenGeometry& geom) {
  geom.validate();
  const double half = geom.hole_gap / 2.0;
  SourceSet set;
  set.at(Hole::A) = {-half, +half, Complex{}, false};
  set.at(Hole::B) = {+half, +half, Complex{}, false};
  set.at(Hole::C) = {-half, -half, Complex{}, false};
  set.at(Hole::D) = {+half, -half, Complex{}, false};
  return set;
}

SourceSet sample_sources(const ModeState& state, const LgBeamParams& params,
                         const ScreenGeometry& geom) {
  if (params.p != 0 || params.z != 0.0) {
    throw std::invalid_argument("sample_sources: the detection layer fixes p = 0, z = 0");
  }
  std::set<Polarization> pols;
  for (const auto& [key, amp] : state.terms()) {
    if (amp != Complex{}) pols.insert(key.pol);
  }
  if (pols.size() > 1) {
    throw std::invalid_argument(
        "sample_sources: split polarizations first (orthogonal branches do not interfere)");
  }

  SourceSet set = default_hole_layout(geom);
  const Complex quarter_wave{0.0, 1.0};

  for (int abs_l : {1, 2}) {
    LgBeamParams branch = params;
    branch.l = abs_l;
    const double radius = peak_radius(branch);
    // The imaginary-part aperture sits a quarter of the helical phase cycle
    // around the doughnut; for |l| = 1 that is the vertical axis.
    const double imag_azimuth = std::numbers::pi / (2.0 * abs_l);

    Complex real_sample{};
    Complex imag_sample{};
    bool branch_active = false;
    for (int sign : {+1, -1}) {
      const int l = sign * abs_l;
      Complex coeff{};
      for (Polarization pol : {Polarization::H, Polarization::V}) {
        coeff += state.amplitude(l, pol);
      }
      if (coeff == Complex{}) continue;
      branch_active = true;
      branch.l = l;
      real_sample += coeff * lg_amplitude(branch, CylPoint{radius, 0.0, 0.0});
      imag_sample += coeff * lg_amplitude(branch, CylPoint{radius, imag_azimuth, 0.0});
    }
    imag_sample *= quarter_wave;

    const Hole real_hole = abs_l == 1 ? Hole::A : Hole::B;
    const Hole imag_hole = abs_l == 1 ? Hole::D : Hole::C;
    set.at(real_hole).amplitude = real_sample;
    set.at(real_hole).active = branch_active;
    set.at(imag_hole).amplitude = imag_sample;
    set.at(imag_hole).active = branch_active;
  }
  return set;
}

namespace {

// Pixel centers symmetric about zero by construction, so index mirroring is
// an exact coordinate mirror.
std::vector<double> symmetric_axis(int count, double extent) {
  std::vector<double> xs(count);
  const double step = extent / count;
  const int half = count / 2;
  if (count % 2 == 1) xs[half] = 0.0;
  for (int k = 0; k < half; ++k) {
    const double v = (k + 0.5) * step;
    xs[half + k + (count % 2)] = v;
    xs[half - 1 - k] = -v;
  }
  return xs;
}

}  // namespace

FringeImage::FringeImage(const ScreenGeometry& geom) : geom_(geom) {
  geom.validate();
  data_.assign(static_cast<std::size_t>(geom.res_x) * geom.res_y, 0.0);
  xs_ = symmetric_axis(geom.res_x, geom.extent_x);
  ys_ = symmetric_axis(geom.res_y, geom.extent_y);
}

double FringeImage::total_power() const {
  double sum = 0.0;
  for (double v : data_) sum += v;
  return sum;
}

double FringeImage::max_intensity() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, v);
  return best;
}

FringeImage& FringeImage::operator+=(const FringeImage& other) {
  if (other.data_.size() != data_.size()) {
    throw std::invalid_argument("FringeImage: size mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

FringeImage render_pattern(const SourceSet& sources, const ScreenGeometry& geom) {
  geom.validate();
  FringeImage img(geom);
  const double k = 2.0 * std::numbers::pi / geom.wavelength;
  const double dist = geom.screen_distance;

  std::vector<PointSource> active;
  for (const auto& s : sources.sources) {
    if (s.active && s.amplitude != Complex{}) active.push_back(s);
  }
  if (active.empty()) return img;

  for (int iy = 0; iy < geom.res_y; ++iy) {
    const double y = img.ys()[iy];
    for (int ix = 0; ix < geom.res_x; ++ix) {
      const double x = img.xs()[ix];
      Complex field{};
      for (const auto& s : active) {
        const double dx = x - s.x;
        const double dy = y - s.y;
        double phase;
        double inv_r;
        if (geom.paraxial) {
          phase = k * (dist + (dx * dx + dy * dy) / (2.0 * dist));
          inv_r = 1.0 / dist;
        } else {
          const double r = std::sqrt(dx * dx + dy * dy + dist * dist);
          phase = k * r;
          inv_r = 1.0 / r;
        }
        field += s.amplitude * Complex{std::cos(phase) * inv_r, std::sin(phase) * inv_r};
      }
      img.at(ix, iy) = std::norm(field);
    }
  }
  return img;
}

FringeImage render_state(const ModeState& state, const LgBeamParams& params,
                         const ScreenGeometry& geom) {
  FringeImage img(geom);
  for (Polarization pol : {Polarization::H, Polarization::V}) {
    const ModeState branch = project_work(state, pol);
    if (branch.empty()) continue;
    img += render_pattern(sample_sources(branch, params, geom), geom);
  }
  return img;
}

FringeSignature signature(const FringeImage& img) {
  const auto& geom = img.geometry();
  const double total = img.total_power();
  if (total <= 0.0) throw std::domain_error("signature: all-zero image");

  // Quarter-period disc: a half-period disc spans the whole central fringe,
  // where the interference term averages away and the bright/dark contrast
  // drops below its usable threshold.
  const double period = geom.fringe_period();
  const double disc_r2 = (period / 4.0) * (period / 4.0);
  const double ann_inner2 = period * period;
  const double ann_outer2 = (2.0 * period) * (2.0 * period);

  double disc_sum = 0.0, ann_sum = 0.0;
  long disc_count = 0, ann_count = 0;
  double moment = 0.0;
  const double half_x = geom.extent_x / 2.0;
  const double half_y = geom.extent_y / 2.0;

  for (int iy = 0; iy < img.height(); ++iy) {
    const double y = img.ys()[iy];
    for (int ix = 0; ix < img.width(); ++ix) {
      const double x = img.xs()[ix];
      const double v = img.at(ix, iy);
      const double r2 = x * x + y * y;
      if (r2 <= disc_r2) {
        disc_sum += v;
        ++disc_count;
      } else if (r2 >= ann_inner2 && r2 <= ann_outer2) {
        ann_sum += v;
        ++ann_count;
      }
      moment += v * (x / half_x) * (y / half_y);
    }
  }

  FringeSignature sig;
  sig.total_power = total;
  sig.diagonal_moment = moment / total;
  const double disc_mean = disc_count > 0 ? disc_sum / disc_count : 0.0;
  const double ann_mean = ann_count > 0 ? ann_sum / ann_count : 0.0;
  const double denom = disc_mean + ann_mean;
  sig.center_contrast = denom > 0.0 ? (disc_mean - ann_mean) / denom : 0.0;
  constexpr double kAxisTie = 1e-9;
  sig.symmetry_axis = sig.diagonal_moment > kAxisTie ? 'y' : 'x';
  return sig;
}

double mirror_residual(const FringeImage& img, char axis) {
  const double total = img.total_power();
  if (total <= 0.0) throw std::domain_error("mirror_residual: all-zero image");
  double residual = 0.0;
  for (int iy = 0; iy < img.height(); ++iy) {
    for (int ix = 0; ix < img.width(); ++ix) {
      double mirrored;
      if (axis == 'x') {
        mirrored = img.at(ix, img.height() - 1 - iy);
      } else if (axis == 'y') {
        mirrored = img.at(img.width() - 1 - ix, iy);
      } else {
        throw std::invalid_argument("mirror_residual: axis must be 'x' or 'y'");
      }
      residual += std::abs(img.at(ix, iy) - mirrored);
    }
  }
  return residual / (2.0 * total);
}

std::vector<ReferencePattern> build_reference_library(const BasisMap& basis,
                                                      const LgBeamParams& params,
                                                      const ScreenGeometry& geom) {
  if (basis.dim() != 4) {
    throw std::invalid_argument("build_reference_library: needs the four-dimensional basis");
  }
  const int l0 = basis.l_of(0);
  const int l2 = basis.l_of(2);

  auto entry = [&](std::string label, std::vector<int> support, const ModeState& state) {
    return ReferencePattern{std::move(label), std::move(support),
                            render_state(state, params, geom)};
  };

  ModeState plus = ModeState::single(l0, Polarization::H) + ModeState::single(l2, Polarization::H);
  ModeState minus =
      ModeState::single(l0, Polarization::H) + ModeState::single(l2, Polarization::H, {-1.0, 0.0});

  std::vector<ReferencePattern> library;
  library.push_back(entry("j-support {0,2}, +", {0, 2}, plus));
  library.push_back(entry("j-support {0,2}, -", {0, 2}, minus));
  library.push_back(entry("j-support {0}", {0}, ModeState::single(basis.l_of(0), Polarization::H)));
  library.push_back(entry("j-support {1}", {1}, ModeState::single(basis.l_of(1), Polarization::H)));
  library.push_back(entry("j-support {2}", {2}, ModeState::single(basis.l_of(2), Polarization::H)));
  library.push_back(entry("j-support {3}", {3}, ModeState::single(basis.l_of(3), Polarization::H)));
  return library;
}

namespace {

double zero_mean_ncc(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    dot += da * db;
    na += da * da;
    nb += db * db;
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

}  // namespace

Classification classify_pattern(const FringeImage& img,
                                const std::vector<ReferencePattern>& library) {
  if (library.empty()) {
    throw std::invalid_argument("classify_pattern: empty reference library");
  }
  double best = -2.0, second = -2.0;
  const ReferencePattern* best_entry = nullptr;
  for (const auto& ref : library) {
    if (ref.image.data().size() != img.data().size()) {
      throw std::invalid_argument("classify_pattern: reference resolution mismatch");
    }
    const double score = zero_mean_ncc(img.data(), ref.image.data());
    if (score > best) {
      second = best;
      best = score;
      best_entry = &ref;
    } else if (score > second) {
      second = score;
    }
  }

  Classification result;
  result.best_score = best;
  result.margin = library.size() > 1 ? best - second : best;
  if (best >= kClassifyThreshold) {
    result.recognized = true;
    result.label = best_entry->label;
    result.j_support = best_entry->j_support;
  } else {
    result.label = "unrecognized";
  }
  return result;
}

std::pair<Classification, Classification> classify_readout(
    const FringeImage& img_h, const FringeImage& img_v,
    const std::vector<ReferencePattern>& library) {
  return {classify_pattern(img_h, library), classify_pattern(img_v, library)};
}

std::string encode_pgm16(const FringeImage& img) {
  std::string out;
  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%d %d\n65535\n", img.width(), img.height());
  out = header;
  out.reserve(out.size() + static_cast<std::size_t>(img.width()) * img.height() * 2);
  const double max = img.max_intensity();
  const double scale = max > 0.0 ? 65535.0 / max : 0.0;
  for (int iy = img.height() - 1; iy >= 0; --iy) {  // top row first
    for (int ix = 0; ix < img.width(); ++ix) {
      const auto v = static_cast<unsigned>(std::lround(img.at(ix, iy) * scale));
      out.push_back(static_cast<char>((v >> 8) & 0xFF));
      out.push_back(static_cast<char>(v & 0xFF));
    }
  }
  return out;
}

void write_pgm16(const FringeImage& img, const std::string& path) {
  const std::string payload = encode_pgm16(img);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_pgm16: cannot open " + tmp);
    f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  std::filesystem::rename(tmp, path);
}

std::string encode_csv(const FringeImage& img) {
  std::string out;
  char buf[32];
  for (int iy = 0; iy < img.height(); ++iy) {
    for (int ix = 0; ix < img.width(); ++ix) {
      std::snprintf(buf, sizeof(buf), "%.17g", img.at(ix, iy));
      if (ix) out.push_back(',');
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace lgshor
