#include "lgshor/lgfield.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lgshor {

void LgBeamParams::validate() const {
  if (p < 0) throw std::invalid_argument("LgBeamParams: p must be nonnegative");
  if (waist <= 0.0) throw std::invalid_argument("LgBeamParams: waist must be positive");
  if (wavelength <= 0.0) throw std::invalid_argument("LgBeamParams: wavelength must be positive");
}

double LgBeamParams::wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

double LgBeamParams::rayleigh_range() const {
  return std::numbers::pi * waist * waist / wavelength;
}

double LgBeamParams::beam_radius() const { return beam_radius_at(z); }

double LgBeamParams::beam_radius_at(double z_pos) const {
  const double zr = rayleigh_range();
  return waist * std::sqrt(1.0 + (z_pos * z_pos) / (zr * zr));
}

double laguerre(int p, int alpha, double x) {
  if (p < 0) throw std::invalid_argument("laguerre: p must be nonnegative");
  if (alpha < 0) throw std::invalid_argument("laguerre: alpha must be nonnegative");
  if (p == 0) return 1.0;
  double prev = 1.0;                       // L_0
  double curr = 1.0 + alpha - x;           // L_1
  for (int k = 2; k <= p; ++k) {
    const double next =
        ((2.0 * k - 1.0 + alpha - x) * curr - (k - 1.0 + alpha) * prev) / k;
    prev = curr;
    curr = next;
  }
  return curr;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

Complex lg_amplitude(const LgBeamParams& params, const CylPoint& pt) {
  params.validate();
  if (pt.r < 0.0) throw std::invalid_argument("lg_amplitude: r must be nonnegative");

  const int abs_l = std::abs(params.l);
  const double zr = params.rayleigh_range();
  const double wz = params.beam_radius_at(pt.z);

  // L2-normalizing constant; the divergence factor 1/sqrt(1 + z^2/zr^2) is
  // folded into the 1/wz dependence.
  const double norm =
      std::sqrt(2.0 * factorial(params.p) /
                (std::numbers::pi * factorial(params.p + abs_l))) / wz;

  const double rho = pt.r * std::numbers::sqrt2 / wz;
  const double radial = std::pow(rho, abs_l) * std::exp(-pt.r * pt.r / (wz * wz)) *
                        laguerre(params.p, abs_l, 2.0 * pt.r * pt.r / (wz * wz));

  double phase = -params.l * pt.phi;
  if (pt.z != 0.0) {
    phase += params.wavenumber() * pt.r * pt.r * pt.z / (2.0 * (pt.z * pt.z + zr * zr));
    phase += (2.0 * params.p + abs_l + 1.0) * std::atan(pt.z / zr);
  }
  return norm * radial * Complex{std::cos(phase), std::sin(phase)};
}

double peak_radius(const LgBeamParams& params) {
  params.validate();
  if (params.p != 0) {
    throw std::domain_error("peak_radius: only defined for p = 0");
  }
  return params.beam_radius() * std::sqrt(std::abs(params.l) / 2.0);
}

std::string field_scan_csv(const LgBeamParams& params, const std::vector<double>& radii,
                           const std::vector<double>& azimuths) {
  std::ostringstream out;
  out.precision(17);
  out << "r,phi,re,im\n";
  for (double r : radii) {
    for (double phi : azimuths) {
      const Complex u = lg_amplitude(params, CylPoint{r, phi, params.z});
      out << r << ',' << phi << ',' << u.real() << ',' << u.imag() << '\n';
    }
  }
  return out.str();
}

}  // namespace lgshor
