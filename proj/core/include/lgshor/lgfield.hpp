#pragma once

#include <complex>
#include <string>
#include <vector>

#include "lgshor/modespace.hpp"

namespace lgshor {

/// Physical parameters of a Laguerre-Gaussian mode. `z` is the nominal
/// evaluation plane used by the derived beam quantities and the detection
/// sampler; `lg_amplitude` itself evaluates at the query point's own z.
struct LgBeamParams {
  int p = 0;              // radial index
  int l = 1;              // topological charge
  double waist = 1e-3;    // w0 at z = 0, meters
  double wavelength = 632e-9;  // meters
  double z = 0.0;         // nominal axial position, meters

  void validate() const;

  double wavenumber() const;      // 2 pi / lambda
  double rayleigh_range() const;  // pi w0^2 / lambda
  double beam_radius() const;     // w(z) at the nominal plane
  double beam_radius_at(double z_pos) const;
};

/// Cylindrical evaluation point. phi is taken mod 2 pi.
struct CylPoint {
  double r = 0.0;
  double phi = 0.0;
  double z = 0.0;
};

/// Associated Laguerre polynomial L_p^alpha(x) by the stable three-term
/// recurrence (avoids the factorial-ratio closed form's overflow).
double laguerre(int p, int alpha, double x);

/// Complex LG mode amplitude u_{p,l}(r, phi, z): divergence prefactor,
/// radial power and Gaussian envelope, Laguerre factor, azimuthal phase
/// exp(-i l phi), radial quadratic phase, and Gouy phase. The normalization
/// constant is chosen so the transverse squared integral is 1. Exactly zero
/// on axis for l != 0.
Complex lg_amplitude(const LgBeamParams& params, const CylPoint& pt);

/// Radius of the doughnut intensity peak w(z) sqrt(|l| / 2) at the nominal
/// plane. Only defined for p = 0 (unique peak); throws otherwise.
double peak_radius(const LgBeamParams& params);

/// CSV field scan, "r,phi,re,im" rows over the Cartesian product of the
/// given radii and azimuths at the nominal plane.
std::string field_scan_csv(const LgBeamParams& params, const std::vector<double>& radii,
                           const std::vector<double>& azimuths);

}  // namespace lgshor
