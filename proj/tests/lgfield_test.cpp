#include "lgshor/lgfield.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "doctest.h"

using namespace lgshor;

namespace {

// Independent oracle: explicit finite-series evaluation in extended
// precision, L_p^a(x) = sum_{k=0}^{p} (-1)^k C(p+a, p-k) x^k / k!.
// `magnitude` is the sum of absolute term values, the scale both routes
// round against (the value itself can cancel to zero).
struct SeriesResult {
  double value;
  double magnitude;
};

SeriesResult laguerre_series(int p, int alpha, double x) {
  auto binomial = [](int n, int r) {
    long double value = 1.0L;
    for (int i = 1; i <= r; ++i) value *= static_cast<long double>(n - r + i) / i;
    return value;
  };
  long double sum = 0.0L;
  long double mag = 0.0L;
  long double x_pow = 1.0L;
  long double k_fact = 1.0L;
  for (int k = 0; k <= p; ++k) {
    if (k > 0) {
      x_pow *= x;
      k_fact *= k;
    }
    const long double term = binomial(p + alpha, p - k) * x_pow / k_fact;
    sum += (k % 2 == 0) ? term : -term;
    mag += std::abs(term);
  }
  return {static_cast<double>(sum), static_cast<double>(mag)};
}

const LgBeamParams kDefaultBeam{};  // p = 0, l = 1, w0 = 1 mm, 632 nm, z = 0

}  // namespace

TEST_CASE("laguerre recurrence against closed forms and the series oracle") {
  CHECK(laguerre(0, 0, 0.7) == 1.0);
  CHECK(laguerre(0, 3, 12.0) == 1.0);
  CHECK(laguerre(1, 2, 3.0) == doctest::Approx(0.0).epsilon(1e-15));  // 1 + 2 - 3

  // Frozen from the series oracle: L_3^1(2.5) = -53/48.
  CHECK(laguerre(3, 1, 2.5) == doctest::Approx(-53.0 / 48.0).epsilon(1e-13));
  CHECK(laguerre_series(3, 1, 2.5).value == doctest::Approx(-53.0 / 48.0).epsilon(1e-13));

  SUBCASE("matches the series oracle to 1e-12 relative for p <= 6") {
    for (int p = 0; p <= 6; ++p) {
      for (int alpha = 0; alpha <= 4; ++alpha) {
        for (double x = 0.0; x <= 20.0; x += 0.8) {
          const auto expected = laguerre_series(p, alpha, x);
          const double got = laguerre(p, alpha, x);
          // Strict relative error away from the polynomial's zeros; near a
          // zero the honest scale is the series' term magnitude, which is
          // what both evaluation routes round against.
          if (std::abs(expected.value) > 1e-6 * expected.magnitude) {
            CHECK(std::abs(got - expected.value) <=
                  1e-12 * std::max(1.0, std::abs(expected.value)));
          } else {
            CHECK(std::abs(got - expected.value) <= 1e-12 * expected.magnitude);
          }
        }
      }
    }
  }

  CHECK_THROWS_AS(laguerre(-1, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(laguerre(1, -1, 1.0), std::invalid_argument);
}

TEST_CASE("beam parameter validation and derived quantities") {
  LgBeamParams params = kDefaultBeam;
  CHECK(params.wavenumber() == doctest::Approx(2.0 * std::numbers::pi / 632e-9));
  CHECK(params.rayleigh_range() == doctest::Approx(std::numbers::pi * 1e-6 / 632e-9));
  CHECK(params.beam_radius() == doctest::Approx(1e-3));

  params.z = params.rayleigh_range();
  CHECK(params.beam_radius() == doctest::Approx(1e-3 * std::numbers::sqrt2));

  LgBeamParams bad = kDefaultBeam;
  bad.waist = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = kDefaultBeam;
  bad.wavelength = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = kDefaultBeam;
  bad.p = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("lg_amplitude reproduces the doughnut structure") {
  SUBCASE("vanishes exactly on axis for l != 0") {
    for (int l : {+1, -1, +2, -2}) {
      LgBeamParams params = kDefaultBeam;
      params.l = l;
      CHECK(lg_amplitude(params, {0.0, 0.3, 0.0}) == Complex{0.0, 0.0});
    }
  }

  SUBCASE("only the azimuthal phase depends on phi") {
    LgBeamParams params = kDefaultBeam;
    const double r = 0.4e-3;
    const Complex u0 = lg_amplitude(params, {r, 0.0, 0.0});
    const Complex u1 = lg_amplitude(params, {r, std::numbers::pi / 2.0, 0.0});
    CHECK(std::abs(u1) == doctest::Approx(std::abs(u0)).epsilon(1e-14));
    // phase difference is exactly -l * pi/2 = -pi/2
    const Complex ratio = u1 / u0;
    CHECK(ratio.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ratio.imag() == doctest::Approx(-1.0).epsilon(1e-12));
  }

  SUBCASE("|u| is azimuth-independent on a phi grid") {
    for (int l : {1, 2, 3}) {
      LgBeamParams params = kDefaultBeam;
      params.l = l;
      const double r = 0.8e-3;
      const double ref = std::abs(lg_amplitude(params, {r, 0.0, 0.0}));
      for (int i = 0; i < 64; ++i) {
        const double phi = 2.0 * std::numbers::pi * i / 64.0;
        CHECK(std::abs(std::abs(lg_amplitude(params, {r, phi, 0.0})) - ref) < 1e-12);
      }
    }
  }

  SUBCASE("negating l conjugates the field at z = 0") {
    for (int l : {1, 2, 3}) {
      LgBeamParams plus = kDefaultBeam;
      plus.l = l;
      LgBeamParams minus = kDefaultBeam;
      minus.l = -l;
      for (double r : {0.2e-3, 0.7e-3, 1.3e-3}) {
        for (double phi : {0.1, 1.0, 2.5, 4.0}) {
          const Complex up = lg_amplitude(plus, {r, phi, 0.0});
          const Complex um = lg_amplitude(minus, {r, phi, 0.0});
          CHECK(std::abs(um - std::conj(up)) < 1e-12);
        }
      }
    }
  }

  SUBCASE("intensity peak sits at w0 sqrt(|l|/2), by dense radial scan") {
    LgBeamParams params = kDefaultBeam;
    params.l = 2;
    double best_r = 0.0, best_mag = -1.0;
    for (int i = 0; i <= 40000; ++i) {
      const double r = i * 1e-7 / 2.0;  // 0 .. 2 mm in 50 nm steps
      const double mag = std::abs(lg_amplitude(params, {r, 0.0, 0.0}));
      if (mag > best_mag) {
        best_mag = mag;
        best_r = r;
      }
    }
    CHECK(best_r == doctest::Approx(1e-3).epsilon(1e-4));  // w0 sqrt(2/2) = w0
  }

  SUBCASE("transverse squared integral is one (normalization choice)") {
    for (int p : {0, 1, 2}) {
      for (int l : {0, 1, 2}) {
        LgBeamParams params = kDefaultBeam;
        params.p = p;
        params.l = l;
        // midpoint quadrature on a polar grid out to 6 w0
        const int nr = 4000, nphi = 32;
        const double rmax = 6e-3;
        const double dr = rmax / nr;
        const double dphi = 2.0 * std::numbers::pi / nphi;
        double integral = 0.0;
        for (int i = 0; i < nr; ++i) {
          const double r = (i + 0.5) * dr;
          double ring = 0.0;
          for (int j = 0; j < nphi; ++j) {
            ring += std::norm(lg_amplitude(params, {r, (j + 0.5) * dphi, 0.0}));
          }
          integral += ring * r * dr * dphi;
        }
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }

  SUBCASE("modes of different l are orthogonal under the disc overlap") {
    const int nr = 2000, nphi = 64;
    const double rmax = 6e-3;
    const double dr = rmax / nr;
    const double dphi = 2.0 * std::numbers::pi / nphi;
    for (auto [la, lb] : {std::pair{1, 2}, {1, -1}, {2, -2}, {-1, 2}}) {
      LgBeamParams pa = kDefaultBeam;
      pa.l = la;
      LgBeamParams pb = kDefaultBeam;
      pb.l = lb;
      Complex overlap{};
      double self = 0.0;
      for (int i = 0; i < nr; ++i) {
        const double r = (i + 0.5) * dr;
        for (int j = 0; j < nphi; ++j) {
          const double phi = (j + 0.5) * dphi;
          const Complex ua = lg_amplitude(pa, {r, phi, 0.0});
          const Complex ub = lg_amplitude(pb, {r, phi, 0.0});
          overlap += std::conj(ua) * ub * r;
          self += std::norm(ua) * r;
        }
      }
      CHECK(std::abs(overlap) / self < 1e-6);
    }
  }
}

TEST_CASE("peak_radius matches the scan oracle and ignores the sign of l") {
  LgBeamParams params = kDefaultBeam;

  params.l = 1;
  CHECK(peak_radius(params) == doctest::Approx(0.7071e-3).epsilon(1e-4));
  params.l = -1;
  CHECK(peak_radius(params) == doctest::Approx(0.7071e-3).epsilon(1e-4));
  params.l = 2;
  const double at_plus_two = peak_radius(params);
  CHECK(at_plus_two == doctest::Approx(1.0e-3).epsilon(1e-12));
  params.l = -2;
  CHECK(peak_radius(params) == at_plus_two);

  SUBCASE("agrees with the numeric argmax of |u|^2") {
    for (int l : {1, 2, 3}) {
      LgBeamParams p = kDefaultBeam;
      p.l = l;
      const double predicted = peak_radius(p);
      double best_r = 0.0, best = -1.0;
      for (int i = 1; i <= 30000; ++i) {
        const double r = i * 1e-7;
        const double mag = std::norm(lg_amplitude(p, {r, 0.0, 0.0}));
        if (mag > best) {
          best = mag;
          best_r = r;
        }
      }
      CHECK(best_r == doctest::Approx(predicted).epsilon(1e-3));
    }
  }

  SUBCASE("p != 0 is unsupported") {
    LgBeamParams p = kDefaultBeam;
    p.p = 1;
    CHECK_THROWS_AS(peak_radius(p), std::domain_error);
  }
}

TEST_CASE("field_scan_csv emits one row per grid point") {
  const std::string csv = field_scan_csv(kDefaultBeam, {0.0, 0.5e-3}, {0.0, 1.0});
  std::istringstream stream(csv);
  std::string line;
  int rows = 0;
  while (std::getline(stream, line)) ++rows;
  CHECK(rows == 5);  // header + 4 samples
  CHECK(csv.rfind("r,phi,re,im\n", 0) == 0);
}
