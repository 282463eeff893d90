#pragma once

// Paraxial TEM00 beams and the plano-concave resonator they live in.
//
// The flat mirror of the resonator is the fiber end face, so the cavity
// eigenmode has its waist on that face and the curved mirror sits at
// z = cavity_length. All lengths are in meters.

#include <cmath>
#include <limits>

#include "sqzkit/errors.hpp"
#include "sqzkit/units.hpp"

namespace sqzkit {

// Refractive index of KTP at 1064 nm used when no crystal index is given.
inline constexpr double kKtpIndex = 1.83;

inline constexpr double kFlat = std::numeric_limits<double>::infinity();

struct GaussianBeam {
  double waist_radius;  // 1/e^2 intensity radius w0
  double wavelength;    // vacuum wavelength
  double refractive_index = 1.0;
  double waist_position = 0.0;

  GaussianBeam(double waist, double lambda, double index = 1.0,
               double position = 0.0)
      : waist_radius(waist),
        wavelength(lambda),
        refractive_index(index),
        waist_position(position) {
    if (!(waist > 0.0)) throw DomainError("GaussianBeam: waist_radius must be > 0");
    if (!(lambda > 0.0)) throw DomainError("GaussianBeam: wavelength must be > 0");
    if (!(index >= 1.0)) throw DomainError("GaussianBeam: refractive_index must be >= 1");
  }

  GaussianBeam in_medium(double index) const {
    return GaussianBeam(waist_radius, wavelength, index, waist_position);
  }
};

struct CavityGeometry {
  double mirror_curvature;      // Rc, positive for a concave mirror
  double cavity_length;         // flat-to-curved distance d
  double coupler_transmission;  // T
  double round_trip_loss;       // L
  double round_trip_length;     // l, enters the cavity bandwidth

  CavityGeometry(double rc, double length, double transmission = 1.0,
                 double loss = 0.0, double round_trip = 0.0)
      : mirror_curvature(rc),
        cavity_length(length),
        coupler_transmission(transmission),
        round_trip_loss(loss),
        round_trip_length(round_trip > 0.0 ? round_trip : 2.0 * length) {
    if (!(rc > 0.0)) throw DomainError("CavityGeometry: mirror_curvature must be > 0");
    if (!(length > 0.0)) throw DomainError("CavityGeometry: cavity_length must be > 0");
    if (!(transmission > 0.0 && transmission <= 1.0)) {
      throw DomainError("CavityGeometry: coupler_transmission must be in (0,1]");
    }
    if (!(loss >= 0.0 && loss < 1.0)) {
      throw DomainError("CavityGeometry: round_trip_loss must be in [0,1)");
    }
    if (transmission + loss > 1.0 + 1e-12) {
      throw DomainError("CavityGeometry: T + L must not exceed 1");
    }
  }

  bool is_stable() const { return cavity_length < mirror_curvature; }
};

inline double rayleigh_range(const GaussianBeam& beam) {
  return kPi * beam.waist_radius * beam.waist_radius * beam.refractive_index /
         beam.wavelength;
}

// Length over which the beam stays within sqrt(2) of its waist, taken as
// the useful nonlinear interaction length of the crystal.
inline double confocal_crystal_length(const GaussianBeam& beam) {
  return 2.0 * rayleigh_range(beam);
}

inline double beam_radius_at(const GaussianBeam& beam, double z) {
  const double u = (z - beam.waist_position) / rayleigh_range(beam);
  return beam.waist_radius * std::sqrt(1.0 + u * u);
}

// Eigenmode waist on the flat mirror: w0^2 = (lambda/pi) sqrt(d (Rc - d)).
inline double hemispherical_waist(const CavityGeometry& cavity, double wavelength) {
  if (!cavity.is_stable()) {
    throw StabilityError("hemispherical_waist: cavity_length must be shorter than "
                         "mirror_curvature (0 < d < Rc)");
  }
  if (!(wavelength > 0.0)) throw DomainError("hemispherical_waist: wavelength must be > 0");
  const double d = cavity.cavity_length;
  const double gap = cavity.mirror_curvature - d;
  return std::sqrt(wavelength / kPi * std::sqrt(d * gap));
}

struct CavityLengthRoots {
  double near_hemispherical;  // primary root, closest to Rc
  double near_planar;

  double hemispherical_gap(double rc) const { return rc - near_hemispherical; }
};

// Both cavity lengths whose eigenmode has the requested waist. The roots
// solve d^2 - Rc d + zR^2 = 0 and coincide at zR = Rc/2.
inline CavityLengthRoots cavity_length_for_waist(double target_waist,
                                                 double mirror_curvature,
                                                 double wavelength) {
  if (!(target_waist > 0.0 && mirror_curvature > 0.0 && wavelength > 0.0)) {
    throw DomainError("cavity_length_for_waist: arguments must be positive");
  }
  const double zr = kPi * target_waist * target_waist / wavelength;
  const double disc = mirror_curvature * mirror_curvature - 4.0 * zr * zr;
  if (disc < 0.0) {
    throw NoSolutionError(
        "cavity_length_for_waist: waist too large for this mirror; need "
        "pi*w0^2/lambda <= Rc/2");
  }
  const double root = std::sqrt(disc);
  CavityLengthRoots roots{};
  roots.near_hemispherical = 0.5 * (mirror_curvature + root);
  // Product of roots is zR^2; avoids cancellation in (Rc - root).
  roots.near_planar = zr * zr / roots.near_hemispherical;
  return roots;
}

// Spot size on the curved mirror relative to its radius of curvature.
// Larger values mean the paraxial description is less trustworthy.
inline double paraxial_figure_of_merit(const CavityGeometry& cavity,
                                       const GaussianBeam& beam) {
  return beam_radius_at(beam, cavity.cavity_length) / cavity.mirror_curvature;
}

// Power coupling between two co-axial Gaussian modes observed at a common
// plane, given each one's spot size and wavefront curvature there (kFlat
// for a plane wavefront). mode_purity discounts non-Gaussian content of a
// real fiber mode.
inline double gaussian_overlap(const GaussianBeam& beam_a, const GaussianBeam& beam_b,
                               double curvature_a = kFlat, double curvature_b = kFlat,
                               double mode_purity = 1.0) {
  if (std::abs(beam_a.wavelength - beam_b.wavelength) > 1e-12 * beam_a.wavelength ||
      beam_a.refractive_index != beam_b.refractive_index) {
    throw DomainError("gaussian_overlap: beams must share wavelength and medium");
  }
  if (!(mode_purity >= 0.0 && mode_purity <= 1.0)) {
    throw DomainError("gaussian_overlap: mode_purity must be in [0,1]");
  }
  const double wa = beam_a.waist_radius;
  const double wb = beam_b.waist_radius;
  const double lambda = beam_a.wavelength / beam_a.refractive_index;
  const double ratio = wa / wb + wb / wa;
  const double dcurv = 1.0 / curvature_a - 1.0 / curvature_b;
  const double phase = kPi * wa * wb / lambda * dcurv;
  return mode_purity * 4.0 / (ratio * ratio + phase * phase);
}

}  // namespace sqzkit
